//! Certified capacity constants.
//!
//! Every violation bound consumes, per component k:
//!
//! ```text
//! tau_k    = sup over the parameter support of ||psi_k(theta)||
//! lambda_k = sup over the domain of ||phi_k(x) - center_k||
//! ```
//!
//! together with the wrapper Lipschitz constants and the count `p_k` of
//! plus/minus stages at or after k. Suprema are computed exactly for the
//! catalog forms that admit it (coordinate-separable maximization over
//! boxes, interval arithmetic for monomials, enumeration of finite
//! supports and lookup tables, vertex enumeration for small dense affine
//! maps) and otherwise estimated by randomized maximization and flagged:
//! a sampled estimate can undershoot the true supremum, so every
//! certificate consuming one is marked non-certified.
//!
//! Integer coordinates are relaxed to their enclosing interval when
//! maximizing; the supremum over the relaxation upper-bounds the supremum
//! over any subset of the box, so certified levels are preserved.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{ConstraintChain, Domain, FeatureMap};
use crate::error::{Error, Result};
use crate::rng::{substream, Purpose};
use crate::util::{centered_norm, fnv1a64, norm};

/// How a constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertLevel {
    Exact,
    SampledEstimate,
}

/// Bounded description of the parameter support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaSupport {
    /// Unit Euclidean sphere in the given dimension.
    Sphere { dim: usize },
    /// Axis-aligned box.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Euclidean ball; `truncated` marks quantile truncations of
    /// unbounded distributions, which can never yield certified constants.
    Ball {
        center: Vec<f64>,
        radius: f64,
        truncated: bool,
    },
    /// Finite set of parameter values (empirical distributions).
    Finite { rows: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantsOptions {
    /// Draws for randomized maximization fallbacks.
    pub sample_budget: usize,
    pub seed: u64,
    /// Densest affine map size still solved by vertex enumeration (2^d).
    pub vertex_enum_limit: usize,
    /// Largest per-monomial variable count enumerated exactly (3^v).
    pub monomial_var_limit: usize,
}

impl Default for ConstantsOptions {
    fn default() -> Self {
        ConstantsOptions {
            sample_budget: 20_000,
            seed: 0,
            vertex_enum_limit: 12,
            monomial_var_limit: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentConstants {
    pub tau: f64,
    pub tau_level: CertLevel,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau_witness: Option<Vec<f64>>,
    /// Centered feature radius; equals the plain radius when the center
    /// is zero.
    pub lambda: f64,
    pub lambda_level: CertLevel,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_witness: Option<Vec<f64>>,
    pub center: Vec<f64>,
    /// Lipschitz constant of the component wrapper.
    pub phi_bar: f64,
    /// prod of stage-wrapper Lipschitz constants from this component on.
    pub rho_product: f64,
    /// Number of plus/minus stage operators from this component on.
    pub p: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConstants {
    pub components: Vec<ComponentConstants>,
}

impl ChainConstants {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True when every consumed supremum is exact.
    pub fn certified(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.tau_level == CertLevel::Exact && c.lambda_level == CertLevel::Exact)
    }

    /// True when the feature radii alone are exact (the empirical bounds
    /// do not consume tau).
    pub fn lambda_certified(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.lambda_level == CertLevel::Exact)
    }

    /// `sum_k rho_product_k * phi_bar_k * tau_k * lambda_k`, the numerator
    /// of the worst-case complexity term.
    pub fn worst_case_sum(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.rho_product * c.phi_bar * c.tau * c.lambda)
            .sum()
    }

    /// `rho_product_k * phi_bar_k` for component k.
    pub fn wrap_coefficient(&self, k: usize) -> f64 {
        self.components[k].rho_product * self.components[k].phi_bar
    }

    /// Stable fingerprint of the snapshot for audit replay.
    pub fn snapshot_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("constants serialize");
        format!("{:016x}", fnv1a64(&json))
    }
}

/// Computes the certified constants of a chain over an explicit domain and
/// parameter support. `centers` defaults to the origin for every component
/// (recovering the uncentered radii).
pub fn compute_constants(
    chain: &ConstraintChain,
    domain: &Domain,
    support: &ThetaSupport,
    centers: Option<&[Vec<f64>]>,
    opts: &ConstantsOptions,
) -> Result<ChainConstants> {
    if domain.dimension() != chain.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "domain dimension {} != chain dimension {}",
            domain.dimension(),
            chain.dimension()
        )));
    }
    support.validate()?;
    if let (Some(td), Some(sd)) = (chain.theta_dim(), support.dim()) {
        if td != sd {
            return Err(Error::DimensionMismatch(format!(
                "support dimension {sd} != chain parameter dimension {td}"
            )));
        }
    }
    if let Some(cs) = centers {
        if cs.len() != chain.num_components() {
            return Err(Error::DimensionMismatch(format!(
                "{} centers for {} components",
                cs.len(),
                chain.num_components()
            )));
        }
    }

    let mut components = Vec::with_capacity(chain.num_components());
    for (k, comp) in chain.components().iter().enumerate() {
        let nk = comp.phi.output_dim();
        let center = match centers {
            Some(cs) => {
                if cs[k].len() != nk {
                    return Err(Error::DimensionMismatch(format!(
                        "component {}: center length {} != feature dimension {nk}",
                        k + 1,
                        cs[k].len()
                    )));
                }
                cs[k].clone()
            }
            None => vec![0.0; nk],
        };
        let zero_center = vec![0.0; comp.psi.output_dim()];
        let tau = sup_over_support(&comp.psi, support, &zero_center, opts, (k as u64) * 2)?;
        let lambda = sup_over_box(
            &comp.phi,
            &domain.lower,
            &domain.upper,
            &center,
            opts,
            (k as u64) * 2 + 1,
        )?;
        components.push(ComponentConstants {
            tau: tau.value,
            tau_level: tau.level,
            tau_witness: tau.witness,
            lambda: lambda.value,
            lambda_level: lambda.level,
            lambda_witness: lambda.witness,
            center,
            phi_bar: chain.phi_bar(k),
            rho_product: chain.rho_product(k),
            p: chain.additive_depth(k),
        });
    }
    Ok(ChainConstants { components })
}

impl ThetaSupport {
    pub fn validate(&self) -> Result<()> {
        match self {
            ThetaSupport::Sphere { dim } if *dim == 0 => Err(Error::InvalidDistribution(
                "sphere dimension must be positive".into(),
            )),
            ThetaSupport::Box { lower, upper } => {
                if lower.is_empty() || lower.len() != upper.len() {
                    return Err(Error::InvalidDistribution("box bounds disagree".into()));
                }
                if lower
                    .iter()
                    .zip(upper)
                    .any(|(l, u)| !l.is_finite() || !u.is_finite() || l > u)
                {
                    return Err(Error::UnboundedSupport(
                        "box support must have finite ordered bounds".into(),
                    ));
                }
                Ok(())
            }
            ThetaSupport::Ball { center, radius, .. } => {
                if center.is_empty() || !radius.is_finite() || *radius < 0.0 {
                    return Err(Error::InvalidDistribution("bad ball support".into()));
                }
                Ok(())
            }
            ThetaSupport::Finite { rows } => {
                if rows.is_empty() || rows[0].is_empty() {
                    return Err(Error::InvalidDistribution(
                        "finite support must be nonempty".into(),
                    ));
                }
                let d = rows[0].len();
                if rows.iter().any(|r| r.len() != d) {
                    return Err(Error::InvalidDistribution(
                        "finite support rows must share one length".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ThetaSupport::Sphere { dim } => Some(*dim),
            ThetaSupport::Box { lower, .. } => Some(lower.len()),
            ThetaSupport::Ball { center, .. } => Some(center.len()),
            ThetaSupport::Finite { rows } => rows.first().map(|r| r.len()),
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            ThetaSupport::Sphere { dim } => sample_unit_sphere(*dim, rng),
            ThetaSupport::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&l, &u)| if l == u { l } else { rng.random_range(l..=u) })
                .collect(),
            ThetaSupport::Ball { center, radius, .. } => {
                let dir = sample_unit_sphere(center.len(), rng);
                let r = *radius * rng.random::<f64>().powf(1.0 / center.len() as f64);
                center.iter().zip(dir).map(|(c, d)| c + r * d).collect()
            }
            ThetaSupport::Finite { rows } => rows[rng.random_range(0..rows.len())].clone(),
        }
    }
}

pub(crate) fn sample_unit_sphere(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

struct SupOutcome {
    value: f64,
    level: CertLevel,
    witness: Option<Vec<f64>>,
}

fn sup_over_support(
    map: &FeatureMap,
    support: &ThetaSupport,
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    match support {
        ThetaSupport::Box { lower, upper } => sup_over_box(map, lower, upper, center, opts, stream),
        ThetaSupport::Finite { rows } => {
            let mut best = f64::NEG_INFINITY;
            let mut witness = None;
            for row in rows {
                let v = centered_norm(&map.eval(row), center);
                if v > best {
                    best = v;
                    witness = Some(row.clone());
                }
            }
            Ok(SupOutcome {
                value: best,
                level: CertLevel::Exact,
                witness,
            })
        }
        ThetaSupport::Sphere { dim } => sup_over_sphere(map, *dim, center, opts, stream),
        ThetaSupport::Ball {
            center: mu,
            radius,
            truncated,
        } => {
            let mut out = sup_over_ball(map, mu, *radius, center, opts, stream)?;
            if *truncated {
                out.level = CertLevel::SampledEstimate;
            }
            Ok(out)
        }
    }
}

/// Exact where the structure allows, otherwise randomized; see module docs.
fn sup_over_box(
    map: &FeatureMap,
    lower: &[f64],
    upper: &[f64],
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    match map {
        FeatureMap::CoordinateSelection { indices } => {
            // group the selected entries by coordinate; each group's
            // sum of squares is convex in that coordinate, so per-group
            // endpoint maximization is exact and jointly attained
            let mut witness = lower.to_vec();
            let mut total = 0.0;
            for i in 0..lower.len() {
                let group: Vec<f64> = indices
                    .iter()
                    .enumerate()
                    .filter(|(_, &idx)| idx == i)
                    .map(|(j, _)| center[j])
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let score =
                    |x: f64| -> f64 { group.iter().map(|c| (x - c) * (x - c)).sum::<f64>() };
                let (lo_s, hi_s) = (score(lower[i]), score(upper[i]));
                if hi_s >= lo_s {
                    witness[i] = upper[i];
                    total += hi_s;
                } else {
                    witness[i] = lower[i];
                    total += lo_s;
                }
            }
            Ok(SupOutcome {
                value: total.sqrt(),
                level: CertLevel::Exact,
                witness: Some(witness),
            })
        }
        FeatureMap::Affine { matrix, offset } => {
            let d = lower.len();
            let shifted: Vec<f64> = offset
                .iter()
                .zip(center)
                .map(|(b, c)| b - c)
                .collect();
            let mut col_count = vec![0usize; d];
            for row in matrix {
                for (i, &a) in row.iter().enumerate() {
                    if a != 0.0 {
                        col_count[i] += 1;
                    }
                }
            }
            if col_count.iter().all(|&c| c <= 1) {
                // rows touch pairwise-disjoint coordinates: per-row
                // endpoint maximization of |a'x + t| is jointly attained
                let mut witness = lower.to_vec();
                let mut total = 0.0;
                for (row, &t) in matrix.iter().zip(&shifted) {
                    let mut lo = t;
                    let mut hi = t;
                    for (i, &a) in row.iter().enumerate() {
                        if a > 0.0 {
                            lo += a * lower[i];
                            hi += a * upper[i];
                        } else if a < 0.0 {
                            lo += a * upper[i];
                            hi += a * lower[i];
                        }
                    }
                    let take_hi = hi.abs() >= lo.abs();
                    for (i, &a) in row.iter().enumerate() {
                        if a == 0.0 {
                            continue;
                        }
                        let up = (a > 0.0) == take_hi;
                        witness[i] = if up { upper[i] } else { lower[i] };
                    }
                    total += lo.abs().max(hi.abs()).powi(2);
                }
                return Ok(SupOutcome {
                    value: total.sqrt(),
                    level: CertLevel::Exact,
                    witness: Some(witness),
                });
            }
            if d <= opts.vertex_enum_limit {
                // the norm is convex, so the box maximum sits at a vertex
                let mut best = f64::NEG_INFINITY;
                let mut witness = lower.to_vec();
                let mut x = vec![0.0; d];
                for mask in 0u64..(1u64 << d) {
                    for i in 0..d {
                        x[i] = if mask >> i & 1 == 1 { upper[i] } else { lower[i] };
                    }
                    let mut total = 0.0;
                    for (row, &t) in matrix.iter().zip(&shifted) {
                        let v = crate::util::dot(row, &x) + t;
                        total += v * v;
                    }
                    if total > best {
                        best = total;
                        witness.copy_from_slice(&x);
                    }
                }
                return Ok(SupOutcome {
                    value: best.sqrt(),
                    level: CertLevel::Exact,
                    witness: Some(witness),
                });
            }
            randomized_box(map, lower, upper, center, opts, stream)
        }
        FeatureMap::Monomials { terms } => {
            // disjoint variable sets per term: each term's range endpoints
            // are attained on the {lower, 0, upper} candidate grid of its
            // own variables, independently of the other terms
            let vars: Vec<Vec<usize>> = terms
                .iter()
                .map(|t| {
                    t.exponents
                        .iter()
                        .enumerate()
                        .filter(|&(_, &e)| e > 0 && t.coefficient != 0.0)
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let mut seen = vec![false; lower.len()];
            let mut disjoint = true;
            'outer: for v in &vars {
                for &i in v {
                    if seen[i] {
                        disjoint = false;
                        break 'outer;
                    }
                    seen[i] = true;
                }
            }
            if disjoint && vars.iter().all(|v| v.len() <= opts.monomial_var_limit) {
                let mut witness = lower.to_vec();
                let mut total = 0.0;
                for (j, (term, v)) in terms.iter().zip(&vars).enumerate() {
                    let cj = center[j];
                    if v.is_empty() {
                        let m = if term.exponents.iter().all(|&e| e == 0) {
                            term.coefficient
                        } else {
                            0.0 // coefficient is zero
                        };
                        total += (m - cj) * (m - cj);
                        continue;
                    }
                    let cands: Vec<Vec<f64>> = v
                        .iter()
                        .map(|&i| {
                            let mut c = vec![lower[i], upper[i]];
                            if lower[i] < 0.0 && upper[i] > 0.0 {
                                c.push(0.0);
                            }
                            c
                        })
                        .collect();
                    let mut best = f64::NEG_INFINITY;
                    let mut best_assign: Vec<f64> = v.iter().map(|&i| lower[i]).collect();
                    let mut assign = vec![0usize; v.len()];
                    let mut x = witness.clone();
                    'enumerate: loop {
                        for (slot, &i) in v.iter().enumerate() {
                            x[i] = cands[slot][assign[slot]];
                        }
                        let m = term.eval(&x);
                        let s = (m - cj) * (m - cj);
                        if s > best {
                            best = s;
                            for (slot, &i) in v.iter().enumerate() {
                                best_assign[slot] = x[i];
                            }
                        }
                        // odometer over the candidate grid
                        let mut slot = 0;
                        loop {
                            if slot == assign.len() {
                                break 'enumerate;
                            }
                            assign[slot] += 1;
                            if assign[slot] < cands[slot].len() {
                                break;
                            }
                            assign[slot] = 0;
                            slot += 1;
                        }
                    }
                    for (slot, &i) in v.iter().enumerate() {
                        witness[i] = best_assign[slot];
                    }
                    total += best;
                }
                return Ok(SupOutcome {
                    value: total.sqrt(),
                    level: CertLevel::Exact,
                    witness: Some(witness),
                });
            }
            randomized_box(map, lower, upper, center, opts, stream)
        }
        FeatureMap::Lookup { base, table } => {
            let lo_idx = ((lower[0].round() as i64) - base).clamp(0, table.len() as i64 - 1);
            let hi_idx = ((upper[0].round() as i64) - base).clamp(0, table.len() as i64 - 1);
            let mut best = f64::NEG_INFINITY;
            let mut best_idx = lo_idx;
            for idx in lo_idx..=hi_idx {
                let v = centered_norm(&table[idx as usize], center);
                if v > best {
                    best = v;
                    best_idx = idx;
                }
            }
            let mut witness = lower.to_vec();
            witness[0] = ((best_idx + base) as f64).clamp(lower[0], upper[0]);
            Ok(SupOutcome {
                value: best,
                level: CertLevel::Exact,
                witness: Some(witness),
            })
        }
    }
}

fn sup_over_sphere(
    map: &FeatureMap,
    dim: usize,
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    let centered_at_zero = center.iter().all(|&c| c == 0.0);
    match map {
        FeatureMap::CoordinateSelection { indices } if centered_at_zero => {
            // sup of sum of multiplicity-weighted squares over the sphere
            // is the largest multiplicity
            let mut mult = vec![0usize; dim];
            for &i in indices {
                mult[i] += 1;
            }
            let (best_i, &m) = mult
                .iter()
                .enumerate()
                .max_by_key(|(_, &m)| m)
                .expect("nonempty");
            let mut witness = vec![0.0; dim];
            witness[best_i] = 1.0;
            Ok(SupOutcome {
                value: (m as f64).sqrt(),
                level: CertLevel::Exact,
                witness: Some(witness),
            })
        }
        FeatureMap::Affine { matrix, offset }
            if matrix.iter().flatten().all(|&a| a == 0.0) =>
        {
            let mut witness = vec![0.0; dim];
            witness[0] = 1.0;
            Ok(SupOutcome {
                value: centered_norm(offset, center),
                level: CertLevel::Exact,
                witness: Some(witness),
            })
        }
        FeatureMap::Lookup { base, table } if dim >= 2 => {
            // the first coordinate of a unit vector spans [-1, 1]
            let lo_idx = (((-1.0f64).round() as i64) - base).clamp(0, table.len() as i64 - 1);
            let hi_idx = ((1.0f64.round() as i64) - base).clamp(0, table.len() as i64 - 1);
            let mut best = f64::NEG_INFINITY;
            let mut best_idx = lo_idx;
            for idx in lo_idx..=hi_idx {
                let v = centered_norm(&table[idx as usize], center);
                if v > best {
                    best = v;
                    best_idx = idx;
                }
            }
            let x0 = ((best_idx + base) as f64).clamp(-1.0, 1.0);
            let mut witness = vec![0.0; dim];
            witness[0] = x0;
            witness[1] = (1.0 - x0 * x0).max(0.0).sqrt();
            Ok(SupOutcome {
                value: best,
                level: CertLevel::Exact,
                witness: Some(witness),
            })
        }
        _ => randomized_sup(
            map,
            &ThetaSupport::Sphere { dim },
            center,
            opts,
            stream,
        ),
    }
}

fn sup_over_ball(
    map: &FeatureMap,
    mu: &[f64],
    radius: f64,
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    let centered_at_zero = center.iter().all(|&c| c == 0.0);
    if let FeatureMap::CoordinateSelection { indices } = map {
        let distinct = {
            let mut seen = std::collections::BTreeSet::new();
            indices.iter().all(|i| seen.insert(*i))
        };
        if distinct && centered_at_zero {
            // sup ||P(mu + r v)|| over the unit ball = ||P mu|| + r
            let pmu = map.eval(mu);
            let base = norm(&pmu);
            let mut witness = mu.to_vec();
            if base > 0.0 {
                for (j, &i) in indices.iter().enumerate() {
                    witness[i] += radius * pmu[j] / base;
                }
            } else {
                witness[indices[0]] += radius;
            }
            return Ok(SupOutcome {
                value: base + radius,
                level: CertLevel::Exact,
                witness: Some(witness),
            });
        }
    }
    randomized_sup(
        map,
        &ThetaSupport::Ball {
            center: mu.to_vec(),
            radius,
            truncated: false,
        },
        center,
        opts,
        stream,
    )
}

fn randomized_box(
    map: &FeatureMap,
    lower: &[f64],
    upper: &[f64],
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    randomized_sup(
        map,
        &ThetaSupport::Box {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
        },
        center,
        opts,
        stream,
    )
}

fn randomized_sup(
    map: &FeatureMap,
    support: &ThetaSupport,
    center: &[f64],
    opts: &ConstantsOptions,
    stream: u64,
) -> Result<SupOutcome> {
    if opts.sample_budget == 0 {
        return Err(Error::UnboundedSupport(
            "no exact rule applies and the randomized-maximization budget is zero".into(),
        ));
    }
    let mut rng = substream(opts.seed, Purpose::Constants, stream);
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    let mut buf = Vec::new();
    for _ in 0..opts.sample_budget {
        let p = support.sample(&mut rng);
        map.eval_into(&p, &mut buf);
        let v = centered_norm(&buf, center);
        if v > best {
            best = v;
            witness = Some(p);
        }
    }
    Ok(SupOutcome {
        value: best,
        level: CertLevel::SampledEstimate,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_chain, ChainComponent, ChainSpec, ScalarWrapper, StageOp};
    use crate::fixtures;
    use crate::rng::{substream, Purpose};
    use rand::Rng;

    fn circle_constants() -> ChainConstants {
        let chain = fixtures::circle_chain();
        compute_constants(
            &chain,
            chain.domain(),
            &ThetaSupport::Sphere { dim: 2 },
            None,
            &ConstantsOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn circle_constants_are_exact() {
        let c = circle_constants();
        assert_eq!(c.len(), 1);
        let k = &c.components[0];
        assert_eq!(k.tau, 1.0);
        assert_eq!(k.tau_level, CertLevel::Exact);
        assert!((k.lambda - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(k.lambda_level, CertLevel::Exact);
        assert_eq!(k.p, 0);
        assert_eq!(k.phi_bar, 1.0);
        assert_eq!(k.rho_product, 1.0);
        assert!(c.certified());
    }

    #[test]
    fn singleton_domain_centered_at_its_feature_has_zero_radius() {
        let chain = fixtures::circle_chain();
        let domain = Domain::continuous(vec![0.25, -0.5], vec![0.25, -0.5]).unwrap();
        let centers = vec![vec![0.25, -0.5]];
        let c = compute_constants(
            &chain,
            &domain,
            &ThetaSupport::Sphere { dim: 2 },
            Some(&centers),
            &ConstantsOptions::default(),
        )
        .unwrap();
        assert_eq!(c.components[0].lambda, 0.0);
    }

    #[test]
    fn additive_depth_tracks_plus_and_minus_stages() {
        let mk = |op: StageOp| {
            let mut spec: ChainSpec = fixtures::conjunction_chain().into();
            spec.operators = vec![op];
            build_chain(spec).unwrap()
        };
        for (op, expect) in [
            (StageOp::Plus, (1, 1)),
            (StageOp::Minus, (1, 1)),
            (StageOp::Max, (0, 0)),
            (StageOp::Min, (0, 0)),
        ] {
            let chain = mk(op);
            assert_eq!(chain.additive_depth(0), expect.0, "{op:?}");
            assert_eq!(chain.additive_depth(1), expect.1, "{op:?}");
        }
    }

    /// Appending a plus stage increments every p_k; appending max leaves
    /// them unchanged.
    #[test]
    fn appending_stage_shifts_additive_depth() {
        let base: ChainSpec = fixtures::conjunction_chain().into();
        let extra = base.components[0].clone();
        for (op, bump) in [(StageOp::Plus, 1), (StageOp::Max, 0)] {
            let mut spec = base.clone();
            spec.components.push(extra.clone());
            spec.operators.push(op);
            spec.stage_wrappers.push(ScalarWrapper::Identity);
            let before = build_chain(base.clone()).unwrap();
            let after = build_chain(spec).unwrap();
            for k in 0..2 {
                assert_eq!(after.additive_depth(k), before.additive_depth(k) + bump);
            }
        }
    }

    /// Exact-mode soundness: the reported radius dominates 1e5 random
    /// probes and the witness attains it to 1e-9.
    #[test]
    fn exact_radii_are_sound_and_tight() {
        let lower = vec![-2.0, 0.5, -1.0];
        let upper = vec![1.5, 2.0, 3.0];
        let center3 = vec![0.3, -0.2, 0.1];
        let opts = ConstantsOptions::default();
        let cases: Vec<(FeatureMap, Vec<f64>)> = vec![
            (
                FeatureMap::CoordinateSelection {
                    indices: vec![0, 1, 2],
                },
                center3.clone(),
            ),
            (
                // disjoint rows
                FeatureMap::Affine {
                    matrix: vec![vec![2.0, 0.0, 0.0], vec![0.0, -1.0, 0.5]],
                    offset: vec![0.1, -0.4],
                },
                vec![0.2, 0.3],
            ),
            (
                // dense affine, vertex enumeration
                FeatureMap::Affine {
                    matrix: vec![vec![1.0, -2.0, 0.5], vec![0.3, 1.0, 1.0]],
                    offset: vec![0.0, 0.2],
                },
                vec![-0.1, 0.4],
            ),
            (
                // disjoint monomials: 2 x0^2 and x1 x2
                FeatureMap::Monomials {
                    terms: vec![
                        crate::chain::Monomial {
                            coefficient: 2.0,
                            exponents: vec![2, 0, 0],
                        },
                        crate::chain::Monomial {
                            coefficient: 1.0,
                            exponents: vec![0, 1, 1],
                        },
                    ],
                },
                vec![0.5, -1.0],
            ),
        ];
        let mut rng = substream(17, Purpose::Constants, 99);
        for (map, center) in cases {
            let out = sup_over_box(&map, &lower, &upper, &center, &opts, 0).unwrap();
            assert_eq!(out.level, CertLevel::Exact, "{map:?}");
            let w = out.witness.expect("witness");
            let attained = centered_norm(&map.eval(&w), &center);
            assert!(
                (attained - out.value).abs() <= 1e-9 * out.value.max(1.0),
                "{map:?}: witness attains {attained}, reported {}",
                out.value
            );
            for _ in 0..100_000 {
                let x: Vec<f64> = lower
                    .iter()
                    .zip(&upper)
                    .map(|(&l, &u)| rng.random_range(l..=u))
                    .collect();
                let v = centered_norm(&map.eval(&x), &center);
                assert!(
                    v <= out.value * (1.0 + 1e-12) + 1e-12,
                    "{map:?}: probe {v} exceeds {}",
                    out.value
                );
            }
        }
    }

    #[test]
    fn lookup_supremum_enumerates_reachable_rows() {
        let map = FeatureMap::Lookup {
            base: 0,
            table: vec![vec![1.0, 0.0], vec![0.0, 5.0], vec![3.0, 4.0]],
        };
        // x0 only reaches indices 0..=1
        let out = sup_over_box(
            &map,
            &[0.0, -1.0],
            &[1.2, 1.0],
            &[0.0, 0.0],
            &ConstantsOptions::default(),
            0,
        )
        .unwrap();
        assert_eq!(out.value, 5.0);
        assert_eq!(out.level, CertLevel::Exact);
    }

    #[test]
    fn shared_variable_monomials_fall_back_to_sampling() {
        let map = FeatureMap::Monomials {
            terms: vec![
                crate::chain::Monomial {
                    coefficient: 1.0,
                    exponents: vec![1, 1],
                },
                crate::chain::Monomial {
                    coefficient: 1.0,
                    exponents: vec![2, 0],
                },
            ],
        };
        let out = sup_over_box(
            &map,
            &[-1.0, -1.0],
            &[1.0, 1.0],
            &[0.0, 0.0],
            &ConstantsOptions::default(),
            0,
        )
        .unwrap();
        assert_eq!(out.level, CertLevel::SampledEstimate);
        // true sup is sqrt(1 + 1) at a corner; the estimate must not exceed
        // it and should come close
        assert!(out.value <= 2f64.sqrt() + 1e-12);
        assert!(out.value > 2f64.sqrt() - 0.05);
    }

    #[test]
    fn finite_support_tau_is_exact_enumeration() {
        let rows = fixtures::ellipse_tangent_rows();
        let map = FeatureMap::CoordinateSelection { indices: vec![0, 1] };
        let out = sup_over_support(
            &map,
            &ThetaSupport::Finite { rows: rows.clone() },
            &[0.0, 0.0],
            &ConstantsOptions::default(),
            0,
        )
        .unwrap();
        let expect = rows
            .iter()
            .map(|r| (r[0] * r[0] + r[1] * r[1]).sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(out.value, expect);
        assert_eq!(out.level, CertLevel::Exact);
    }

    #[test]
    fn truncated_ball_is_never_certified() {
        let chain = fixtures::circle_chain();
        let support = ThetaSupport::Ball {
            center: vec![0.0, 0.0],
            radius: 5.2,
            truncated: true,
        };
        let c = compute_constants(
            &chain,
            chain.domain(),
            &support,
            None,
            &ConstantsOptions::default(),
        )
        .unwrap();
        assert_eq!(c.components[0].tau_level, CertLevel::SampledEstimate);
        assert_eq!(c.components[0].tau, 5.2);
        assert!(!c.certified());
        assert!(c.lambda_certified());
    }

    #[test]
    fn plus_chain_constants() {
        // C=2 with g2 = plus: p1 = p2 = 1; exercise the monomial radius
        let chain = fixtures::plus_sine_chain();
        let c = compute_constants(
            &chain,
            chain.domain(),
            &ThetaSupport::Sphere { dim: 2 },
            None,
            &ConstantsOptions::default(),
        )
        .unwrap();
        assert_eq!(c.components[0].p, 1);
        assert_eq!(c.components[1].p, 1);
        assert_eq!(c.components[0].tau, 1.0);
        assert_eq!(c.components[1].tau, 1.0); // selection of one sphere coord
        assert!((c.components[1].lambda - 4.0).abs() < 1e-12); // |x0 x1| over box 2
        assert_eq!(c.components[0].rho_product, 0.5);
        assert_eq!(c.components[1].rho_product, 0.5);
        assert!(c.certified());
    }

    #[test]
    fn snapshot_hash_is_stable() {
        let a = circle_constants();
        let b = circle_constants();
        assert_eq!(a.snapshot_hash(), b.snapshot_hash());
    }

    #[test]
    fn centers_offered_lower_radius_on_asymmetric_box() {
        let chain = fixtures::circle_chain();
        let domain = Domain::continuous(vec![0.0, 1.0], vec![2.0, 3.0]).unwrap();
        let zero = compute_constants(
            &chain,
            &domain,
            &ThetaSupport::Sphere { dim: 2 },
            None,
            &ConstantsOptions::default(),
        )
        .unwrap();
        let mid = vec![vec![1.0, 2.0]];
        let centered = compute_constants(
            &chain,
            &domain,
            &ThetaSupport::Sphere { dim: 2 },
            Some(&mid),
            &ConstantsOptions::default(),
        )
        .unwrap();
        assert!(centered.components[0].lambda < zero.components[0].lambda);
    }
}
