//! Recursive constraint-function model.
//!
//! A chain with `C` components evaluates
//!
//! ```text
//! f = s_C,   s_1 = w_1(f_1(x, theta)),
//! s_k = rho_k( g_k( s_{k-1}, w_k(f_k(x, theta)) ) ),   k = 2..C,
//! f_k(x, theta) = psi_k(theta)' phi_k(x) + eta_k(theta),
//! ```
//!
//! where each `g_k` is one of max/min/plus/minus, and `w_k` (component
//! wrappers) and `rho_k` (stage wrappers) come from the certified Lipschitz
//! catalog. The shape is a left-deep chain, not a general tree: the
//! fast-rate bound counts sums/differences along suffixes of the chain, a
//! quantity only defined on this shape. Conjunctions (`all constraints
//! hold`) use max stages, disjunctions use min.

mod constants;
mod domain;
mod feature;
mod wrapper;

pub use constants::{
    compute_constants, CertLevel, ChainConstants, ComponentConstants, ConstantsOptions,
    ThetaSupport,
};
pub use domain::Domain;
pub use feature::{FeatureMap, Monomial};
pub use wrapper::ScalarWrapper;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{centered_norm, dot};
use wrapper::{Interval, UNKNOWN_INTERVAL};

/// Binary stage operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageOp {
    Max,
    Min,
    Plus,
    Minus,
}

impl StageOp {
    pub fn apply(&self, a: f64, b: f64) -> f64 {
        match self {
            StageOp::Max => a.max(b),
            StageOp::Min => a.min(b),
            StageOp::Plus => a + b,
            StageOp::Minus => a - b,
        }
    }

    /// Does this operator count toward the sum/difference depth `p_k`?
    pub fn is_additive(&self) -> bool {
        matches!(self, StageOp::Plus | StageOp::Minus)
    }

    /// Subgradient weights (d/da, d/db); ties at max/min follow the first
    /// (left, already-accumulated) branch so runs are deterministic.
    fn weights(&self, a: f64, b: f64) -> (f64, f64) {
        match self {
            StageOp::Max => {
                if a >= b {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            }
            StageOp::Min => {
                if a <= b {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            }
            StageOp::Plus => (1.0, 1.0),
            StageOp::Minus => (1.0, -1.0),
        }
    }

    fn interval(&self, a: Interval, b: Interval) -> Interval {
        let lift2 = |x: Option<f64>, y: Option<f64>, f: fn(f64, f64) -> f64| match (x, y) {
            (Some(x), Some(y)) => Some(f(x, y)),
            _ => None,
        };
        match self {
            StageOp::Max => (
                // max lower bound survives if either side is bounded below
                match (a.0, b.0) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    _ => None,
                },
                lift2(a.1, b.1, f64::max),
            ),
            StageOp::Min => (
                lift2(a.0, b.0, f64::min),
                match (a.1, b.1) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    _ => None,
                },
            ),
            StageOp::Plus => (
                lift2(a.0, b.0, |x, y| x + y),
                lift2(a.1, b.1, |x, y| x + y),
            ),
            StageOp::Minus => (
                lift2(a.0, b.1, |x, y| x - y),
                lift2(a.1, b.0, |x, y| x - y),
            ),
        }
    }
}

/// One pseudo-linear component `w(psi(theta)' phi(x) + eta(theta))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainComponent {
    pub psi: FeatureMap,
    pub phi: FeatureMap,
    pub eta: FeatureMap,
    pub wrapper: ScalarWrapper,
}

/// Serializable chain description; the on-disk JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub dimension: usize,
    pub domain: Domain,
    pub components: Vec<ChainComponent>,
    #[serde(default)]
    pub operators: Vec<StageOp>,
    #[serde(default)]
    pub stage_wrappers: Vec<ScalarWrapper>,
}

/// Validated, immutable constraint chain. Evaluation is pure; share freely
/// across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainSpec", into = "ChainSpec")]
pub struct ConstraintChain {
    dimension: usize,
    domain: Domain,
    components: Vec<ChainComponent>,
    operators: Vec<StageOp>,
    stage_wrappers: Vec<ScalarWrapper>,
    theta_dim: Option<usize>,
}

impl TryFrom<ChainSpec> for ConstraintChain {
    type Error = Error;
    fn try_from(spec: ChainSpec) -> Result<Self> {
        build_chain(spec)
    }
}

impl From<ConstraintChain> for ChainSpec {
    fn from(c: ConstraintChain) -> ChainSpec {
        ChainSpec {
            dimension: c.dimension,
            domain: c.domain,
            components: c.components,
            operators: c.operators,
            stage_wrappers: c.stage_wrappers,
        }
    }
}

/// Validates a chain description.
pub fn build_chain(spec: ChainSpec) -> Result<ConstraintChain> {
    let c = spec.components.len();
    if c == 0 {
        return Err(Error::EmptyChain);
    }
    if spec.operators.len() != c - 1 || spec.stage_wrappers.len() != c - 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} components need {} operators and stage wrappers, got {} and {}",
            c,
            c - 1,
            spec.operators.len(),
            spec.stage_wrappers.len()
        )));
    }
    if spec.domain.dimension() != spec.dimension {
        return Err(Error::DimensionMismatch(format!(
            "domain dimension {} != declared dimension {}",
            spec.domain.dimension(),
            spec.dimension
        )));
    }

    let mut theta_dim: Option<usize> = None;
    let mut merge_theta = |d: Option<usize>| -> Result<()> {
        if let Some(d) = d {
            match theta_dim {
                None => theta_dim = Some(d),
                Some(prev) if prev != d => {
                    return Err(Error::DimensionMismatch(format!(
                        "components disagree on the parameter arity: {prev} vs {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    };

    for (k, comp) in spec.components.iter().enumerate() {
        comp.phi.validate(spec.dimension)?;
        comp.wrapper.validate()?;
        if comp.psi.output_dim() != comp.phi.output_dim() {
            return Err(Error::DimensionMismatch(format!(
                "component {}: psi outputs {} features but phi outputs {}",
                k + 1,
                comp.psi.output_dim(),
                comp.phi.output_dim()
            )));
        }
        if comp.eta.output_dim() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "component {}: eta must be scalar, got dimension {}",
                k + 1,
                comp.eta.output_dim()
            )));
        }
        merge_theta(comp.psi.input_dim())?;
        merge_theta(comp.eta.input_dim())?;
        if let Some(td) = theta_dim {
            comp.psi.validate(td)?;
            comp.eta.validate(td)?;
        }
    }
    for w in &spec.stage_wrappers {
        w.validate()?;
    }

    let chain = ConstraintChain {
        dimension: spec.dimension,
        domain: spec.domain,
        components: spec.components,
        operators: spec.operators,
        stage_wrappers: spec.stage_wrappers,
        theta_dim,
    };
    chain.check_sqrt_domains()?;
    Ok(chain)
}

impl ConstraintChain {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn components(&self) -> &[ChainComponent] {
        &self.components
    }

    pub fn operators(&self) -> &[StageOp] {
        &self.operators
    }

    pub fn stage_wrappers(&self) -> &[ScalarWrapper] {
        &self.stage_wrappers
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn theta_dim(&self) -> Option<usize> {
        self.theta_dim
    }

    /// Lipschitz constant of component wrapper k (0-based).
    pub fn phi_bar(&self, k: usize) -> f64 {
        self.components[k].wrapper.lipschitz()
    }

    /// `prod_{j=k..C} rho_bar_j` with the first stage counting as 1
    /// (0-based k).
    pub fn rho_product(&self, k: usize) -> f64 {
        self.stage_wrappers
            .iter()
            .skip(k.saturating_sub(1))
            .map(|w| w.lipschitz())
            .product()
    }

    /// Number of plus/minus stage operators with index >= k (0-based k).
    pub fn additive_depth(&self, k: usize) -> u32 {
        self.operators
            .iter()
            .skip(k.saturating_sub(1))
            .filter(|op| op.is_additive())
            .count() as u32
    }

    pub fn evaluator(&self) -> ChainEvaluator<'_> {
        ChainEvaluator::new(self)
    }

    /// `f(x, theta)` with dimension checks; allocation-free hot loops
    /// should hold a [`ChainEvaluator`] instead.
    pub fn evaluate(&self, x: &[f64], theta: &[f64]) -> Result<f64> {
        self.check_dims(x, theta)?;
        Ok(self.evaluator().value(x, theta))
    }

    pub fn check_dims(&self, x: &[f64], theta: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch(format!(
                "x has dimension {}, chain needs {}",
                x.len(),
                self.dimension
            )));
        }
        if let Some(td) = self.theta_dim {
            if theta.len() != td {
                return Err(Error::DimensionMismatch(format!(
                    "theta has dimension {}, chain needs {td}",
                    theta.len()
                )));
            }
        }
        // selections without a pinned arity still need enough coordinates
        for comp in &self.components {
            comp.psi.validate(theta.len())?;
            comp.eta.validate(theta.len())?;
        }
        Ok(())
    }

    /// Shifted square roots are only accepted when the wrapped value is
    /// provably nonnegative; the interval analysis is conservative
    /// (unknown psi/eta ranges propagate as unbounded).
    fn check_sqrt_domains(&self) -> Result<()> {
        let raw_interval = |comp: &ChainComponent| -> Interval {
            let psi_zero = match &comp.psi {
                FeatureMap::Affine { matrix, .. } => {
                    matrix.iter().flatten().all(|&v| v == 0.0)
                }
                FeatureMap::Monomials { terms } => terms.iter().all(|t| t.coefficient == 0.0),
                _ => false,
            };
            if !psi_zero {
                return UNKNOWN_INTERVAL;
            }
            match &comp.eta {
                FeatureMap::Affine { matrix, offset }
                    if matrix.iter().flatten().all(|&v| v == 0.0) =>
                {
                    (Some(offset[0]), Some(offset[0]))
                }
                FeatureMap::Lookup { table, .. } => {
                    let lo = table.iter().map(|r| r[0]).fold(f64::INFINITY, f64::min);
                    let hi = table.iter().map(|r| r[0]).fold(f64::NEG_INFINITY, f64::max);
                    (Some(lo), Some(hi))
                }
                _ => UNKNOWN_INTERVAL,
            }
        };

        let guard = |wrapper: &ScalarWrapper, arg: Interval, what: String| -> Result<()> {
            if let ScalarWrapper::ShiftedSqrt { .. } = wrapper {
                match arg.0 {
                    Some(lo) if lo >= -1e-12 => {}
                    Some(lo) => {
                        return Err(Error::SqrtDomain(format!(
                            "{what}: argument can reach {lo} < 0"
                        )))
                    }
                    None => {
                        return Err(Error::SqrtDomain(format!(
                            "{what}: argument range cannot be proven nonnegative"
                        )))
                    }
                }
            }
            Ok(())
        };

        let first = &self.components[0];
        let mut ival = raw_interval(first);
        guard(&first.wrapper, ival, "component 1 wrapper".into())?;
        ival = first.wrapper.output_interval(ival);

        for (k, comp) in self.components.iter().enumerate().skip(1) {
            let raw = raw_interval(comp);
            guard(&comp.wrapper, raw, format!("component {} wrapper", k + 1))?;
            let wrapped = comp.wrapper.output_interval(raw);
            let combined = self.operators[k - 1].interval(ival, wrapped);
            let stage = &self.stage_wrappers[k - 1];
            guard(stage, combined, format!("stage {} wrapper", k + 1))?;
            ival = stage.output_interval(combined);
        }
        Ok(())
    }
}

/// `max(1, ||phi_k(x) - center_k||)` over the components: the radius that
/// scales the data-dependent violation bound at a specific candidate.
pub fn lambda_bar(chain: &ConstraintChain, x: &[f64], centers: &[Vec<f64>]) -> Result<f64> {
    Ok(lambda_at(chain, x, centers)?.max(1.0))
}

/// Un-floored version of [`lambda_bar`]; what the regularized solver
/// actually minimizes.
pub(crate) fn lambda_at(chain: &ConstraintChain, x: &[f64], centers: &[Vec<f64>]) -> Result<f64> {
    if x.len() != chain.dimension {
        return Err(Error::DimensionMismatch(format!(
            "x has dimension {}, chain needs {}",
            x.len(),
            chain.dimension
        )));
    }
    if centers.len() != chain.num_components() {
        return Err(Error::DimensionMismatch(format!(
            "{} centers for {} components",
            centers.len(),
            chain.num_components()
        )));
    }
    let mut worst = 0.0f64;
    let mut buf = Vec::new();
    for (comp, center) in chain.components.iter().zip(centers) {
        if center.len() != comp.phi.output_dim() {
            return Err(Error::DimensionMismatch(format!(
                "center length {} != feature dimension {}",
                center.len(),
                comp.phi.output_dim()
            )));
        }
        comp.phi.eval_into(x, &mut buf);
        worst = worst.max(centered_norm(&buf, center));
    }
    Ok(worst)
}

/// Reusable evaluation workspace; one per thread in parallel loops.
pub struct ChainEvaluator<'a> {
    chain: &'a ConstraintChain,
    psi_buf: Vec<Vec<f64>>,
    phi_buf: Vec<f64>,
    eta_buf: Vec<f64>,
    raw: Vec<f64>,
    wrapped: Vec<f64>,
    stage: Vec<f64>,
    gate: Vec<f64>,
}

impl<'a> ChainEvaluator<'a> {
    fn new(chain: &'a ConstraintChain) -> Self {
        let c = chain.num_components();
        ChainEvaluator {
            chain,
            psi_buf: vec![Vec::new(); c],
            phi_buf: Vec::new(),
            eta_buf: Vec::new(),
            raw: vec![0.0; c],
            wrapped: vec![0.0; c],
            stage: vec![0.0; c],
            gate: vec![0.0; c],
        }
    }

    fn forward(&mut self, x: &[f64], theta: &[f64]) {
        let chain = self.chain;
        for (k, comp) in chain.components.iter().enumerate() {
            comp.psi.eval_into(theta, &mut self.psi_buf[k]);
            comp.phi.eval_into(x, &mut self.phi_buf);
            comp.eta.eval_into(theta, &mut self.eta_buf);
            self.raw[k] = dot(&self.psi_buf[k], &self.phi_buf) + self.eta_buf[0];
            self.wrapped[k] = comp.wrapper.apply(self.raw[k]);
        }
        self.stage[0] = self.wrapped[0];
        self.gate[0] = self.wrapped[0];
        for k in 1..chain.num_components() {
            let g = chain.operators[k - 1].apply(self.stage[k - 1], self.wrapped[k]);
            self.gate[k] = g;
            self.stage[k] = chain.stage_wrappers[k - 1].apply(g);
        }
    }

    /// `f(x, theta)`; assumes dimensions were checked once upfront.
    pub fn value(&mut self, x: &[f64], theta: &[f64]) -> f64 {
        self.forward(x, theta);
        self.stage[self.chain.num_components() - 1]
    }

    /// Value plus a subgradient with respect to x, written into `grad`.
    pub fn value_and_gradient(&mut self, x: &[f64], theta: &[f64], grad: &mut [f64]) -> f64 {
        self.forward(x, theta);
        grad.fill(0.0);
        let chain = self.chain;
        let c = chain.num_components();
        let mut mult = 1.0f64;
        for k in (1..c).rev() {
            mult *= chain.stage_wrappers[k - 1].derivative(self.gate[k]);
            let (da, db) = chain.operators[k - 1].weights(self.stage[k - 1], self.wrapped[k]);
            let comp_factor =
                mult * db * chain.components[k].wrapper.derivative(self.raw[k]);
            if comp_factor != 0.0 {
                self.accumulate_component(k, comp_factor, x, grad);
            }
            mult *= da;
            if mult == 0.0 {
                return self.stage[c - 1];
            }
        }
        let factor = mult * chain.components[0].wrapper.derivative(self.raw[0]);
        if factor != 0.0 {
            self.accumulate_component(0, factor, x, grad);
        }
        self.stage[c - 1]
    }

    fn accumulate_component(&mut self, k: usize, factor: f64, x: &[f64], grad: &mut [f64]) {
        // d f_k / d x = Jphi(x)^T psi(theta); scale psi by the chain factor
        self.phi_buf.clear();
        self.phi_buf
            .extend(self.psi_buf[k].iter().map(|&p| p * factor));
        self.chain.components[k]
            .phi
            .add_jacobian_transpose_times(x, &self.phi_buf, grad);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rng::{substream, Purpose};
    use rand::Rng;

    #[test]
    fn circle_chain_matches_closed_form() {
        let chain = fixtures::circle_chain();
        // origin is strictly inside the unit disc
        assert_eq!(chain.evaluate(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), -1.0);
        assert_eq!(chain.evaluate(&[2.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn zero_scale_wrapper_gives_constant_zero_chain() {
        let mut spec: ChainSpec = fixtures::circle_chain().into();
        spec.components[0].wrapper = ScalarWrapper::Scale { factor: 0.0 };
        let chain = build_chain(spec).unwrap();
        assert_eq!(chain.phi_bar(0), 0.0);
        assert_eq!(chain.evaluate(&[1.5, -0.5], &[0.3, 0.4]).unwrap(), 0.0);
    }

    #[test]
    fn max_min_stage_semantics() {
        // three constant components: f1=-1, f2=3, f3=-2 combined as
        // max(min(f1, f2), f3)
        let comp = |v: f64| ChainComponent {
            psi: FeatureMap::constant_scalar(1, 0.0),
            phi: FeatureMap::CoordinateSelection { indices: vec![0] },
            eta: FeatureMap::constant_scalar(1, v),
            wrapper: ScalarWrapper::Identity,
        };
        let chain = build_chain(ChainSpec {
            dimension: 1,
            domain: Domain::symmetric_box(1, 1.0).unwrap(),
            components: vec![comp(-1.0), comp(3.0), comp(-2.0)],
            operators: vec![StageOp::Min, StageOp::Max],
            stage_wrappers: vec![ScalarWrapper::Identity; 2],
        })
        .unwrap();
        assert_eq!(chain.evaluate(&[0.0], &[0.0]).unwrap(), -1.0);
    }

    /// The recursion agrees with a straight-line unrolled reimplementation
    /// on C <= 3 chains at 1000 random points.
    #[test]
    fn recursion_matches_unrolled_reference() {
        let chain = fixtures::plus_sine_chain();
        let mut rng = substream(3, Purpose::Constants, 7);
        let mut eval = chain.evaluator();
        for _ in 0..1000 {
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let t = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            // by hand: 0.5 * ( sin(t.x) + (t0 * x0 x1 - 1) )
            let by_hand = 0.5 * ((t[0] * x[0] + t[1] * x[1]).sin() + (t[0] * x[0] * x[1] - 1.0));
            let got = eval.value(&x, &t);
            assert!((got - by_hand).abs() < 1e-12, "{got} vs {by_hand}");
        }

        let conj = fixtures::conjunction_chain();
        let mut eval = conj.evaluator();
        for _ in 0..1000 {
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let t = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let f1 = t[0] * x[0] + t[1] * x[1] - 1.0;
            let f2 = t[0] * (x[0] - 0.5) + t[1] * x[1] - 1.0;
            let got = eval.value(&x, &t);
            assert!((got - f1.max(f2)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let chains = [
            fixtures::circle_chain(),
            fixtures::conjunction_chain(),
            fixtures::plus_sine_chain(),
        ];
        let mut rng = substream(5, Purpose::Constants, 9);
        for chain in &chains {
            let mut eval = chain.evaluator();
            let mut grad = vec![0.0; 2];
            for _ in 0..200 {
                let x = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
                let t = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let v = eval.value_and_gradient(&x, &t, &mut grad);
                let h = 1e-6;
                for i in 0..2 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[i] += h;
                    xm[i] -= h;
                    let fd = (eval.value(&xp, &t) - eval.value(&xm, &t)) / (2.0 * h);
                    // away from kinks the subgradient is the gradient
                    if (eval.value(&xp, &t) - v).abs() < 0.4 {
                        assert!(
                            (grad[i] - fd).abs() < 1e-4,
                            "grad[{i}]={} vs fd={fd}",
                            grad[i]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_psi_phi_dimension_mismatch() {
        let spec = ChainSpec {
            dimension: 2,
            domain: Domain::symmetric_box(2, 1.0).unwrap(),
            components: vec![ChainComponent {
                psi: FeatureMap::CoordinateSelection { indices: vec![0] },
                phi: FeatureMap::identity(2),
                eta: FeatureMap::constant_scalar(2, 0.0),
                wrapper: ScalarWrapper::Identity,
            }],
            operators: vec![],
            stage_wrappers: vec![],
        };
        assert!(matches!(
            build_chain(spec),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rejects_empty_component_list() {
        let spec = ChainSpec {
            dimension: 1,
            domain: Domain::symmetric_box(1, 1.0).unwrap(),
            components: vec![],
            operators: vec![],
            stage_wrappers: vec![],
        };
        assert!(matches!(build_chain(spec), Err(Error::EmptyChain)));
    }

    #[test]
    fn sqrt_stage_accepts_proven_nonnegative_argument() {
        // sqrt(0.1 + (sin(f1) + 1)): the plus stage with a constant 1
        // component keeps the argument in [0, 2]
        let chain = fixtures::sqrt_sine_chain();
        let v = chain.evaluate(&[1.0, 1.0], &[0.5, 0.0]).unwrap();
        assert!(v > 0.0 && v <= (2.1f64).sqrt() + 1e-12);
    }

    #[test]
    fn sqrt_stage_rejects_unproven_argument() {
        // sqrt directly over an unbounded linear component must fail
        let spec = ChainSpec {
            dimension: 2,
            domain: Domain::symmetric_box(2, 2.0).unwrap(),
            components: vec![ChainComponent {
                psi: FeatureMap::identity(2),
                phi: FeatureMap::identity(2),
                eta: FeatureMap::constant_scalar(2, 0.0),
                wrapper: ScalarWrapper::ShiftedSqrt { shift: 1.1 },
            }],
            operators: vec![],
            stage_wrappers: vec![],
        };
        assert!(matches!(build_chain(spec), Err(Error::SqrtDomain(_))));
    }

    #[test]
    fn evaluate_rejects_wrong_dimensions() {
        let chain = fixtures::circle_chain();
        assert!(chain.evaluate(&[0.0], &[1.0, 0.0]).is_err());
        assert!(chain.evaluate(&[0.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn lambda_bar_floors_at_one() {
        let chain = fixtures::circle_chain();
        let zeros = vec![vec![0.0, 0.0]];
        assert_eq!(lambda_bar(&chain, &[0.0, 0.0], &zeros).unwrap(), 1.0);
        assert_eq!(lambda_bar(&chain, &[2.0, 0.0], &zeros).unwrap(), 2.0);
        let centered = vec![vec![2.0, 0.0]];
        assert_eq!(lambda_bar(&chain, &[2.0, 0.0], &centered).unwrap(), 1.0);
    }
}
