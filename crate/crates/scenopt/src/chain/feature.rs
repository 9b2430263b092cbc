//! Feature maps: the vector-valued building blocks of pseudo-linear
//! components. Closed catalog so norm suprema can be certified.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: f64,
    /// One exponent per input coordinate; fixed nonnegative integers.
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn eval(&self, u: &[f64]) -> f64 {
        let mut v = self.coefficient;
        for (x, &e) in u.iter().zip(&self.exponents) {
            if e > 0 {
                v *= x.powi(e as i32);
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureMap {
    /// `out_j = u[indices[j]]`
    CoordinateSelection { indices: Vec<usize> },
    /// `out = matrix * u + offset`
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// `out_j = terms[j].coefficient * prod_i u_i^{terms[j].exponents[i]}`
    Monomials { terms: Vec<Monomial> },
    /// `out = table[round(u[0]) - base]`, index clamped to the table.
    Lookup { base: i64, table: Vec<Vec<f64>> },
}

impl FeatureMap {
    /// Identity on R^dim as a selection of all coordinates.
    pub fn identity(dim: usize) -> Self {
        FeatureMap::CoordinateSelection {
            indices: (0..dim).collect(),
        }
    }

    /// Constant map (zero linear part).
    pub fn constant(input_dim: usize, values: Vec<f64>) -> Self {
        FeatureMap::Affine {
            matrix: vec![vec![0.0; input_dim]; values.len()],
            offset: values,
        }
    }

    /// Constant scalar, convenient for eta components.
    pub fn constant_scalar(input_dim: usize, value: f64) -> Self {
        Self::constant(input_dim, vec![value])
    }

    pub fn output_dim(&self) -> usize {
        match self {
            FeatureMap::CoordinateSelection { indices } => indices.len(),
            FeatureMap::Affine { offset, .. } => offset.len(),
            FeatureMap::Monomials { terms } => terms.len(),
            FeatureMap::Lookup { table, .. } => table.first().map_or(0, |r| r.len()),
        }
    }

    /// Input arity when the kind pins one down (selection accepts any
    /// vector long enough).
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            FeatureMap::CoordinateSelection { .. } => None,
            FeatureMap::Affine { matrix, .. } => matrix.first().map(|r| r.len()),
            FeatureMap::Monomials { terms } => terms.first().map(|t| t.exponents.len()),
            FeatureMap::Lookup { .. } => None,
        }
    }

    pub fn validate(&self, input_dim: usize) -> Result<()> {
        match self {
            FeatureMap::CoordinateSelection { indices } => {
                if indices.is_empty() {
                    return Err(Error::DimensionMismatch(
                        "coordinate selection must pick at least one index".into(),
                    ));
                }
                if let Some(&bad) = indices.iter().find(|&&i| i >= input_dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "selection index {bad} out of range for input dimension {input_dim}"
                    )));
                }
            }
            FeatureMap::Affine { matrix, offset } => {
                if matrix.len() != offset.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "affine rows {} != offset length {}",
                        matrix.len(),
                        offset.len()
                    )));
                }
                if matrix.is_empty() {
                    return Err(Error::DimensionMismatch(
                        "affine map needs at least one row".into(),
                    ));
                }
                for row in matrix {
                    if row.len() != input_dim {
                        return Err(Error::DimensionMismatch(format!(
                            "affine row length {} != input dimension {input_dim}",
                            row.len()
                        )));
                    }
                }
                if matrix
                    .iter()
                    .flatten()
                    .chain(offset.iter())
                    .any(|v| !v.is_finite())
                {
                    return Err(Error::InvalidParameter(
                        "affine coefficients must be finite".into(),
                    ));
                }
            }
            FeatureMap::Monomials { terms } => {
                if terms.is_empty() {
                    return Err(Error::DimensionMismatch(
                        "monomial list must be nonempty".into(),
                    ));
                }
                for t in terms {
                    if t.exponents.len() != input_dim {
                        return Err(Error::DimensionMismatch(format!(
                            "monomial exponent length {} != input dimension {input_dim}",
                            t.exponents.len()
                        )));
                    }
                    if !t.coefficient.is_finite() {
                        return Err(Error::InvalidParameter(
                            "monomial coefficient must be finite".into(),
                        ));
                    }
                }
            }
            FeatureMap::Lookup { table, .. } => {
                if input_dim == 0 {
                    return Err(Error::DimensionMismatch(
                        "lookup needs at least one input coordinate".into(),
                    ));
                }
                let n = table.first().map_or(0, |r| r.len());
                if n == 0 {
                    return Err(Error::DimensionMismatch(
                        "lookup table must be nonempty with nonempty rows".into(),
                    ));
                }
                if table.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch(
                        "lookup table rows must share one length".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn eval_into(&self, u: &[f64], out: &mut Vec<f64>) {
        out.clear();
        match self {
            FeatureMap::CoordinateSelection { indices } => {
                out.extend(indices.iter().map(|&i| u[i]));
            }
            FeatureMap::Affine { matrix, offset } => {
                out.extend(
                    matrix
                        .iter()
                        .zip(offset)
                        .map(|(row, b)| crate::util::dot(row, u) + b),
                );
            }
            FeatureMap::Monomials { terms } => {
                out.extend(terms.iter().map(|t| t.eval(u)));
            }
            FeatureMap::Lookup { base, table } => {
                let idx = (u[0].round() as i64 - base).clamp(0, table.len() as i64 - 1);
                out.extend_from_slice(&table[idx as usize]);
            }
        }
    }

    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.output_dim());
        self.eval_into(u, &mut out);
        out
    }

    /// Accumulates `J(u)^T w` into `grad` (used for d f_k / d x with
    /// `w = psi_k(theta)` scaled by the downstream chain multiplier).
    /// Lookup tables are piecewise constant and contribute nothing.
    pub fn add_jacobian_transpose_times(&self, u: &[f64], w: &[f64], grad: &mut [f64]) {
        match self {
            FeatureMap::CoordinateSelection { indices } => {
                for (j, &i) in indices.iter().enumerate() {
                    grad[i] += w[j];
                }
            }
            FeatureMap::Affine { matrix, .. } => {
                for (row, &wj) in matrix.iter().zip(w) {
                    if wj != 0.0 {
                        for (g, &a) in grad.iter_mut().zip(row) {
                            *g += wj * a;
                        }
                    }
                }
            }
            FeatureMap::Monomials { terms } => {
                for (t, &wj) in terms.iter().zip(w) {
                    if wj == 0.0 {
                        continue;
                    }
                    for i in 0..u.len() {
                        let e = t.exponents[i];
                        if e == 0 {
                            continue;
                        }
                        let mut partial = t.coefficient * e as f64;
                        for (l, &el) in t.exponents.iter().enumerate() {
                            if el == 0 {
                                continue;
                            }
                            let p = if l == i { el - 1 } else { el };
                            if p > 0 {
                                partial *= u[l].powi(p as i32);
                            }
                        }
                        grad[i] += wj * partial;
                    }
                }
            }
            FeatureMap::Lookup { .. } => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_and_constant_eval() {
        let sel = FeatureMap::CoordinateSelection { indices: vec![1, 0] };
        assert_eq!(sel.eval(&[3.0, 5.0]), vec![5.0, 3.0]);
        let c = FeatureMap::constant_scalar(2, -1.0);
        assert_eq!(c.eval(&[9.0, 9.0]), vec![-1.0]);
        assert_eq!(c.output_dim(), 1);
    }

    #[test]
    fn monomial_eval_and_gradient() {
        // phi(x) = (2 x0 x1^2, x0^3)
        let m = FeatureMap::Monomials {
            terms: vec![
                Monomial {
                    coefficient: 2.0,
                    exponents: vec![1, 2],
                },
                Monomial {
                    coefficient: 1.0,
                    exponents: vec![3, 0],
                },
            ],
        };
        let x = [1.5, -2.0];
        let v = m.eval(&x);
        assert!((v[0] - 2.0 * 1.5 * 4.0).abs() < 1e-12);
        assert!((v[1] - 1.5f64.powi(3)).abs() < 1e-12);

        // finite-difference check of J^T w
        let w = [0.7, -0.3];
        let mut grad = vec![0.0; 2];
        m.add_jacobian_transpose_times(&x, &w, &mut grad);
        let h = 1e-6;
        for i in 0..2 {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fp = crate::util::dot(&m.eval(&xp), &w);
            let fm = crate::util::dot(&m.eval(&xm), &w);
            let fd = (fp - fm) / (2.0 * h);
            assert!((grad[i] - fd).abs() < 1e-5, "coord {i}: {} vs {fd}", grad[i]);
        }
    }

    #[test]
    fn lookup_clamps_indices() {
        let lk = FeatureMap::Lookup {
            base: -1,
            table: vec![vec![1.0], vec![2.0], vec![3.0]],
        };
        assert_eq!(lk.eval(&[-5.0]), vec![1.0]);
        assert_eq!(lk.eval(&[0.2]), vec![2.0]);
        assert_eq!(lk.eval(&[99.0]), vec![3.0]);
    }

    #[test]
    fn validation_catches_mismatches() {
        let sel = FeatureMap::CoordinateSelection { indices: vec![3] };
        assert!(sel.validate(2).is_err());
        let aff = FeatureMap::Affine {
            matrix: vec![vec![1.0, 2.0]],
            offset: vec![0.0],
        };
        assert!(aff.validate(3).is_err());
        assert!(aff.validate(2).is_ok());
    }
}
