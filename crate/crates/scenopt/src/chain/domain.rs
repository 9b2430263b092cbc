//! Decision domain: a box with optional per-coordinate integrality.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box `[lower, upper]` in R^d; coordinates flagged integer are restricted
/// to the integers inside their interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, integer: Vec<bool>) -> Result<Self> {
        let d = lower.len();
        if d == 0 {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        if upper.len() != d || integer.len() != d {
            return Err(Error::InvalidDomain(format!(
                "bound lengths disagree: lower {}, upper {}, integer {}",
                d,
                upper.len(),
                integer.len()
            )));
        }
        for i in 0..d {
            if !lower[i].is_finite() || !upper[i].is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: bounds must be finite"
                )));
            }
            if lower[i] > upper[i] {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: lower {} > upper {}",
                    lower[i], upper[i]
                )));
            }
            if integer[i] && lower[i].ceil() > upper[i].floor() {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: no integer in [{}, {}]",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Domain {
            lower,
            upper,
            integer,
        })
    }

    /// All-continuous box.
    pub fn continuous(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let d = lower.len();
        Self::new(lower, upper, vec![false; d])
    }

    /// Symmetric continuous box `[-half, half]^d`.
    pub fn symmetric_box(dim: usize, half: f64) -> Result<Self> {
        Self::continuous(vec![-half; dim], vec![half; dim])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn has_integers(&self) -> bool {
        self.integer.iter().any(|&b| b)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dimension()
            && x.iter().enumerate().all(|(i, &v)| {
                v >= self.lower[i] - tol
                    && v <= self.upper[i] + tol
                    && (!self.integer[i] || (v - v.round()).abs() <= tol)
            })
    }

    /// Clamps into the box; integer coordinates snap to the nearest
    /// admissible integer.
    pub fn project(&self, x: &mut [f64]) {
        for i in 0..self.dimension() {
            let mut v = x[i].clamp(self.lower[i], self.upper[i]);
            if self.integer[i] {
                v = v.round().clamp(self.lower[i].ceil(), self.upper[i].floor());
            }
            x[i] = v;
        }
    }

    pub fn center(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect();
        self.project(&mut c);
        c
    }

    /// Uniform draw from the box (continuous relaxation; callers project
    /// if they need lattice points).
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| {
                if l == u {
                    l
                } else {
                    rng.random_range(l..=u)
                }
            })
            .collect()
    }
}
