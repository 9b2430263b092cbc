//! The closed catalog of univariate Lipschitz wrappers.
//!
//! Each variant carries a proven Lipschitz constant; arbitrary user
//! closures are rejected by construction since the violation bounds are
//! unsound without certified constants. The shifted square root is the only
//! variant with a restricted domain: `u -> sqrt(u + shift)` is
//! `1/(2*sqrt(shift))`-Lipschitz on `u >= 0`, and chain validation proves
//! the argument stays nonnegative before accepting it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarWrapper {
    Identity,
    Scale { factor: f64 },
    Abs,
    Clip { lo: f64, hi: f64 },
    Sin,
    Cos,
    ShiftedSqrt { shift: f64 },
    NegCos,
}

/// Value interval used during chain validation; `None` bounds mean unknown.
pub type Interval = (Option<f64>, Option<f64>);

pub const UNKNOWN_INTERVAL: Interval = (None, None);

impl ScalarWrapper {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScalarWrapper::Scale { factor } if !factor.is_finite() => Err(Error::InvalidWrapper(
                format!("scale factor must be finite, got {factor}"),
            )),
            ScalarWrapper::Clip { lo, hi } if !(lo <= hi) => Err(Error::InvalidWrapper(format!(
                "clip requires lo <= hi, got [{lo}, {hi}]"
            ))),
            ScalarWrapper::ShiftedSqrt { shift } if !(shift > 0.0) => Err(Error::InvalidWrapper(
                format!("shifted sqrt requires shift > 0, got {shift}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match *self {
            ScalarWrapper::Identity | ScalarWrapper::Abs => 1.0,
            ScalarWrapper::Scale { factor } => factor.abs(),
            ScalarWrapper::Clip { .. } => 1.0,
            ScalarWrapper::Sin | ScalarWrapper::Cos | ScalarWrapper::NegCos => 1.0,
            ScalarWrapper::ShiftedSqrt { shift } => 0.5 / shift.sqrt(),
        }
    }

    pub fn apply(&self, u: f64) -> f64 {
        match *self {
            ScalarWrapper::Identity => u,
            ScalarWrapper::Scale { factor } => factor * u,
            ScalarWrapper::Abs => u.abs(),
            ScalarWrapper::Clip { lo, hi } => u.clamp(lo, hi),
            ScalarWrapper::Sin => u.sin(),
            ScalarWrapper::Cos => u.cos(),
            ScalarWrapper::ShiftedSqrt { shift } => (u + shift).sqrt(),
            ScalarWrapper::NegCos => -u.cos(),
        }
    }

    /// One-sided derivative choice at kinks: the ascending branch at 0 for
    /// `abs`, the interior slope on clip boundaries. Deterministic, valid
    /// subgradient selections for the piecewise-smooth catalog.
    pub fn derivative(&self, u: f64) -> f64 {
        match *self {
            ScalarWrapper::Identity => 1.0,
            ScalarWrapper::Scale { factor } => factor,
            ScalarWrapper::Abs => {
                if u >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            ScalarWrapper::Clip { lo, hi } => {
                if u >= lo && u <= hi {
                    1.0
                } else {
                    0.0
                }
            }
            ScalarWrapper::Sin => u.cos(),
            ScalarWrapper::Cos => -u.sin(),
            ScalarWrapper::ShiftedSqrt { shift } => 0.5 / (u + shift).sqrt(),
            ScalarWrapper::NegCos => u.sin(),
        }
    }

    /// Conservative output interval for a given input interval.
    pub fn output_interval(&self, input: Interval) -> Interval {
        let (lo, hi) = input;
        match *self {
            ScalarWrapper::Identity => input,
            ScalarWrapper::Scale { factor } => {
                if factor == 0.0 {
                    (Some(0.0), Some(0.0))
                } else if factor > 0.0 {
                    (lo.map(|v| factor * v), hi.map(|v| factor * v))
                } else {
                    (hi.map(|v| factor * v), lo.map(|v| factor * v))
                }
            }
            ScalarWrapper::Abs => {
                let new_hi = match (lo, hi) {
                    (Some(l), Some(h)) => Some(l.abs().max(h.abs())),
                    _ => None,
                };
                let new_lo = match (lo, hi) {
                    (Some(l), Some(h)) if l <= 0.0 && h >= 0.0 => Some(0.0),
                    (Some(l), _) if l > 0.0 => Some(l),
                    (_, Some(h)) if h < 0.0 => Some(-h),
                    _ => Some(0.0),
                };
                (new_lo, new_hi)
            }
            ScalarWrapper::Clip { lo: a, hi: b } => {
                let cl = |v: Option<f64>, dflt: f64| Some(v.unwrap_or(dflt).clamp(a, b));
                (cl(lo, f64::NEG_INFINITY), cl(hi, f64::INFINITY))
            }
            ScalarWrapper::Sin | ScalarWrapper::Cos | ScalarWrapper::NegCos => {
                (Some(-1.0), Some(1.0))
            }
            ScalarWrapper::ShiftedSqrt { shift } => (
                lo.map(|v| (v + shift).max(0.0).sqrt()),
                hi.map(|v| (v + shift).max(0.0).sqrt()),
            ),
        }
    }
}
