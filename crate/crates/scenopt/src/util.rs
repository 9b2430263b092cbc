//! Small numeric helpers shared across the crate.

/// Kahan–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum of nonnegative values, sorted ascending before compensated summation.
pub fn sorted_kahan_sum(values: &mut Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
    let mut acc = Kahan::new();
    for &v in values.iter() {
        acc.add(v);
    }
    acc.total()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn centered_norm(a: &[f64], center: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), center.len());
    a.iter()
        .zip(center)
        .map(|(x, c)| (x - c) * (x - c))
        .sum::<f64>()
        .sqrt()
}

/// FNV-1a 64-bit hash; stable fingerprint for audit snapshots.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

// ---------------------------------------------------------------------------
// Double-double arithmetic.
//
// Binomial tail masses must match an exact-arithmetic oracle to 1e-12
// relative error for N up to 1e4. Plain f64 log-space evaluation cannot get
// there: a single rounded ln(1-eps) scaled by N-j already costs ~2e-12. All
// quantities involved are products and integer powers of exactly known f64
// values, so error-free transformations (two_sum / FMA two_prod) carry the
// computation at ~1e-30 relative accuracy, with a separate power-of-two
// exponent to dodge underflow.
// ---------------------------------------------------------------------------

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact difference of two f64 values (two_sum is error-free).
    pub fn exact_sub(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, -b);
        Dd { hi, lo }
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2 + q3);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, -other.hi);
        let e = e + (self.lo - other.lo);
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// m * 2^exp2 with the significand kept in a safe magnitude window.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDd {
    pub m: Dd,
    pub exp2: i64,
}

impl ScaledDd {
    pub fn one() -> Self {
        ScaledDd {
            m: Dd::from_f64(1.0),
            exp2: 0,
        }
    }

    pub fn from_dd(m: Dd) -> Self {
        let mut s = ScaledDd { m, exp2: 0 };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let a = self.m.hi.abs();
        if a == 0.0 {
            self.exp2 = 0;
            return;
        }
        // scaling by 2^±512 is exact
        const UP: f64 = 1.3407807929942597e154; // 2^512
        const DOWN: f64 = 7.458340731200207e-155; // 2^-512
        while self.m.hi.abs() > UP {
            self.m.hi *= DOWN;
            self.m.lo *= DOWN;
            self.exp2 += 512;
        }
        while self.m.hi.abs() < DOWN && self.m.hi != 0.0 {
            self.m.hi *= UP;
            self.m.lo *= UP;
            self.exp2 -= 512;
        }
    }

    pub fn mul_dd(&mut self, x: Dd) {
        self.m = self.m.mul(x);
        self.normalize();
    }

    /// self *= base^k by binary exponentiation.
    pub fn mul_powi(&mut self, base: Dd, mut k: u64) {
        let mut sq = ScaledDd::from_dd(base);
        while k > 0 {
            if k & 1 == 1 {
                self.m = self.m.mul(sq.m);
                self.exp2 += sq.exp2;
                self.normalize();
            }
            k >>= 1;
            if k > 0 {
                sq.m = sq.m.mul(sq.m);
                sq.exp2 *= 2;
                sq.normalize();
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.m.hi == 0.0 {
            return 0.0;
        }
        if self.exp2 > 1600 {
            return f64::INFINITY * self.m.hi.signum();
        }
        if self.exp2 < -1600 {
            return 0.0;
        }
        // apply the exponent in exact power-of-two chunks
        let mut v = self.m.to_f64();
        let mut e = self.exp2;
        while e > 0 {
            let step = e.min(512);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(512);
            v *= 2f64.powi(-(step as i32));
            e += step;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_compensates_small_terms() {
        let mut k = Kahan::new();
        k.add(1.0);
        for _ in 0..10_000_000 {
            k.add(1e-16);
        }
        let exact = 1.0 + 1e-16 * 1e7;
        assert!((k.total() - exact).abs() < 1e-12, "{}", k.total());
    }

    #[test]
    fn exact_sub_represents_one_minus_eps_exactly() {
        let eps = 0.03_f64;
        let d = Dd::exact_sub(1.0, eps);
        // hi + lo == 1 - eps in exact arithmetic: verify via reconstruction
        assert_eq!(d.hi, 1.0 - eps);
        // residual recovers the rounding error of 1 - eps
        let err = (1.0 - d.hi) - eps;
        assert_eq!(d.lo, -err);
    }

    #[test]
    fn scaled_powi_handles_extreme_underflow() {
        // 0.5^4000 = 2^-4000, far below f64 range, but the scaled form is exact
        let mut s = ScaledDd::one();
        s.mul_powi(Dd::from_f64(0.5), 4000);
        assert_eq!(s.m.to_f64(), 1.0);
        assert_eq!(s.exp2, -4000);
    }

    #[test]
    fn dd_product_precision() {
        // (1 - 2^-30)^2^20 vs high-precision reference computed externally
        let base = Dd::exact_sub(1.0, 2f64.powi(-30));
        let mut s = ScaledDd::one();
        s.mul_powi(base, 1 << 20);
        let v = s.to_f64();
        let expect = (-(2f64.powi(-30)) * (1 << 20) as f64).exp(); // first-order; error ~2^-41
        assert!((v / expect - 1.0).abs() < 1e-6);
    }
}
