//! Double-double arithmetic (an unevaluated sum `hi + lo`, about 32 digits).
//!
//! Engine work near the regime boundaries, or with strongly suppressed
//! excitations, is a net flow many orders of magnitude below the gross
//! populations it is computed from. Thermal weights, the catalyst fixed point
//! and the heats are therefore carried in double-double and rounded once.

use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

/// `2^k` for `k` in the normal exponent range.
fn pow2(k: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((1023 + k) as u64) << 52)
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    fn scale(self, k: i32) -> Dd {
        let (k1, k2) = (k / 2, k - k / 2);
        let (s1, s2) = (pow2(k1), pow2(k2));
        Dd {
            hi: self.hi * s1 * s2,
            lo: self.lo * s1 * s2,
        }
    }

    /// `e^x` for an exactly representable `x`.
    pub(crate) fn exp(x: f64) -> Dd {
        if x.is_nan() {
            return Dd { hi: f64::NAN, lo: 0.0 };
        }
        if x < -746.0 {
            return Dd::ZERO;
        }
        if x > 709.8 {
            return Dd {
                hi: f64::INFINITY,
                lo: 0.0,
            };
        }
        if x == 0.0 {
            return Dd::ONE;
        }
        let k = (x / LN2.hi).round();
        let r = Dd::from(x) - LN2 * k;
        // e^r = (e^{r/512})^512, Taylor series for the small argument
        let s = r.scale(-9);
        let mut term = Dd::ONE;
        let mut acc = Dd::ONE;
        for n in 1..=12 {
            term = term * s / n as f64;
            acc = acc + term;
        }
        for _ in 0..9 {
            acc = acc * acc;
        }
        acc.scale(k as i32)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * y.lo + self.lo * y.hi));
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, y: f64) -> Dd {
        let (p, e) = two_prod(self.hi, y);
        let (hi, lo) = quick_two_sum(p, e + self.lo * y);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * q1;
        let q2 = r.hi / y.hi;
        let r = r - y * q2;
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, y: f64) -> Dd {
        self / Dd::from(y)
    }
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: Dd, hi: f64, lo: f64, rel: f64) {
        let err = (x - Dd { hi, lo }).to_f64().abs();
        assert!(err <= rel * hi.abs(), "{x:?} vs {hi:e} + {lo:e}");
    }

    #[test]
    fn exp_matches_high_precision() {
        // references from 60-digit evaluation, split into hi + lo
        close(Dd::exp(-2.0), 0.1353352832366127, -1.042381423288669e-17, 1e-29);
        close(Dd::exp(-0.001), 0.999000499833375, -3.026024053145243e-17, 1e-29);
        close(Dd::exp(-30.5), 5.675685232632723e-14, -2.744021414416088e-30, 1e-29);
        close(Dd::exp(1.25), 3.4903429574618414, -4.604261945372796e-17, 1e-29);
        assert!((Dd::exp(-700.25).to_f64() / 7.678723813110872e-305 - 1.0).abs() < 1e-15);
        assert_eq!(Dd::exp(-800.0), Dd::ZERO);
        assert_eq!(Dd::exp(0.0), Dd::ONE);
    }

    #[test]
    fn arithmetic_keeps_low_word() {
        let third = Dd::ONE / Dd::from(3.0);
        let back = third * 3.0 - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        // 1 + 2^-80 survives in the low word
        let tiny = 2f64.powi(-80);
        let x = Dd::ONE + Dd::from(tiny) - Dd::ONE;
        assert_eq!(x.to_f64(), tiny);
    }
}
