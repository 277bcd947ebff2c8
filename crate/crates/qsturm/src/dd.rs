//! Double-double arithmetic: an unevaluated sum of two f64 giving roughly
//! 106 bits of significand.
//!
//! Only the handful of operations the q-trigonometric ladder needs are
//! implemented. The error-free transforms are the classic ones: Knuth
//! two-sum, fused-multiply-add two-product, Karp square root. `hi` always
//! carries the rounded value, `|lo| <= ulp(hi)/2`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Sum and exact rounding error, no magnitude precondition.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Sum and rounding error, valid when |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Product and exact rounding error.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root by one Newton step on the f64 estimate; the step is
    /// evaluated with an exact square, which is enough for full dd accuracy.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p, e) = two_prod(ax, ax);
        let diff = (self - Dd { hi: p, lo: e }).hi;
        let (hi, lo) = two_sum(ax, diff * (x * 0.5));
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    /// Long division: three quotient digits, then renormalization.
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_keeps_the_low_part() {
        // 1 + 2^-60 is not representable in f64 but is in dd
        let tiny = (2.0f64).powi(-60);
        let s = Dd::ONE + Dd::from_f64(tiny);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, tiny);
        let back = s - Dd::ONE;
        assert_eq!(back.to_f64(), tiny);
    }

    #[test]
    fn multiplication_is_exact_on_products_of_halves() {
        let a = Dd::from_f64(1.5) * Dd::from_f64(2.25);
        assert_eq!(a.hi, 3.375);
        assert_eq!(a.lo, 0.0);
    }

    #[test]
    fn division_round_trips() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let one = third * Dd::from_f64(3.0);
        assert!((one - Dd::ONE).to_f64().abs() < 1e-31);
        // low part actually extends the precision of 1/3
        assert!(third.lo != 0.0);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn sqrt_squares_back() {
        for &v in &[2.0, 0.5, 0.3, 10.0 / 3.0] {
            let r = Dd::from_f64(v).sqrt();
            let back = r * r - Dd::from_f64(v);
            assert!(
                back.to_f64().abs() < 1e-30 * v,
                "sqrt({v}) residual {:.3e}",
                back.to_f64()
            );
        }
        assert_eq!(Dd::ZERO.sqrt(), Dd::ZERO);
    }

    #[test]
    fn abs_and_neg() {
        let x = Dd { hi: -2.0, lo: 1e-20 };
        assert_eq!(x.abs(), -x);
        assert_eq!(Dd::from_f64(3.0).abs(), Dd::from_f64(3.0));
    }

    #[test]
    fn geometric_series_beats_f64() {
        // sum of 0.1^n for n=0..30 in dd vs the closed form 1/(1-0.1)
        let r = Dd::from_f64(0.1);
        let mut acc = Dd::ZERO;
        let mut term = Dd::ONE;
        for _ in 0..40 {
            acc = acc + term;
            term = term * r;
        }
        let want = Dd::ONE / (Dd::ONE - r);
        assert!((acc - want).to_f64().abs() < 1e-30);
    }
}
