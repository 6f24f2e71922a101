//! Scalar types used for probabilities and expected times.
//!
//! Belief propagation and the exact solvers are generic over [`Weight`], which is
//! implemented for `f64` and for arbitrary-precision rationals. Small instances run
//! in [`Rational`] so that golden values compare with `==`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub trait Weight:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::iter::Sum
{
    fn ratio(num: u64, den: u64) -> Self;
    fn to_f64(&self) -> f64;

    fn from_usize(v: usize) -> Self {
        Self::ratio(v as u64, 1)
    }

    /// Whether the value is zero up to the representation's tolerance.
    fn is_negligible(&self) -> bool;
}

impl Weight for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-15
    }
}

impl Weight for Rational {
    fn ratio(num: u64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

/// `num/den` as a rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions. Returns `None` if the approximation misses `x` by more than `tol`.
pub fn snap_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0))?;
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0))?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= tol {
            return Some(rat(h1, k1));
        }
        let frac = rest - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1 != 0 && ((h1 as f64 / k1 as f64) - x).abs() <= tol {
        Some(rat(h1, k1))
    } else {
        None
    }
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snaps_simple_fractions() {
        assert_eq!(snap_rational(0.75, 1000, 1e-9), Some(rat(3, 4)));
        assert_eq!(snap_rational(2.0000000004, 1000, 1e-7), Some(rat(2, 1)));
        assert_eq!(snap_rational(34.0 / 7.0, 1000, 1e-12), Some(rat(34, 7)));
        assert_eq!(snap_rational(std::f64::consts::PI, 10, 1e-9), None);
    }

    #[test]
    fn rational_weight_is_exact() {
        let third = Rational::ratio(1, 3);
        let sum: Rational = vec![third.clone(), third.clone(), third].into_iter().sum();
        assert_eq!(sum, Rational::one());
        assert_eq!(fmt_rational(&rat(9, 8)), "9/8");
        assert_eq!(fmt_rational(&rat(4, 2)), "2");
    }
}
