//! Ground field of the coefficient ring.
//!
//! Every identity check runs over exact rationals; `f64` is only used by the
//! time integrator. Both sit behind the same [`Scalar`] contract so the
//! operator algebra is written once.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers with arbitrary precision.
pub type Rational = BigRational;

/// Arithmetic contract shared by exact and floating-point coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// `true` for exact arithmetic, where equality tests are decisive.
    const EXACT: bool;

    /// Tolerance applied by zero-mean checks when none is given explicitly.
    const DEFAULT_TOL: f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_integer(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn to_f64(&self) -> f64;

    /// Whether the value counts as zero: exact comparison for rationals,
    /// `|x| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool;
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const DEFAULT_TOL: f64 = 0.0;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const DEFAULT_TOL: f64 = 1e-9;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

/// Shorthand for building a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Formats a rational as `"num/den"`, the on-disk representation.
pub fn rational_to_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"num/den"`, a bare integer, or a decimal literal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let magnitude = BigRational::new(int_part.abs() * &scale + frac_part, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let int: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(int))
}

/// Absolute value as `f64`, used for residual reporting.
pub fn magnitude<S: Scalar>(value: &S) -> f64 {
    value.to_f64().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-6/8"), Some(rat(-3, 4)));
        assert_eq!(parse_rational("5"), Some(rat(5, 1)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn round_trip_text() {
        let x = rat(-7, 3);
        assert_eq!(parse_rational(&rational_to_string(&x)), Some(x));
        assert_eq!(rational_to_string(&rat(4, 2)), "2/1");
    }

    #[test]
    fn negligibility() {
        assert!(Rational::zero().is_negligible(1.0));
        assert!(!rat(1, 1_000_000).is_negligible(1.0));
        assert!(1e-12_f64.is_negligible(1e-9));
        assert!(!1e-6_f64.is_negligible(1e-9));
    }
}
