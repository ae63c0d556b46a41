//! Numeric backends shared by the group and algebra code.
//!
//! Everything in the coordinate layer is generic over [`Scalar`], which is
//! implemented for `f64` and for arbitrary-precision rationals. The rational
//! backend makes every group-law identity an exact equality.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational numbers used by the algebraic test paths.
pub type Rational = BigRational;

pub trait Scalar: Clone + PartialEq + PartialOrd + Debug + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &Rational) -> Self;

    /// Exact zero test for exact backends, `|x| <= tol` otherwise.
    fn is_negligible(&self, tol: f64) -> bool;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn two() -> Self {
        Self::from_i64(2)
    }

    /// Equality up to `tol` (exact for exact backends).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(tol)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Dot product of equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<T: Scalar>(s: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn vec_neg<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

/// Converts a float slice into the backend.
pub fn vec_from_f64<T: Scalar + FromF64>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::from_f64(x)).collect()
}

/// Lossless import of binary floating point values.
pub trait FromF64 {
    fn from_f64(v: f64) -> Self;
}

impl FromF64 for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl FromF64 for BigRational {
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite value")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_half_is_exact() {
        let h = Rational::half();
        assert_eq!(h.clone() + h, Rational::from_i64(1));
        assert!((Rational::from_ratio(1, 3) * Rational::from_i64(3) - Rational::from_i64(1))
            .is_negligible(0.0));
    }

    #[test]
    fn float_negligible_uses_tolerance() {
        assert!(1e-13_f64.is_negligible(1e-12));
        assert!(!1e-11_f64.is_negligible(1e-12));
    }

    #[test]
    fn float_import_is_lossless() {
        let r = <Rational as FromF64>::from_f64(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
    }
}
