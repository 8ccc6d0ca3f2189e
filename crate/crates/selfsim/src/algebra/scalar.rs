//! Scalar abstraction: the same matrix and Schur-complement code runs in
//! exact rational arithmetic (kernel identities, probability computations)
//! and in complex floating point (spectral sweeps, verification runs).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Field element usable throughout the matrix layer.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding); zero tests are then
    /// literal and pivot thresholds are ignored.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact or floating division; `None` when `rhs` is exactly zero.
    fn div(&self, rhs: &Self) -> Option<Self>;
    /// Complex conjugate (identity for real scalars).
    fn conj(&self) -> Self;
    /// |x| as f64, used for pivot selection and max-norms.
    fn magnitude(&self) -> f64;
    /// Convert from an exact rational (pencil coefficients are rational).
    fn from_rational(r: &BigRational) -> Self;
    /// Floating approximation used for exports and diagnostics.
    fn approx(&self) -> Complex64;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn approx(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn approx(&self) -> Complex64 {
        *self
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn conj(&self) -> Self {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn approx(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

/// Parse a scalar literal: `3`, `-7/2`, or a decimal like `0.25` (decimals
/// become exact rationals over a power of ten).
pub fn rational_from_str(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::from(0)
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Some(BigRational::new(signed, scale));
    }
    let n: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_parse() {
        assert_eq!(
            rational_from_str("-7/2"),
            Some(BigRational::new(BigInt::from(-7), BigInt::from(2)))
        );
        assert_eq!(
            rational_from_str("0.25"),
            Some(BigRational::new(BigInt::from(1), BigInt::from(4)))
        );
        assert_eq!(
            rational_from_str("-1.5"),
            Some(BigRational::new(BigInt::from(-3), BigInt::from(2)))
        );
        assert_eq!(rational_from_str("42"), Some(BigRational::from_integer(BigInt::from(42))));
        assert_eq!(rational_from_str("1/0"), None);
        assert_eq!(rational_from_str("x"), None);
    }

    #[test]
    fn exact_and_float_division() {
        let a = BigRational::new(BigInt::from(1), BigInt::from(3));
        let b = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(
            Scalar::div(&a, &b),
            Some(BigRational::new(BigInt::from(1), BigInt::from(2)))
        );
        assert_eq!(Scalar::div(&a, &Scalar::zero()), None);
        let z = Complex64::new(1.0, 1.0);
        let w = Complex64::new(0.0, 2.0);
        let q = Scalar::div(&z, &w).unwrap();
        assert!((q - Complex64::new(0.5, -0.5)).norm() < 1e-15);
    }
}
