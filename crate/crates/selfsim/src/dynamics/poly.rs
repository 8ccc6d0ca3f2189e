//! Multivariate polynomials with exact rational coefficients.
//!
//! These are the building blocks of the renormalization maps: every map
//! component is a ratio of two [`MultiPoly`] values, so identities between
//! maps can be checked in exact arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::algebra::Scalar;

fn rat_zero() -> BigRational {
    BigRational::from_integer(BigInt::from(0))
}

fn rat_one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

fn rat_is_zero(r: &BigRational) -> bool {
    num_traits::Zero::is_zero(r)
}

/// A polynomial in `arity` variables with [`BigRational`] coefficients.
///
/// Terms are stored sparsely as `exponent vector -> coefficient`; zero
/// coefficients are never stored, so structural equality is semantic
/// equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl MultiPoly {
    /// The zero polynomial in `arity` variables.
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(arity: usize, value: BigRational) -> Self {
        let mut p = Self::zero(arity);
        if !rat_is_zero(&value) {
            p.terms.insert(vec![0; arity], value);
        }
        p
    }

    /// A constant polynomial from an integer.
    pub fn int(arity: usize, value: i64) -> Self {
        Self::constant(arity, BigRational::from_integer(BigInt::from(value)))
    }

    /// The monomial consisting of a single variable.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable index out of range");
        let mut exps = vec![0u16; arity];
        exps[index] = 1;
        let mut p = Self::zero(arity);
        p.terms.insert(exps, rat_one());
        p
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterator over `(exponents, coefficient)` pairs in deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    /// Largest total degree among the terms (zero polynomial has degree 0).
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert_term(&mut self, exps: Vec<u16>, coeff: BigRational) {
        if rat_is_zero(&coeff) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + &coeff;
                if rat_is_zero(&sum) {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of two polynomials (same arity).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    /// Difference of two polynomials (same arity).
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    /// Product of two polynomials (same arity).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = Self::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }

    /// Scale by a rational constant.
    pub fn scale(&self, factor: &BigRational) -> Self {
        if rat_is_zero(factor) {
            return Self::zero(self.arity);
        }
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * factor);
        }
        out
    }

    /// Scale by an integer constant.
    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(factor)))
    }

    /// Integer power.
    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::constant(self.arity, rat_one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at a point over any scalar type (exact over rationals,
    /// floating over complex doubles).
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.arity, "point arity mismatch");
        let mut acc = S::zero();
        for (exps, coeff) in &self.terms {
            let mut term = S::from_rational(coeff);
            for (value, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = term.mul(value);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Evaluate at a real point in plain double arithmetic.
    pub fn eval_real(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.arity, "point arity mismatch");
        let mut acc = 0.0;
        for (exps, coeff) in &self.terms {
            let mut term = coeff.to_f64().unwrap_or(f64::NAN);
            for (value, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term *= value;
                }
            }
            acc += term;
        }
        acc
    }

    /// Coefficients of a univariate polynomial, lowest degree first.
    ///
    /// Returns `None` if the polynomial has more than one variable.
    pub fn univariate_coeffs(&self) -> Option<Vec<BigRational>> {
        if self.arity != 1 {
            return None;
        }
        let deg = self.total_degree();
        let mut coeffs = vec![rat_zero(); deg + 1];
        for (exps, coeff) in &self.terms {
            coeffs[exps[0] as usize] = coeff.clone();
        }
        Some(coeffs)
    }

    /// Render with the given variable names, e.g. `4 - mu^2 + la^2 + 4*la*th`.
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.arity, "name list arity mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let is_constant_term = exps.iter().all(|&e| e == 0);
            if !abs.is_one() || is_constant_term {
                factors.push(render_rational(&abs));
            }
            for (name, &e) in names.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(&refs))
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational_from_str;

    fn rat(s: &str) -> BigRational {
        rational_from_str(s).unwrap()
    }

    #[test]
    fn arithmetic_and_normalization() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        // (x + y)(x - y) = x^2 - y^2
        let p = x.add(&y).mul(&x.sub(&y));
        let q = x.pow(2).sub(&y.pow(2));
        assert_eq!(p, q);
        // x - x normalizes away to the empty term map.
        assert!(x.sub(&x).is_zero());
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        // 4 - y^2 + x^2 + (3/2) x y
        let p = MultiPoly::int(2, 4)
            .sub(&y.pow(2))
            .add(&x.pow(2))
            .add(&x.mul(&y).scale(&rat("3/2")));
        // 4 - 4 + 1/4 + (3/2)(1/2)(-2) = 1/4 - 3/2 = -5/4
        let exact = p.eval(&[rat("1/2"), rat("-2")]);
        assert_eq!(exact, rat("-5/4"));
        let float = p.eval_real(&[0.5, -2.0]);
        assert!((float - (-1.25)).abs() < 1e-14);
    }

    #[test]
    fn render_is_readable() {
        let la = MultiPoly::var(3, 0);
        let mu = MultiPoly::var(3, 1);
        let th = MultiPoly::var(3, 2);
        let h = MultiPoly::int(3, 4)
            .sub(&mu.pow(2))
            .add(&la.pow(2))
            .add(&la.mul(&th).scale_int(4));
        assert_eq!(h.render(&["la", "mu", "th"]), "4 - mu^2 + 4*la*th + la^2");
        assert_eq!(MultiPoly::zero(1).render(&["x"]), "0");
        assert_eq!(MultiPoly::int(1, -3).render(&["x"]), "-3");
    }

    #[test]
    fn univariate_coefficient_extraction() {
        let x = MultiPoly::var(1, 0);
        let f = x.pow(2).sub(&x).sub(&MultiPoly::int(1, 3));
        let coeffs = f.univariate_coeffs().unwrap();
        assert_eq!(coeffs, vec![rat("-3"), rat("-1"), rat("1")]);
        assert!(MultiPoly::var(2, 0).univariate_coeffs().is_none());
    }
}
