//! Ratios of multivariate polynomials and multidimensional rational maps.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::MultiPoly;
use crate::algebra::Scalar;
use crate::error::{Error, Result};

fn rat_one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

/// Reported when an evaluation lands on (or too near) a vanishing
/// denominator. Carries the magnitude that failed the margin test.
#[derive(Debug, Clone, Copy)]
pub struct SingularHit {
    /// `|denominator|` at the offending point (0 for an exact zero).
    pub magnitude: f64,
}

/// A ratio `num/den` of two polynomials over the same variables.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Build `num/den`. The denominator must be a nonzero polynomial.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert_eq!(num.arity(), den.arity(), "numerator/denominator arity mismatch");
        assert!(!den.is_zero(), "denominator is the zero polynomial");
        RationalFunction { num, den }
    }

    /// A polynomial viewed as a rational function with denominator 1.
    pub fn from_poly(num: MultiPoly) -> Self {
        let den = MultiPoly::constant(num.arity(), rat_one());
        RationalFunction { num, den }
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    /// Numerator polynomial.
    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    /// Denominator polynomial.
    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// Whether the denominator is a constant (the function is a polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.den.total_degree() == 0
    }

    /// Evaluate at a point.
    ///
    /// The denominator is rejected when its magnitude falls below `margin`,
    /// or when it is exactly zero (whatever the margin). Exact scalars
    /// evaluate exactly; the margin test uses the denominator's magnitude
    /// as a double either way, so the admissible sample set is identical
    /// in exact and floating modes.
    pub fn eval<S: Scalar>(&self, point: &[S], margin: f64) -> std::result::Result<S, SingularHit> {
        let den = self.den.eval(point);
        let magnitude = den.magnitude();
        if den.is_zero() || magnitude < margin || !magnitude.is_finite() {
            return Err(SingularHit {
                magnitude: if den.is_zero() { 0.0 } else { magnitude },
            });
        }
        let num = self.num.eval(point);
        num.div(&den).ok_or(SingularHit { magnitude })
    }

    /// Evaluate at a real point in double arithmetic.
    pub fn eval_real(&self, point: &[f64], margin: f64) -> std::result::Result<f64, SingularHit> {
        let den = self.den.eval_real(point);
        if den.abs() < margin || den == 0.0 || !den.is_finite() {
            return Err(SingularHit {
                magnitude: den.abs(),
            });
        }
        Ok(self.num.eval_real(point) / den)
    }

    /// Sum of two rational functions: `a/b + c/d = (ad + cb)/(bd)`.
    pub fn add(&self, other: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    /// Product of two rational functions.
    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Scale by a rational constant.
    pub fn scale(&self, factor: &BigRational) -> Self {
        RationalFunction {
            num: self.num.scale(factor),
            den: self.den.clone(),
        }
    }

    /// Render as `num` or `(num)/(den)` with the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_polynomial() {
            // Fold the constant denominator into the numerator for display.
            let c = self
                .den
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(rat_one);
            let folded = self.num.scale(&(rat_one() / c));
            folded.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

/// Substitute rational functions for the variables of a polynomial.
///
/// Used to compose maps symbolically: the result is exact, with no
/// simplification (common factors are not cancelled).
pub fn substitute_poly(poly: &MultiPoly, args: &[RationalFunction]) -> RationalFunction {
    assert_eq!(poly.arity(), args.len(), "substitution arity mismatch");
    let inner_arity = args
        .first()
        .map(RationalFunction::arity)
        .unwrap_or(poly.arity());
    let zero = RationalFunction::from_poly(MultiPoly::zero(inner_arity));
    let one = RationalFunction::from_poly(MultiPoly::constant(inner_arity, rat_one()));
    let mut acc = zero;
    for (exps, coeff) in poly.terms() {
        let mut term = one.scale(coeff);
        for (arg, &e) in args.iter().zip(exps) {
            for _ in 0..e {
                term = term.mul(arg);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// A rational self-map of `k`-dimensional space: one rational-function
/// component per variable, all with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct RationalMapND {
    name: String,
    vars: Vec<String>,
    comps: Vec<RationalFunction>,
}

impl RationalMapND {
    /// Build a map from named variables and one component per variable.
    pub fn new(name: impl Into<String>, vars: Vec<String>, comps: Vec<RationalFunction>) -> Self {
        let arity = vars.len();
        assert_eq!(comps.len(), arity, "component count must equal arity");
        for c in &comps {
            assert_eq!(c.arity(), arity, "component arity mismatch");
        }
        RationalMapND {
            name: name.into(),
            vars,
            comps,
        }
    }

    /// The identity map on the given variables.
    pub fn identity(vars: Vec<String>) -> Self {
        let arity = vars.len();
        let comps = (0..arity)
            .map(|i| RationalFunction::from_poly(MultiPoly::var(arity, i)))
            .collect();
        RationalMapND::new("identity", vars, comps)
    }

    /// The map's catalog name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Variable names.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of variables (= number of components).
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// The component rational functions.
    pub fn comps(&self) -> &[RationalFunction] {
        &self.comps
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Evaluate all components at a point, over any scalar type.
    ///
    /// Hitting a denominator below `margin` reports which singular-locus
    /// equation was violated.
    pub fn eval<S: Scalar>(&self, point: &[S], margin: f64) -> Result<Vec<S>> {
        assert_eq!(point.len(), self.arity(), "point arity mismatch");
        let mut out = Vec::with_capacity(self.comps.len());
        for comp in &self.comps {
            match comp.eval(point, margin) {
                Ok(v) => out.push(v),
                Err(hit) => {
                    return Err(Error::SingularLocus {
                        map: self.name.clone(),
                        denominator: comp.den().render(&self.var_refs()),
                        value: hit.magnitude,
                        margin,
                    })
                }
            }
        }
        Ok(out)
    }

    /// Evaluate at a real point in double arithmetic.
    pub fn eval_real(&self, point: &[f64], margin: f64) -> Result<Vec<f64>> {
        assert_eq!(point.len(), self.arity(), "point arity mismatch");
        let mut out = Vec::with_capacity(self.comps.len());
        for comp in &self.comps {
            match comp.eval_real(point, margin) {
                Ok(v) => out.push(v),
                Err(hit) => {
                    return Err(Error::SingularLocus {
                        map: self.name.clone(),
                        denominator: comp.den().render(&self.var_refs()),
                        value: hit.magnitude,
                        margin,
                    })
                }
            }
        }
        Ok(out)
    }

    /// Symbolic composition `self ∘ inner` (apply `inner` first).
    ///
    /// The result is exact but unsimplified, so its denominators may vanish
    /// on a larger set than strictly necessary (the union of `inner`'s loci
    /// and the pullbacks of `self`'s loci).
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(self.arity(), inner.arity(), "composition arity mismatch");
        let comps = self
            .comps
            .iter()
            .map(|comp| {
                let num = substitute_poly(comp.num(), &inner.comps);
                let den = substitute_poly(comp.den(), &inner.comps);
                // num/den where both are rational functions:
                // (a/b)/(c/d) = (a d)/(b c).
                RationalFunction::new(
                    num.num().mul(den.den()),
                    num.den().mul(den.num()),
                )
            })
            .collect();
        RationalMapND::new(
            format!("{}.{}", self.name, inner.name),
            inner.vars.clone(),
            comps,
        )
    }

    /// Human-readable description: name, variables, one line per component.
    pub fn describe(&self) -> String {
        let refs = self.var_refs();
        let mut out = format!("map {} on ({})\n", self.name, self.vars.join(", "));
        for (var, comp) in self.vars.iter().zip(&self.comps) {
            out.push_str(&format!("  {var}' = {}\n", comp.render(&refs)));
        }
        out
    }
}
