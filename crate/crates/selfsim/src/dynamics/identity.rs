//! Seeded verification of algebraic identities between rational maps.
//!
//! Samples are dyadic rational points, and both sides of an identity are
//! evaluated in exact rational arithmetic, so a true identity reports a
//! residual of exactly zero and a false one reports a residual of plain
//! size. Floating error never enters; the tolerance in the caller is
//! purely a formality.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::ratfun::{RationalFunction, RationalMapND};
use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::rng;

/// Outcome of a sampled identity check.
#[derive(Debug, Clone, Copy)]
pub struct SampleReport {
    /// Number of admissible samples actually evaluated.
    pub samples: usize,
    /// Number of points drawn (admissible or not).
    pub attempted: usize,
    /// Largest componentwise deviation seen.
    pub max_residual: f64,
}

/// A semiconjugacy `projection ∘ source = factor ∘ projection`, where
/// `projection` maps the source's space to the factor's (one-dimensional)
/// space.
#[derive(Clone, Debug)]
pub struct SemiConjugacy {
    /// The multidimensional map being projected.
    pub source: RationalMapND,
    /// The projection onto one coordinate.
    pub projection: RationalFunction,
    /// The one-dimensional factor map.
    pub factor: RationalMapND,
}

/// Attempt cap: a check gives up after `samples * 50` draws.
const ATTEMPT_FACTOR: usize = 50;

fn dyadic_sample(rng: &mut impl Rng, half_width: f64) -> BigRational {
    // k / 2^18 with k uniform, covering [-half_width, half_width].
    let denom: i64 = 1 << 18;
    let bound = (half_width * denom as f64) as i64;
    let k = rng.gen_range(-bound..=bound);
    BigRational::new(BigInt::from(k), BigInt::from(denom))
}

fn sample_point(rng: &mut impl Rng, arity: usize, half_width: f64) -> Vec<BigRational> {
    (0..arity).map(|_| dyadic_sample(rng, half_width)).collect()
}

fn admissible<T>(result: Result<T>) -> Result<Option<T>> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::SingularLocus { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Check that applying `chain` left to right equals `rhs`, over `samples`
/// admissible points drawn from `[-half_width, half_width]^k` with the
/// given singular-locus margin.
pub fn check_identity(
    chain: &[&RationalMapND],
    rhs: &RationalMapND,
    samples: usize,
    seed: u64,
    half_width: f64,
    margin: f64,
) -> Result<SampleReport> {
    let arity = rhs.arity();
    if chain.is_empty() {
        return Err(Error::Invalid("identity check needs a nonempty chain".into()));
    }
    for m in chain {
        if m.arity() != arity {
            return Err(Error::Mismatch(format!(
                "map `{}` has arity {}, expected {}",
                m.name(),
                m.arity(),
                arity
            )));
        }
    }
    let mut accepted = 0usize;
    let mut attempted = 0usize;
    let mut max_residual = 0.0f64;
    let cap = samples.saturating_mul(ATTEMPT_FACTOR);
    while accepted < samples && attempted < cap {
        let mut point_rng = rng::stream(seed, attempted as u64);
        attempted += 1;
        let point = sample_point(&mut point_rng, arity, half_width);

        let mut lhs = point.clone();
        let mut rejected = false;
        for m in chain {
            match admissible(m.eval(&lhs, margin))? {
                Some(next) => lhs = next,
                None => {
                    rejected = true;
                    break;
                }
            }
        }
        if rejected {
            continue;
        }
        let Some(rhs_value) = admissible(rhs.eval(&point, margin))? else {
            continue;
        };

        for (a, b) in lhs.iter().zip(&rhs_value) {
            let dev = a.sub(b).magnitude();
            if dev > max_residual {
                max_residual = dev;
            }
        }
        accepted += 1;
    }
    if accepted == 0 {
        return Err(Error::AllSamplesRejected { attempted, margin });
    }
    Ok(SampleReport {
        samples: accepted,
        attempted,
        max_residual,
    })
}

/// Check `projection(source(p)) = factor(projection(p))` over seeded
/// admissible samples, in exact arithmetic.
pub fn check_semiconjugacy(
    sc: &SemiConjugacy,
    samples: usize,
    seed: u64,
    half_width: f64,
    margin: f64,
) -> Result<SampleReport> {
    let arity = sc.source.arity();
    if sc.projection.arity() != arity {
        return Err(Error::Mismatch(format!(
            "projection has arity {}, source has arity {}",
            sc.projection.arity(),
            arity
        )));
    }
    if sc.factor.arity() != 1 {
        return Err(Error::Mismatch("factor map must be one-dimensional".into()));
    }
    let mut accepted = 0usize;
    let mut attempted = 0usize;
    let mut max_residual = 0.0f64;
    let cap = samples.saturating_mul(ATTEMPT_FACTOR);
    while accepted < samples && attempted < cap {
        let mut point_rng = rng::stream(seed, attempted as u64);
        attempted += 1;
        let point = sample_point(&mut point_rng, arity, half_width);

        let Some(image) = admissible(sc.source.eval(&point, margin))? else {
            continue;
        };
        let Ok(lhs) = sc.projection.eval(&image, margin) else {
            continue;
        };
        let Ok(height) = sc.projection.eval(&point, margin) else {
            continue;
        };
        let Some(rhs) = admissible(sc.factor.eval(&[height], margin))? else {
            continue;
        };

        let dev = lhs.sub(&rhs[0]).magnitude();
        if dev > max_residual {
            max_residual = dev;
        }
        accepted += 1;
    }
    if accepted == 0 {
        return Err(Error::AllSamplesRejected { attempted, margin });
    }
    Ok(SampleReport {
        samples: accepted,
        attempted,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::catalog;

    const BOX: f64 = 4.0;
    const MARGIN: f64 = 1e-3;

    #[test]
    fn involution_and_exchange_identities_hold_exactly() {
        let f = catalog::grigorchuk_f();
        let g = catalog::grigorchuk_g();
        let h = catalog::grigorchuk_h();
        let id = RationalMapND::identity(h.vars().to_vec());

        // H ∘ H = id.
        let r = check_identity(&[&h, &h], &id, 300, 11, BOX, MARGIN).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.samples, 300);

        // H ∘ F = G and H ∘ G = F (chain applies left to right).
        let r = check_identity(&[&f, &h], &g, 300, 12, BOX, MARGIN).unwrap();
        assert_eq!(r.max_residual, 0.0);
        let r = check_identity(&[&g, &h], &f, 300, 13, BOX, MARGIN).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn symbolic_composition_agrees_with_stepwise_application() {
        let f = catalog::grigorchuk_f();
        let ff = f.compose(&f);
        let r = check_identity(&[&f, &f], &ff, 100, 21, BOX, MARGIN).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn wrong_identity_is_detected() {
        let f = catalog::grigorchuk_f();
        let g = catalog::grigorchuk_g();
        let r = check_identity(&[&f], &g, 50, 31, BOX, MARGIN).unwrap();
        assert!(r.max_residual > 0.1, "residual {}", r.max_residual);
    }

    #[test]
    fn catalog_semiconjugacies_hold_exactly() {
        for name in catalog::SEMICONJUGACY_NAMES {
            let sc = catalog::semiconjugacy(name).unwrap();
            let r = check_semiconjugacy(&sc, 300, 41, BOX, MARGIN).unwrap();
            assert_eq!(r.max_residual, 0.0, "semiconjugacy {name}");
            assert_eq!(r.samples, 300);
        }
    }

    #[test]
    fn identity_projection_is_a_trivial_semiconjugacy() {
        use crate::dynamics::poly::MultiPoly;
        let factor = catalog::chebyshev();
        let sc = SemiConjugacy {
            source: factor.clone(),
            projection: RationalFunction::from_poly(MultiPoly::var(1, 0)),
            factor,
        };
        let r = check_semiconjugacy(&sc, 100, 51, 1.0, 0.0).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn impossible_margin_reports_all_samples_rejected() {
        let h = catalog::grigorchuk_h();
        let id = RationalMapND::identity(h.vars().to_vec());
        let err = check_identity(&[&h], &id, 10, 61, BOX, 1e9).unwrap_err();
        assert!(matches!(err, Error::AllSamplesRejected { .. }), "{err}");
    }
}
