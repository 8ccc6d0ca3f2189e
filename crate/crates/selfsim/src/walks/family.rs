//! One-parameter measure families whose first-hit renormalization closes,
//! their scalar renormalization maps, and the fixed-point search for
//! self-affine measures.
//!
//! Stripping the identity atom off the first-hit measure defines the
//! renormalization `μ ↦ (k_i(μ) − k_i(μ)(e)·δ_e) / (1 − k_i(μ)(e))` on
//! probability measures.  On two catalog families this action closes into
//! a one-dimensional map of the parameter:
//!
//! * the four-generator family `μ(α) = α·a + β·(b+c+d) + (α+β)·e` with
//!   `β = (1−2α)/4` renormalizes by `α ↦ (1−α)/2` at letter 0 (attracting
//!   fixed point `α = 1/3`) and by `α ↦ α/2` at letter 1 (whose only fixed
//!   point, `α = 0`, degenerates the family);
//! * the two-generator torsion-free family
//!   `μ(r) = (a + a⁻¹ + r·b + r·b⁻¹) / (2(r+1))` renormalizes at letter 1
//!   by the involution `r ↦ 2/r`; in the conjugate coordinate
//!   `z = r/(2√2)` the same map reads `z ↦ 1/(4z)` with fixed point ½.
//!
//! A measure μ is *self-affine* at letter `i` when `k_i(μ)` is a convex
//! combination of `δ_e` and μ itself; the search below iterates the
//! renormalization to find such measures and their coefficients.

use super::measure::{Measure, Weight};
use super::schur_map::{probabilistic_schur, SchurPolicy};
use crate::error::{Error, Result};
use crate::group::{catalog, GroupElement, Letter};

/// A stripped family value this close to the degenerate boundary is
/// classified as a degenerate fixed point.
pub const DEGENERATE_MARGIN: f64 = 1e-6;

/// The measure families with closed-form renormalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkFamily {
    /// `μ(α) = α·a + β·(b+c+d) + (α+β)·e`, `β = (1−2α)/4`, `α ∈ (0, ½)`,
    /// on the four-generator torsion catalog group.
    GrigorchukAlpha,
    /// `μ(r) = (a + a⁻¹ + r·b + r·b⁻¹) / (2(r+1))`, `r > 0`, on the
    /// two-generator torsion-free catalog group.
    BasilicaR,
    /// The same family in the conjugate coordinate `z = r/(2√2) > 0`,
    /// where the letter-1 renormalization is `z ↦ 1/(4z)`.  Map-only:
    /// building the measure for an exact `z` would need √2.
    BasilicaZ,
}

/// All family names accepted by [`WalkFamily::parse`].
pub const FAMILY_NAMES: [&str; 3] = ["grigorchuk-alpha", "basilica-r", "basilica-z"];

impl WalkFamily {
    /// Parse a family name.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "grigorchuk-alpha" => Ok(Self::GrigorchukAlpha),
            "basilica-r" => Ok(Self::BasilicaR),
            "basilica-z" => Ok(Self::BasilicaZ),
            _ => Err(Error::UnknownName {
                kind: "walk family",
                name: name.to_string(),
            }),
        }
    }

    /// The family's catalog name.
    pub fn name(&self) -> &'static str {
        match self {
            Self::GrigorchukAlpha => "grigorchuk-alpha",
            Self::BasilicaR => "basilica-r",
            Self::BasilicaZ => "basilica-z",
        }
    }

    /// The catalog group the family's measures live on.
    pub fn group_name(&self) -> &'static str {
        match self {
            Self::GrigorchukAlpha => "grigorchuk",
            Self::BasilicaR | Self::BasilicaZ => "basilica",
        }
    }

    /// Check that `value` lies in the family's open parameter domain.
    pub fn check_domain(&self, value: f64) -> Result<()> {
        let ok = match self {
            Self::GrigorchukAlpha => value > 0.0 && value < 0.5,
            Self::BasilicaR | Self::BasilicaZ => value > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "value {value} outside the domain of family {} ({})",
                self.name(),
                match self {
                    Self::GrigorchukAlpha => "0 < α < 1/2",
                    Self::BasilicaR => "r > 0",
                    Self::BasilicaZ => "z > 0",
                }
            )))
        }
    }
}

/// The closed-form renormalization of the family parameter at letter `i`.
///
/// Agrees with `strip ∘ probabilistic_schur` on the family measures: the
/// stripped first-hit measure of the parameter `v` member is the stripped
/// member at parameter `family_schur_map(family, i, v)`.
pub fn family_schur_map(family: WalkFamily, i: Letter, value: f64) -> Result<f64> {
    family.check_domain(value)?;
    match (family, i) {
        (WalkFamily::GrigorchukAlpha, 0) => Ok((1.0 - value) / 2.0),
        (WalkFamily::GrigorchukAlpha, 1) => Ok(value / 2.0),
        (WalkFamily::BasilicaR, 1) => Ok(2.0 / value),
        (WalkFamily::BasilicaZ, 1) => Ok(1.0 / (4.0 * value)),
        (WalkFamily::BasilicaR | WalkFamily::BasilicaZ, 0) => Err(Error::Invalid(
            "the two-generator family has no closed form at letter 0: the \
             eliminated block's support generates an infinite group"
                .into(),
        )),
        _ => Err(Error::BadLetter {
            letter: i,
            alphabet: 2,
        }),
    }
}

/// Build the family member at a rational-weight parameter value.
///
/// The weight type supplies the arithmetic, so exact rationals give exact
/// members.  `BasilicaZ` is map-only (its measure parameter is `2√2·z`).
pub fn family_measure<W: Weight>(family: WalkFamily, value: &W) -> Result<Measure<W>> {
    let v = value.to_f64();
    family.check_domain(v)?;
    let aut = catalog::load(family.group_name())?;
    match family {
        WalkFamily::GrigorchukAlpha => {
            // β = (1 − 2α)/4, identity atom α + β.
            let al = value.clone();
            let two_al = al.add(&al);
            let be = W::one().sub(&two_al).div(&W::ratio(4, 1)).ok_or_else(|| {
                Error::Invalid("family weight arithmetic failed".into())
            })?;
            let e = GroupElement::identity(aut.clone());
            Measure::from_atoms(
                &aut,
                vec![
                    (GroupElement::generator_by_name(&aut, "a")?, al.clone()),
                    (GroupElement::generator_by_name(&aut, "b")?, be.clone()),
                    (GroupElement::generator_by_name(&aut, "c")?, be.clone()),
                    (GroupElement::generator_by_name(&aut, "d")?, be.clone()),
                    (e, al.add(&be)),
                ],
            )
        }
        WalkFamily::BasilicaR => {
            // p = 1/(2(r+1)) on a±, q = r·p on b±.
            let r = value.clone();
            let denom = r.add(&W::one()).mul(&W::ratio(2, 1));
            let p = W::one().div(&denom).ok_or_else(|| {
                Error::Invalid("family weight arithmetic failed".into())
            })?;
            let q = r.mul(&p);
            let a = GroupElement::generator_by_name(&aut, "a")?;
            let b = GroupElement::generator_by_name(&aut, "b")?;
            Measure::from_atoms(
                &aut,
                vec![
                    (a.clone(), p.clone()),
                    (a.inverse(), p),
                    (b.clone(), q.clone()),
                    (b.inverse(), q),
                ],
            )
        }
        WalkFamily::BasilicaZ => Err(Error::Invalid(
            "family basilica-z is map-only; build measures through \
             basilica-r at r = 2√2·z"
                .into(),
        )),
    }
}

/// Result of a scalar fixed-point search on a family parameter.
#[derive(Clone, Copy, Debug)]
pub struct FamilyFixedPoint {
    /// Final parameter value.
    pub value: f64,
    /// Iterations consumed.
    pub iterations: usize,
    /// True when the value converged onto the degenerate boundary of the
    /// family's domain rather than an interior fixed point.
    pub degenerate: bool,
}

/// Iterate the closed-form family map to a fixed point: stop when one step
/// moves the value by at most `tol`, fail with [`Error::Budget`] after
/// `max_iters` steps.
pub fn self_affine_search_family(
    family: WalkFamily,
    i: Letter,
    start: f64,
    tol: f64,
    max_iters: usize,
) -> Result<FamilyFixedPoint> {
    if tol <= 0.0 || max_iters == 0 {
        return Err(Error::Invalid(
            "search needs tol > 0 and max_iters > 0".into(),
        ));
    }
    let mut value = start;
    for iteration in 1..=max_iters {
        let next = family_schur_map(family, i, value)?;
        let step = (next - value).abs();
        value = next;
        if step <= tol {
            return Ok(FamilyFixedPoint {
                value,
                iterations: iteration,
                degenerate: boundary_distance(family, value) <= DEGENERATE_MARGIN,
            });
        }
    }
    Err(Error::Budget(format!(
        "family fixed-point search did not move less than {tol:.3e} within \
         {max_iters} iterations (value {value})"
    )))
}

/// Distance of a parameter value to its family's domain boundary.
fn boundary_distance(family: WalkFamily, value: f64) -> f64 {
    match family {
        WalkFamily::GrigorchukAlpha => value.min(0.5 - value),
        WalkFamily::BasilicaR | WalkFamily::BasilicaZ => value,
    }
}

/// Outcome of the measure-space self-affine search.
#[derive(Clone, Debug)]
pub enum SelfAffineOutcome<W: Weight> {
    /// The renormalization converged to a fixed measure ν with
    /// `k_i(ν) = (1 − c)·δ_e + c·ν`; `coefficient` is `c`.
    Converged {
        fixed: Measure<W>,
        coefficient: f64,
        iterations: usize,
    },
    /// The iteration collapsed onto the identity point mass.
    Degenerate { iterations: usize },
}

/// Iterate `μ ← strip(k_i(μ))` from `start` until the total-variation
/// step is at most `tol`.  Returns the fixed measure and its self-affinity
/// coefficient, or reports degeneration to `δ_e`; fails with
/// [`Error::Budget`] after `max_iters` steps.
pub fn self_affine_search<W: Weight>(
    start: &Measure<W>,
    i: Letter,
    tol: f64,
    max_iters: usize,
    policy: SchurPolicy,
) -> Result<SelfAffineOutcome<W>> {
    if tol <= 0.0 || max_iters == 0 {
        return Err(Error::Invalid(
            "search needs tol > 0 and max_iters > 0".into(),
        ));
    }
    let mut current = start.clone();
    for iteration in 1..=max_iters {
        let hit = probabilistic_schur(&current, i, policy)?;
        let identity_atom = hit.identity_weight().to_f64();
        if 1.0 - identity_atom <= DEGENERATE_MARGIN {
            return Ok(SelfAffineOutcome::Degenerate { iterations: iteration });
        }
        let (stripped, _) = hit.strip_identity()?;
        let step = stripped.tv_distance(&current)?;
        current = stripped;
        if step <= tol {
            return Ok(SelfAffineOutcome::Converged {
                fixed: current,
                coefficient: 1.0 - identity_atom,
                iterations: iteration,
            });
        }
    }
    Err(Error::Budget(format!(
        "self-affine search did not contract below {tol:.3e} within {max_iters} iterations"
    )))
}
