//! First-hit renormalization of a random walk: the probabilistic analogue
//! of block elimination on the walk's matrix form.
//!
//! For a probability measure μ and a distinguished letter `i`, the measure
//! of the walk observed at its returns to `i` is
//!
//! `k_i(M) = A + B (I − D)⁻¹ C`
//!
//! where `A = m_ii`, `B` is row `i` without `A`, `C` is column `i` without
//! `A`, and `D` is the complementary block of the matrix form `M` of μ.
//! Entry products are group-algebra convolutions, so `(I − D)⁻¹` must be
//! computed inside a group algebra:
//!
//! * the **exact subalgebra** policy requires the union of the supports of
//!   `D`'s entries to generate a finite subgroup `H`; the inverse is then a
//!   finite-dimensional linear solve in the regular representation of `H`,
//!   exact over rational weights;
//! * the **Neumann** policy sums `B Dⁿ C` until one term adds less than
//!   `mass_tol` of probability, reporting the truncated tail as a deficit.

use super::matrix::{measure_matrix, MeasureMatrix};
use super::measure::{Measure, Weight, PROBABILITY_TOLERANCE, PRUNE_THRESHOLD, WORD_DEPTH_BOUND};
use crate::algebra::{lu_factor, DenseMatrix};
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroup, Canon, Gen, GroupElement, Letter};
use crate::schur::SUPPORT_GROUP_BUDGET;
use std::collections::BTreeMap;

/// Pivot threshold for the floating-lane regular-representation solve.
const FLOAT_PIVOT: f64 = 1e-12;

/// Negative weights of at most this magnitude produced by floating-point
/// elimination are treated as zero rather than as malformed measures.
const NEGATIVE_DUST: f64 = 1e-12;

/// How `(I − D)⁻¹` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchurPolicy {
    /// Exact inversion in the group algebra of the finite group generated
    /// by the eliminated block's support.  Fails with
    /// [`Error::InfiniteComplementGroup`] when that group is not finite
    /// within the enumeration budget.
    ExactSubalgebra,
    /// Truncated geometric series `Σ_{n<N} B Dⁿ C`, stopping once both the
    /// latest term and the geometric tail estimated from the last two terms
    /// drop below `mass_tol` (so the reported deficit is below `mass_tol`);
    /// fails with [`Error::NeumannDiverged`] when `max_terms` is exhausted
    /// first.
    Neumann { max_terms: usize, mass_tol: f64 },
}

impl SchurPolicy {
    /// Neumann truncation with the default budget and mass tolerance.
    pub fn default_neumann() -> Self {
        SchurPolicy::Neumann {
            max_terms: 4096,
            mass_tol: 1e-6,
        }
    }
}

/// The first-hit measure `k_i(μ)`: the distribution of the group
/// coordinate of the walk driven by μ at its first return to letter `i`.
///
/// μ must be a probability measure and the induced letter chain must be
/// irreducible from `i`.  Under the exact policy the result has mass
/// exactly 1 (rational weights); under the Neumann policy the truncated
/// tail shows up as a mass deficit of at most `mass_tol`.
pub fn probabilistic_schur<W: Weight>(
    mu: &Measure<W>,
    i: Letter,
    policy: SchurPolicy,
) -> Result<Measure<W>> {
    let aut = mu.automaton().clone();
    let d = aut.alphabet_size() as usize;
    if (i as usize) >= d {
        return Err(Error::BadLetter {
            letter: i,
            alphabet: d as u8,
        });
    }
    if !mu.is_probability() {
        return Err(Error::BadMeasure(format!(
            "first-hit renormalization needs mass 1, got {}",
            mu.mass().render()
        )));
    }
    let m = measure_matrix(mu)?;
    m.check_irreducible_from(i)?;
    let others = m.reachable_complement(i);
    if others.is_empty() {
        // The walk never leaves letter i: the first hit is the one-step
        // diagonal block itself.
        let pairs = sanitize(
            m.entry(i as usize, i as usize)
                .atoms()
                .map(|(g, w)| (g.clone(), w.clone()))
                .collect(),
        );
        return Measure::from_atoms(&aut, pairs);
    }

    match policy {
        SchurPolicy::ExactSubalgebra => exact_subalgebra(&m, i as usize, &others),
        SchurPolicy::Neumann {
            max_terms,
            mass_tol,
        } => neumann(&m, i as usize, &others, max_terms, mass_tol),
    }
}

/// Drop exact zeros and floating-point negative dust before the final
/// measure is assembled; genuinely negative weights stay and are rejected
/// by the measure constructor.
fn sanitize<W: Weight>(pairs: Vec<(GroupElement, W)>) -> Vec<(GroupElement, W)> {
    pairs
        .into_iter()
        .filter(|(_, w)| {
            if w.is_zero() {
                return false;
            }
            !(!W::EXACT && w.is_negative() && w.magnitude() <= NEGATIVE_DUST)
        })
        .collect()
}

/// Exact-subalgebra evaluation of `A + B (I − D)⁻¹ C`.
fn exact_subalgebra<W: Weight>(
    m: &MeasureMatrix<W>,
    i: usize,
    others: &[usize],
) -> Result<Measure<W>> {
    let aut = m.automaton().clone();
    let k = others.len();

    // The subgroup generated by the eliminated block's support.
    let mut support: Vec<GroupElement> = Vec::new();
    let mut seen_words: BTreeMap<Vec<Gen>, ()> = BTreeMap::new();
    for &j in others {
        for &l in others {
            for (g, _) in m.entry(j, l).atoms() {
                if seen_words.insert(g.word().to_vec(), ()).is_none() {
                    support.push(g.clone());
                }
            }
        }
    }
    let group = enumerate_subgroup(&aut, &support, WORD_DEPTH_BOUND, SUPPORT_GROUP_BUDGET)?;
    let h = group.len();

    // Index the group's elements; the enumeration lists the identity first.
    let mut canon = Canon::new(aut.clone(), WORD_DEPTH_BOUND);
    let mut index: BTreeMap<Vec<Gen>, usize> = BTreeMap::new();
    for (pos, g) in group.iter().enumerate() {
        let rep = canon.canon(g);
        index.insert(rep.word().to_vec(), pos);
    }
    let locate = |canon: &mut Canon, g: &GroupElement| -> Result<usize> {
        let rep = canon.canon(g);
        index.get(rep.word()).copied().ok_or_else(|| {
            Error::Invalid(format!(
                "element {g} of the eliminated block left its support group"
            ))
        })
    };

    // Lift I − D to the regular representation: left multiplication by the
    // entry (j,l) sends basis vector s of block l to basis g·s of block j.
    let n = k * h;
    let mut system: DenseMatrix<W> = DenseMatrix::identity(n);
    for (bj, &j) in others.iter().enumerate() {
        for (bl, &l) in others.iter().enumerate() {
            for (g, w) in m.entry(j, l).atoms() {
                for s in 0..h {
                    let t = locate(&mut canon, &g.mul(&group[s])?)?;
                    system.add_assign_at(bj * h + t, bl * h + s, &w.neg());
                }
            }
        }
    }

    // One right-hand-side column per block: the identity coefficient
    // vector, giving the columns of (I − D)⁻¹ as group-algebra elements.
    let mut rhs: DenseMatrix<W> = DenseMatrix::zeros(n, k);
    for block in 0..k {
        rhs.set(block * h, block, W::one());
    }
    let threshold = if W::EXACT { 0.0 } else { FLOAT_PIVOT };
    let resolvent = lu_factor(&system, threshold)?.solve(&rhs);

    // Assemble A + Σ_{j,l} B_j · ν_{jl} · C_l (convolutions, left to right).
    let mut pairs: Vec<(GroupElement, W)> = Vec::new();
    for (g, w) in m.entry(i, i).atoms() {
        pairs.push((g.clone(), w.clone()));
    }
    for (bj, &j) in others.iter().enumerate() {
        for (bl, &l) in others.iter().enumerate() {
            for t in 0..h {
                let coeff = resolvent.get(bj * h + t, bl).clone();
                if coeff.is_zero() {
                    continue;
                }
                for (gb, wb) in m.entry(i, j).atoms() {
                    let left = gb.mul(&group[t])?;
                    let wbt = wb.mul(&coeff);
                    for (gc, wc) in m.entry(l, i).atoms() {
                        pairs.push((left.mul(gc)?, wbt.mul(wc)));
                    }
                }
            }
        }
    }
    let result = Measure::from_atoms(&aut, sanitize(pairs))?;
    if W::EXACT && !result.is_probability() {
        return Err(Error::Invalid(format!(
            "exact first-hit measure has mass {} instead of 1",
            result.mass().render()
        )));
    }
    Ok(if W::EXACT {
        result
    } else {
        result.prune(PRUNE_THRESHOLD)
    })
}

/// Neumann-series evaluation of `A + Σ_n B Dⁿ C`.
fn neumann<W: Weight>(
    m: &MeasureMatrix<W>,
    i: usize,
    others: &[usize],
    max_terms: usize,
    mass_tol: f64,
) -> Result<Measure<W>> {
    if max_terms == 0 || mass_tol <= 0.0 {
        return Err(Error::Invalid(
            "Neumann policy needs max_terms > 0 and mass_tol > 0".into(),
        ));
    }
    let aut = m.automaton().clone();
    // Accumulate atoms as raw pairs so a diverging sum is reported as
    // divergence rather than as a malformed measure.
    let mut pairs: Vec<(GroupElement, W)> = Vec::new();
    let mut accumulated = 0.0;
    for (g, w) in m.entry(i, i).atoms() {
        pairs.push((g.clone(), w.clone()));
        accumulated += w.to_f64();
    }
    // cur = Dⁿ C, one sub-measure per eliminated letter.
    let mut cur: Vec<Measure<W>> = others
        .iter()
        .map(|&l| m.entry(l, i).clone())
        .collect();
    let mut residual = f64::INFINITY;
    let mut previous_term = f64::INFINITY;
    for _ in 0..max_terms {
        // Term B · cur.
        let mut term_mass = 0.0;
        for (bj, &j) in others.iter().enumerate() {
            for (gb, wb) in m.entry(i, j).atoms() {
                for (gc, wc) in cur[bj].atoms() {
                    let w = wb.mul(wc);
                    term_mass += w.to_f64();
                    pairs.push((gb.mul(gc)?, w));
                }
            }
        }
        accumulated += term_mass;
        residual = term_mass;
        if accumulated > 1.0 + PROBABILITY_TOLERANCE {
            return Err(Error::NeumannDiverged {
                mass_tol,
                iterations: max_terms,
                residual: accumulated - 1.0,
            });
        }
        // Remaining tail of a geometrically decaying series, estimated
        // from the decay ratio of the last two terms.
        let ratio = term_mass / previous_term;
        let tail = if term_mass == 0.0 {
            0.0
        } else if !previous_term.is_finite() {
            f64::INFINITY // no decay ratio yet: never stop on the first term
        } else if ratio < 1.0 {
            term_mass * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        previous_term = term_mass;
        if term_mass < mass_tol && tail < mass_tol {
            let result = Measure::from_atoms(&aut, sanitize(pairs))?;
            return Ok(if W::EXACT {
                result
            } else {
                result.prune(PRUNE_THRESHOLD)
            });
        }
        // cur ← D · cur.
        let mut next: Vec<Measure<W>> = Vec::with_capacity(others.len());
        for &j in others {
            let mut acc = Measure::zero(aut.clone());
            for (bl, &l) in others.iter().enumerate() {
                acc = acc.add(&m.entry(j, l).convolve(&cur[bl])?)?;
            }
            next.push(if W::EXACT {
                acc
            } else {
                acc.prune(PRUNE_THRESHOLD)
            });
        }
        cur = next;
    }
    Err(Error::NeumannDiverged {
        mass_tol,
        iterations: max_terms,
        residual,
    })
}
