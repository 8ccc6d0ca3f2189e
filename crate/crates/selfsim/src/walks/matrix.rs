//! Matrix form of the Markov operator of a measure on an automaton group.
//!
//! A measure μ on a group acting on a d-letter alphabet induces a d×d
//! matrix of sub-measures: entry `(y, x)` collects `μ(g)·δ_{g|_x}` over the
//! atoms `g` that move letter `x` to letter `y`.  Each column describes one
//! first-level transition fan, so every column's total mass equals the mass
//! of μ (each atom lands in exactly one row per column).  This matrix is
//! what the probabilistic elimination in [`super::schur_map`] operates on.

use super::measure::{Measure, Weight};
use crate::error::{Error, Result};
use crate::group::{Letter, MealyAutomaton};
use std::sync::Arc;

/// d×d matrix of sub-probability measures, row-major.
#[derive(Clone, Debug)]
pub struct MeasureMatrix<W: Weight> {
    aut: Arc<MealyAutomaton>,
    dim: usize,
    entries: Vec<Measure<W>>,
}

impl<W: Weight> MeasureMatrix<W> {
    /// The automaton the entries live over.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.aut
    }

    /// Alphabet size d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(y, x)`: the sub-measure of sections of atoms moving `x` to `y`.
    pub fn entry(&self, y: usize, x: usize) -> &Measure<W> {
        assert!(y < self.dim && x < self.dim, "entry index out of range");
        &self.entries[y * self.dim + x]
    }

    /// Total mass of column `x` (equals the source measure's mass).
    pub fn column_mass(&self, x: usize) -> W {
        let mut total = W::zero();
        for y in 0..self.dim {
            total = total.add(&self.entry(y, x).mass());
        }
        total
    }

    /// The induced letter chain: `P[y][x]` is the probability that one step
    /// of the walk moves the orbit coordinate from `x` to `y`.
    pub fn letter_chain(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|y| (0..self.dim).map(|x| self.entry(y, x).mass_f64()).collect())
            .collect()
    }

    /// Check that every letter reachable from `i` can reach `i` back, so
    /// the first return to `i` happens with probability 1.  (Measure
    /// matrices of group measures are convex combinations of permutation
    /// matrices, hence doubly stochastic, and then this always holds; the
    /// check guards the elimination against malformed input regardless.)
    pub fn check_irreducible_from(&self, i: Letter) -> Result<()> {
        let d = self.dim;
        if (i as usize) >= d {
            return Err(Error::BadLetter {
                letter: i,
                alphabet: d as u8,
            });
        }
        let chain = self.letter_chain();
        let forward = reachable(&chain, i as usize, false);
        let backward = reachable(&chain, i as usize, true);
        for x in 0..d {
            if forward[x] && !backward[x] {
                return Err(Error::NotIrreducible {
                    letter: i,
                    detail: format!(
                        "letter {x} is reachable from {i} but cannot return"
                    ),
                });
            }
        }
        Ok(())
    }

    /// Letters other than `i` that the walk started at `i` can actually
    /// visit.  Unreachable letters contribute nothing to the first return
    /// and must be left out of the eliminated block (their rows of
    /// `I − D` can be singular without affecting the result).
    pub fn reachable_complement(&self, i: Letter) -> Vec<usize> {
        let chain = self.letter_chain();
        let forward = reachable(&chain, i as usize, false);
        (0..self.dim)
            .filter(|&x| x != i as usize && forward[x])
            .collect()
    }
}

/// Letters reachable from `start` along positive-mass edges
/// (`reversed` follows edges backwards).
fn reachable(chain: &[Vec<f64>], start: usize, reversed: bool) -> Vec<bool> {
    let d = chain.len();
    let mut seen = vec![false; d];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for y in 0..d {
            let mass = if reversed { chain[x][y] } else { chain[y][x] };
            if mass > 0.0 && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// The matrix form of the Markov operator of μ: entry `(y, x)` accumulates
/// `μ(g)·δ_{g|_x}` over atoms `g` with `g(x) = y`.
pub fn measure_matrix<W: Weight>(mu: &Measure<W>) -> Result<MeasureMatrix<W>> {
    let aut = mu.automaton().clone();
    let d = aut.alphabet_size() as usize;
    let mut buckets: Vec<Vec<(crate::group::GroupElement, W)>> = vec![Vec::new(); d * d];
    for (g, w) in mu.atoms() {
        for x in 0..d {
            let (image, section) = g.act_and_section(&[x as Letter])?;
            let y = image[0] as usize;
            buckets[y * d + x].push((section, w.clone()));
        }
    }
    let entries = buckets
        .into_iter()
        .map(|pairs| Measure::from_atoms(&aut, pairs))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureMatrix {
        aut,
        dim: d,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, GroupElement};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> GroupElement {
        GroupElement::generator_by_name(aut, name).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn identity_point_gives_diagonal_identity_entries() {
        let aut = catalog::load("grigorchuk").unwrap();
        let m = measure_matrix(&Measure::<BigRational>::identity_point(&aut)).unwrap();
        for y in 0..2 {
            for x in 0..2 {
                if y == x {
                    assert_eq!(m.entry(y, x).identity_weight(), rat(1, 1));
                    assert_eq!(m.entry(y, x).support_size(), 1);
                } else {
                    assert!(m.entry(y, x).is_zero());
                }
            }
        }
    }

    #[test]
    fn grigorchuk_family_entries_match_the_section_recursions() {
        // μ = αa + β(b+c+d) + (α+β)e with α = 1/3, β = (1−2α)/4 = 1/12.
        let aut = catalog::load("grigorchuk").unwrap();
        let (al, be) = (rat(1, 3), rat(1, 12));
        let e = GroupElement::identity(aut.clone());
        let mu = Measure::from_atoms(
            &aut,
            vec![
                (gen(&aut, "a"), al.clone()),
                (gen(&aut, "b"), be.clone()),
                (gen(&aut, "c"), be.clone()),
                (gen(&aut, "d"), be.clone()),
                (e, &al + &be),
            ],
        )
        .unwrap();
        let m = measure_matrix(&mu).unwrap();
        // Sections on the 0 side: b|₀ = c|₀ = a, d|₀ = e.
        assert_eq!(m.entry(0, 0).weight_of(&gen(&aut, "a")), &be + &be);
        assert_eq!(m.entry(0, 0).identity_weight(), &al + &be + &be);
        // Sections on the 1 side: b|₁ = c, c|₁ = d, d|₁ = b.
        assert_eq!(m.entry(1, 1).weight_of(&gen(&aut, "b")), be);
        assert_eq!(m.entry(1, 1).weight_of(&gen(&aut, "c")), be);
        assert_eq!(m.entry(1, 1).weight_of(&gen(&aut, "d")), be);
        assert_eq!(m.entry(1, 1).identity_weight(), &al + &be);
        // Only a swaps the letters, with trivial sections.
        assert_eq!(m.entry(1, 0).identity_weight(), al);
        assert_eq!(m.entry(1, 0).support_size(), 1);
        assert_eq!(m.entry(0, 1).identity_weight(), al);
        // Columns conserve the full mass.
        assert_eq!(m.column_mass(0), rat(1, 1));
        assert_eq!(m.column_mass(1), rat(1, 1));
    }

    #[test]
    fn basilica_family_entries_match_the_section_recursions() {
        // μ = (a + a⁻¹ + r·b + r·b⁻¹) / (2(r+1)) at r = 1: all weights ¼.
        let aut = catalog::load("basilica").unwrap();
        let a = gen(&aut, "a");
        let b = gen(&aut, "b");
        let q = rat(1, 4);
        let mu = Measure::from_atoms(
            &aut,
            vec![
                (a.clone(), q.clone()),
                (a.inverse(), q.clone()),
                (b.clone(), q.clone()),
                (b.inverse(), q.clone()),
            ],
        )
        .unwrap();
        let m = measure_matrix(&mu).unwrap();
        // a = (e, b) fixes both letters: sections e at 0, b at 1.
        assert_eq!(m.entry(0, 0).identity_weight(), rat(1, 2));
        assert_eq!(m.entry(0, 0).support_size(), 1);
        assert_eq!(m.entry(1, 1).weight_of(&b), q);
        assert_eq!(m.entry(1, 1).weight_of(&b.inverse()), q);
        // b swaps the letters: b|₀ = e, b|₁ = a, with inverses mirrored.
        assert_eq!(m.entry(1, 0).identity_weight(), q);
        assert_eq!(m.entry(1, 0).weight_of(&a.inverse()), q);
        assert_eq!(m.entry(0, 1).identity_weight(), q);
        assert_eq!(m.entry(0, 1).weight_of(&a), q);
        assert_eq!(m.column_mass(0), rat(1, 1));
        assert_eq!(m.column_mass(1), rat(1, 1));
    }

    #[test]
    fn hanoi_columns_conserve_mass_on_three_letters() {
        let aut = catalog::load("hanoi").unwrap();
        let third = rat(1, 3);
        let mu = Measure::from_atoms(
            &aut,
            vec![
                (gen(&aut, "a"), third.clone()),
                (gen(&aut, "b"), third.clone()),
                (gen(&aut, "c"), third.clone()),
            ],
        )
        .unwrap();
        let m = measure_matrix(&mu).unwrap();
        assert_eq!(m.dim(), 3);
        for x in 0..3 {
            assert_eq!(m.column_mass(x), rat(1, 1));
        }
        // Every letter's chain is irreducible (each move fixes one peg).
        for i in 0..3 {
            m.check_irreducible_from(i as Letter).unwrap();
        }
    }

    #[test]
    fn irreducibility_holds_and_bad_letters_are_rejected() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mu = Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "a"), 1.0)]).unwrap();
        let m = measure_matrix(&mu).unwrap();
        m.check_irreducible_from(0).unwrap();
        m.check_irreducible_from(1).unwrap();
        assert!(matches!(
            m.check_irreducible_from(5),
            Err(Error::BadLetter { .. })
        ));
    }
}
