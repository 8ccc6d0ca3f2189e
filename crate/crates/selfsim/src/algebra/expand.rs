//! Expansion of group elements and algebra combinations into level matrices.
//!
//! A group element g acts on the level-n space by permuting basis words; the
//! matrix recursion builds that permutation matrix blockwise: writing σ for
//! the root action of g, block `(σ(x), x)` of the level-(n+1) matrix is the
//! level-n expansion of the section `g|_x`, and all other blocks vanish.
//! The expansion extends linearly to algebra elements and is multiplicative:
//! it factors through every relation the group satisfies, so a combination
//! that is formally nonzero can still expand to the zero matrix on every
//! level — those combinations witness the kernel of the limit.

use super::element::AlgebraElement;
use super::matrix::LevelMatrix;
use super::scalar::Scalar;
use crate::error::Result;
use crate::group::{Gen, GroupElement, MealyAutomaton};
use std::collections::HashMap;
use std::sync::Arc;

/// Per-call memo: sections repeat heavily across blocks, so each distinct
/// (word, level) pair is expanded once.
struct Expander<'a, S: Scalar> {
    aut: &'a Arc<MealyAutomaton>,
    memo: HashMap<(Vec<Gen>, u32), Arc<LevelMatrix<S>>>,
}

impl<'a, S: Scalar> Expander<'a, S> {
    fn new(aut: &'a Arc<MealyAutomaton>) -> Self {
        Self {
            aut,
            memo: HashMap::new(),
        }
    }

    fn expand(&mut self, word: &[Gen], level: u32) -> Result<Arc<LevelMatrix<S>>> {
        if let Some(hit) = self.memo.get(&(word.to_vec(), level)) {
            return Ok(hit.clone());
        }
        let d = self.aut.alphabet_size();
        let result = if level == 0 {
            // Level 0 is the one-point space: every automorphism acts as 1.
            LevelMatrix::identity(d, 0)?
        } else {
            let mut blocks: Vec<Vec<LevelMatrix<S>>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| LevelMatrix::zeros(d, level - 1))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            for x in 0..d {
                let (y, section) = GroupElement::act_one_level(self.aut, word, x);
                let sub = self.expand(&section, level - 1)?;
                blocks[y as usize][x as usize] = (*sub).clone();
            }
            LevelMatrix::from_blocks(&blocks)?
        };
        let arc = Arc::new(result);
        self.memo.insert((word.to_vec(), level), arc.clone());
        Ok(arc)
    }
}

/// Permutation matrix of a single group element on the level-n space.
pub fn expand_element<S: Scalar>(g: &GroupElement, level: u32) -> Result<LevelMatrix<S>> {
    let mut ex = Expander::new(g.automaton());
    Ok((*ex.expand(g.word(), level)?).clone())
}

/// Linear extension: expand every word of the combination and sum.
pub fn expand_combination<S: Scalar>(
    a: &AlgebraElement<S>,
    level: u32,
) -> Result<LevelMatrix<S>> {
    let aut = a.automaton().clone();
    let mut ex = Expander::new(&aut);
    let mut out = LevelMatrix::zeros(aut.alphabet_size(), level)?;
    for (word, coeff) in a.terms() {
        let m = ex.expand(word, level)?;
        for (r, c, v) in m.iter() {
            out.add_entry(r, c, &coeff.mul(v));
        }
    }
    Ok(out)
}

/// Oracle used by the test suite: build the permutation matrix directly
/// from the tree action, with no recursion involved.
pub fn permutation_matrix_direct<S: Scalar>(
    g: &GroupElement,
    level: u32,
) -> Result<LevelMatrix<S>> {
    let d = g.automaton().alphabet_size();
    let mut out = LevelMatrix::zeros(d, level)?;
    for col in 0..out.dim() {
        let word = out.word_of_index(col);
        let image = g.act(&word)?;
        let row = out.index_of_word(&image)?;
        out.set(row, col, S::one());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> GroupElement {
        GroupElement::generator_by_name(aut, name).unwrap()
    }

    #[test]
    fn recursion_matches_direct_action() {
        for name in ["grigorchuk", "basilica", "hanoi", "adding-machine"] {
            let aut = catalog::load(name).unwrap();
            // A modestly tangled word: g1 * g2⁻¹ * g1 over the first generators.
            let ids: Vec<_> = aut.generators().collect();
            let g1 = GroupElement::generator(aut.clone(), ids[0]);
            let g2 = GroupElement::generator(aut.clone(), ids[ids.len() - 1]);
            let w = g1.mul(&g2.inverse()).unwrap().mul(&g1).unwrap();
            let max_level = if aut.alphabet_size() == 2 { 6 } else { 4 };
            for level in 0..=max_level {
                let rec: LevelMatrix<Q> = expand_element(&w, level).unwrap();
                let direct: LevelMatrix<Q> = permutation_matrix_direct(&w, level).unwrap();
                assert_eq!(rec, direct, "{name} level {level}");
            }
        }
    }

    #[test]
    fn grigorchuk_level_one_matrices() {
        let aut = catalog::load("grigorchuk").unwrap();
        let a: LevelMatrix<Q> = expand_element(&gen(&aut, "a"), 1).unwrap();
        assert_eq!(a.get(0, 1), q(1));
        assert_eq!(a.get(1, 0), q(1));
        assert_eq!(a.get(0, 0), q(0));
        let d: LevelMatrix<Q> = expand_element(&gen(&aut, "d"), 1).unwrap();
        assert_eq!(d, LevelMatrix::identity(2, 1).unwrap(), "d is diag(e, b), trivial at level 1");
    }

    #[test]
    fn grigorchuk_d_collapses_at_level_two() {
        // d = (e, b) and b = (a, c), so at level 2 the diagonal blocks are
        // the level-1 images of e and b — both identity.
        let aut = catalog::load("grigorchuk").unwrap();
        let d: LevelMatrix<Q> = expand_element(&gen(&aut, "d"), 2).unwrap();
        assert_eq!(d, LevelMatrix::identity(2, 2).unwrap());
        // At level 3 the b-block finally shows the a-swap.
        let d3: LevelMatrix<Q> = expand_element(&gen(&aut, "d"), 3).unwrap();
        assert_ne!(d3, LevelMatrix::identity(2, 3).unwrap());
    }

    #[test]
    fn expansion_is_multiplicative() {
        let aut = catalog::load("basilica").unwrap();
        let u = gen(&aut, "a").mul(&gen(&aut, "b")).unwrap();
        let v = gen(&aut, "b").inverse().mul(&gen(&aut, "a")).unwrap();
        for level in 0..=5 {
            let lhs: LevelMatrix<Q> = expand_element(&u.mul(&v).unwrap(), level).unwrap();
            let ua: LevelMatrix<Q> = expand_element(&u, level).unwrap();
            let va: LevelMatrix<Q> = expand_element(&v, level).unwrap();
            assert_eq!(lhs, ua.matmul(&va).unwrap(), "level {level}");
        }
    }

    #[test]
    fn expansion_of_inverse_is_transpose() {
        let aut = catalog::load("hanoi").unwrap();
        let w = gen(&aut, "a").mul(&gen(&aut, "b")).unwrap();
        for level in 0..=3 {
            let m: LevelMatrix<Q> = expand_element(&w, level).unwrap();
            let mi: LevelMatrix<Q> = expand_element(&w.inverse(), level).unwrap();
            assert_eq!(mi, m.adjoint(), "permutation inverse = transpose");
        }
    }

    #[test]
    fn combination_expansion_is_linear() {
        let aut = catalog::load("grigorchuk").unwrap();
        let b = AlgebraElement::from_element(&gen(&aut, "b"), q(2));
        let c = AlgebraElement::from_element(&gen(&aut, "c"), q(-3));
        let sum = b.add(&c).unwrap();
        for level in 0..=4 {
            let lhs = expand_combination(&sum, level).unwrap();
            let rhs = expand_combination(&b, level)
                .unwrap()
                .add(&expand_combination(&c, level).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn klein_square_expands_to_four() {
        // (b+c+d-1)² is a 16-term formal combination, but its expansion is
        // exactly 4·I on every level — the relations bc = d, b² = e, ...
        // hold for the matrices even though the algebra never applies them.
        let aut = catalog::load("grigorchuk").unwrap();
        let mut s = AlgebraElement::from_element(&gen(&aut, "b"), q(1));
        for name in ["c", "d"] {
            s = s
                .add(&AlgebraElement::from_element(&gen(&aut, name), q(1)))
                .unwrap();
        }
        s = s.sub(&AlgebraElement::one(aut.clone())).unwrap();
        let sq = s.mul(&s).unwrap();
        assert!(sq.num_terms() > 10, "formally a large combination");
        for level in 0..=5 {
            let m = expand_combination(&sq, level).unwrap();
            let four_i = LevelMatrix::identity(2, level).unwrap().scale(&q(4));
            assert_eq!(m, four_i, "level {level}");
        }
    }
}
