//! Elements of the group algebra: finite formal linear combinations of
//! freely reduced words.
//!
//! Words are combined by concatenation followed by *free* reduction only —
//! no group relations are applied.  Two combinations that are equal as
//! operators (e.g. because the group satisfies extra relations) may thus be
//! distinct as algebra elements; equality of operators is observable through
//! expansion to level matrices.

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::group::{render_word, same_automaton, Gen, GroupElement, Letter, MealyAutomaton};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A finite linear combination of group words with `S` coefficients.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<S: Scalar> {
    aut: Arc<MealyAutomaton>,
    terms: BTreeMap<Vec<Gen>, S>,
}

impl<S: Scalar> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{:?}·{}", c, render_word(&self.aut, w)))
            .collect();
        write!(f, "AlgebraElement[{}]", rendered.join(" + "))
    }
}

impl<S: Scalar> AlgebraElement<S> {
    /// The zero element.
    pub fn zero(aut: Arc<MealyAutomaton>) -> Self {
        Self {
            aut,
            terms: BTreeMap::new(),
        }
    }

    /// The unit (coefficient one on the empty word).
    pub fn one(aut: Arc<MealyAutomaton>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), S::one());
        Self { aut, terms }
    }

    /// A single group element with coefficient `coeff`.
    pub fn from_element(g: &GroupElement, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(g.word().to_vec(), coeff);
        }
        Self {
            aut: g.automaton().clone(),
            terms,
        }
    }

    /// The underlying automaton.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.aut
    }

    /// Iterate over (word, coefficient) pairs in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &S)> {
        self.terms.iter()
    }

    /// Number of words with nonzero coefficient.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the combination has no terms at all.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if !same_automaton(&self.aut, &rhs.aut) {
            return Err(Error::Mismatch(
                "algebra elements over different automata".into(),
            ));
        }
        Ok(())
    }

    /// Add a single term in place.
    pub fn add_term(&mut self, word: Vec<Gen>, coeff: &S) {
        if coeff.is_zero() {
            return;
        }
        let g = GroupElement::from_word(self.aut.clone(), word);
        let entry = self.terms.entry(g.word().to_vec()).or_insert_with(S::zero);
        *entry = entry.add(coeff);
        if entry.is_zero() {
            self.terms.remove(g.word());
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &c.neg());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero(self.aut.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.mul(k)))
            .collect();
        Self {
            aut: self.aut.clone(),
            terms,
        }
    }

    /// Algebra product: words concatenate (with free reduction only).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let mut out = Self::zero(self.aut.clone());
        for (u, s) in &self.terms {
            for (v, t) in &rhs.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &s.mul(t));
            }
        }
        Ok(out)
    }

    /// The star involution: reverse and invert every word, conjugate every
    /// coefficient.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.aut.clone());
        for (w, c) in &self.terms {
            let rev: Vec<Gen> = w.iter().rev().map(|&(s, inv)| (s, !inv)).collect();
            out.add_term(rev, &c.conj());
        }
        out
    }

    /// Integer power of the combination.
    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut out = Self::one(self.aut.clone());
        for _ in 0..exp {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// One symbolic level of the matrix recursion: the d×d grid of algebra
    /// elements whose `(y, x)` cell collects `coeff · section-at-x` over
    /// every term whose word sends letter `x` to letter `y`.  Expanding each
    /// cell at level n and assembling the grid reproduces the level-(n+1)
    /// expansion of the combination itself.
    pub fn one_level_blocks(&self) -> Vec<Vec<Self>> {
        let d = self.aut.alphabet_size() as usize;
        let mut grid: Vec<Vec<Self>> = (0..d)
            .map(|_| (0..d).map(|_| Self::zero(self.aut.clone())).collect())
            .collect();
        for (word, coeff) in &self.terms {
            for x in 0..d {
                let (y, section) = GroupElement::act_one_level(&self.aut, word, x as Letter);
                grid[y as usize][x].add_term(section, coeff);
            }
        }
        grid
    }

    /// Render as `c1·w1 + c2·w2 + …` using generator letters.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("({:?})*{}", c.approx(), render_word(&self.aut, w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> AlgebraElement<BigRational> {
        AlgebraElement::from_element(
            &GroupElement::generator_by_name(aut, name).unwrap(),
            Scalar::one(),
        )
    }

    #[test]
    fn products_concatenate_without_group_relations() {
        let aut = catalog::load("grigorchuk").unwrap();
        let a = gen(&aut, "a");
        // a·a is the length-2 word aa, NOT the unit, even though a² = e
        // as automorphisms: the algebra is over freely reduced words.
        let aa = a.mul(&a).unwrap();
        assert_eq!(aa.num_terms(), 1);
        let (word, coeff) = aa.terms().next().unwrap();
        assert_eq!(word.len(), 2);
        assert_eq!(coeff, &q(1));
        // Formal inverses do cancel.
        let e = AlgebraElement::from_element(
            &GroupElement::generator_by_name(&aut, "a").unwrap().inverse(),
            Scalar::one(),
        );
        let unit = a.mul(&e).unwrap();
        assert_eq!(unit, AlgebraElement::one(aut.clone()));
    }

    #[test]
    fn linearity_and_cancellation() {
        let aut = catalog::load("grigorchuk").unwrap();
        let b = gen(&aut, "b");
        let c = gen(&aut, "c");
        let sum = b.add(&c).unwrap();
        assert_eq!(sum.num_terms(), 2);
        let diff = sum.sub(&b).unwrap();
        assert_eq!(diff, c);
        let zero = diff.sub(&c).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn distributivity_on_small_combinations() {
        let aut = catalog::load("grigorchuk").unwrap();
        let a = gen(&aut, "a");
        let b = gen(&aut, "b");
        let c = gen(&aut, "c");
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_is_an_involution_and_antihomomorphism() {
        let aut = catalog::load("basilica").unwrap();
        let a = gen(&aut, "a");
        let b = gen(&aut, "b");
        let p = a.add(&b.scale(&q(2))).unwrap();
        let r = b.mul(&a).unwrap().sub(&AlgebraElement::one(aut.clone())).unwrap();
        assert_eq!(p.adjoint().adjoint(), p);
        let lhs = p.mul(&r).unwrap().adjoint();
        let rhs = r.adjoint().mul(&p.adjoint()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
