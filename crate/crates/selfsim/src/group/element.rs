//! Group elements: freely reduced words in signed automaton states.
//!
//! A word `[q1, q2, ..., qk]` acts on the tree as the composition
//! `q1 ∘ q2 ∘ ... ∘ qk` (the rightmost factor acts first), matching the
//! product convention `(gh)(v) = g(h(v))` and the section cocycle
//! `(gh)|_v = g|_{h(v)} · h|_v`.
//!
//! Words are only *freely* reduced (adjacent `q q⁻¹` pairs cancel and
//! identity-state letters are dropped); distinct words may still represent
//! the same tree automorphism.  Exact equality of automorphisms is decided
//! by the word-problem routines in [`crate::group::wordproblem`].

use super::automaton::{same_automaton, Letter, MealyAutomaton, StateId, IDENTITY_STATE};
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// One signed state: `(state, inverted)`.
pub type Gen = (StateId, bool);

/// An automorphism of the rooted d-ary tree, given as a freely reduced word
/// in the signed states of a fixed automaton.
#[derive(Clone)]
pub struct GroupElement {
    aut: Arc<MealyAutomaton>,
    word: Vec<Gen>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({})", self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_word(&self.aut, &self.word))
    }
}

/// Render a word in generator letters, `'` marking inversion (`ab'c`).
/// The empty word renders as `e`.
pub fn render_word(aut: &MealyAutomaton, word: &[Gen]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    let mut out = String::new();
    for &(state, inv) in word {
        out.push_str(&aut.state(state).name);
        if inv {
            out.push('\'');
        }
    }
    out
}

/// Push one signed letter onto a freely reduced word, keeping it reduced.
fn push_reduced(word: &mut Vec<Gen>, gen: Gen) {
    if gen.0 == IDENTITY_STATE {
        return;
    }
    match word.last() {
        Some(&(state, inv)) if state == gen.0 && inv != gen.1 => {
            word.pop();
        }
        _ => word.push(gen),
    }
}

impl GroupElement {
    /// The identity element.
    pub fn identity(aut: Arc<MealyAutomaton>) -> Self {
        Self {
            aut,
            word: Vec::new(),
        }
    }

    /// The generator behind a single automaton state.
    pub fn generator(aut: Arc<MealyAutomaton>, state: StateId) -> Self {
        Self::from_word(aut, vec![(state, false)])
    }

    /// Look a generator up by name (`"b"`) and build it.
    pub fn generator_by_name(aut: &Arc<MealyAutomaton>, name: &str) -> Result<Self> {
        let id = aut.state_id(name).ok_or_else(|| Error::UnknownName {
            kind: "generator",
            name: name.to_string(),
        })?;
        Ok(Self::generator(aut.clone(), id))
    }

    /// Build an element from an arbitrary word; the word is freely reduced
    /// and identity letters are dropped.
    pub fn from_word(aut: Arc<MealyAutomaton>, word: Vec<Gen>) -> Self {
        let mut reduced = Vec::with_capacity(word.len());
        for gen in word {
            push_reduced(&mut reduced, gen);
        }
        Self { aut, word: reduced }
    }

    /// The underlying automaton.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.aut
    }

    /// The freely reduced word.
    pub fn word(&self) -> &[Gen] {
        &self.word
    }

    /// Word length after free reduction.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// True when the *word* is empty.  (A nonempty word may still be the
    /// identity automorphism; use `wordproblem::is_trivial` for that.)
    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    /// Group product `self · other` (other acts first on the tree).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !same_automaton(&self.aut, &other.aut) {
            return Err(Error::Mismatch(
                "cannot multiply elements over different automata".into(),
            ));
        }
        let mut word = self.word.clone();
        for &gen in &other.word {
            push_reduced(&mut word, gen);
        }
        Ok(Self {
            aut: self.aut.clone(),
            word,
        })
    }

    /// Group inverse (reverse the word, flip every sign).
    pub fn inverse(&self) -> Self {
        let word = self
            .word
            .iter()
            .rev()
            .map(|&(state, inv)| (state, !inv))
            .collect();
        Self {
            aut: self.aut.clone(),
            word,
        }
    }

    /// Integer power (negative exponents use the inverse).
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.aut.clone());
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base).expect("same automaton");
        }
        out
    }

    /// Apply one signed state to one letter: returns the output letter and
    /// the section (again a single signed state).
    fn step(aut: &MealyAutomaton, gen: Gen, letter: Letter) -> (Letter, Gen) {
        let (state, inv) = gen;
        if !inv {
            let y = aut.output(state, letter);
            (y, (aut.section_state(state, letter), false))
        } else {
            // (q⁻¹)(x) = σ_q⁻¹(x) and (q⁻¹)|_x = (q|_{σ_q⁻¹(x)})⁻¹.
            let y = aut.inverse_output(state, letter);
            (y, (aut.section_state(state, y), true))
        }
    }

    /// Apply a whole word to one letter; returns the output letter and the
    /// section word (freely reduced, same length bound).
    pub(crate) fn act_one_level(
        aut: &MealyAutomaton,
        word: &[Gen],
        letter: Letter,
    ) -> (Letter, Vec<Gen>) {
        // The rightmost factor consumes the letter first:
        // (q1…qk)|_x = q1|_{(q2…qk)(x)} · q2|_{(q3…qk)(x)} ··· qk|_x.
        let mut sections_rev: Vec<Gen> = Vec::with_capacity(word.len());
        let mut x = letter;
        for &gen in word.iter().rev() {
            let (y, sec) = Self::step(aut, gen, x);
            sections_rev.push(sec);
            x = y;
        }
        let mut section = Vec::with_capacity(sections_rev.len());
        for &gen in sections_rev.iter().rev() {
            push_reduced(&mut section, gen);
        }
        (x, section)
    }

    /// Validate that every letter of `v` is inside the alphabet.
    fn check_word(&self, v: &[Letter]) -> Result<()> {
        let d = self.aut.alphabet_size();
        for &x in v {
            if x >= d {
                return Err(Error::BadLetter {
                    letter: x,
                    alphabet: d,
                });
            }
        }
        Ok(())
    }

    /// Image of the tree word `v` under this automorphism.
    pub fn act(&self, v: &[Letter]) -> Result<Vec<Letter>> {
        Ok(self.act_and_section(v)?.0)
    }

    /// The section `g|_v` (the automorphism induced on the subtree at `v`).
    pub fn section(&self, v: &[Letter]) -> Result<GroupElement> {
        Ok(self.act_and_section(v)?.1)
    }

    /// Image of `v` and the section at `v`, in one pass.
    pub fn act_and_section(&self, v: &[Letter]) -> Result<(Vec<Letter>, GroupElement)> {
        self.check_word(v)?;
        let mut current = self.word.clone();
        let mut image = Vec::with_capacity(v.len());
        for &x in v {
            let (y, next) = Self::act_one_level(&self.aut, &current, x);
            image.push(y);
            current = next;
        }
        Ok((
            image,
            GroupElement {
                aut: self.aut.clone(),
                word: current,
            },
        ))
    }

    /// Root permutation: the image of each alphabet letter.
    pub fn root_permutation(&self) -> Vec<Letter> {
        let d = self.aut.alphabet_size();
        (0..d)
            .map(|x| Self::act_one_level(&self.aut, &self.word, x).0)
            .collect()
    }

    /// Wreath decomposition `(σ, (h_0, …, h_{d-1}))`: the root permutation
    /// `σ(x) = g(x)` together with one component per *output* letter,
    /// `h_y = g|_{g⁻¹(y)}`.
    pub fn wreath_decompose(&self) -> (Vec<Letter>, Vec<GroupElement>) {
        let d = self.aut.alphabet_size() as usize;
        let mut perm = vec![0u8; d];
        let mut components: Vec<GroupElement> = vec![GroupElement::identity(self.aut.clone()); d];
        for x in 0..d {
            let (y, section) = Self::act_one_level(&self.aut, &self.word, x as Letter);
            perm[x] = y;
            components[y as usize] = GroupElement {
                aut: self.aut.clone(),
                word: section,
            };
        }
        (perm, components)
    }

    /// Portrait to the given depth: the root permutation at every node with
    /// `|v| < depth`, in breadth-first order.  Each entry is `(node, perm)`.
    pub fn portrait(&self, depth: usize) -> Vec<(Vec<Letter>, Vec<Letter>)> {
        let d = self.aut.alphabet_size();
        let mut out = Vec::new();
        let mut frontier: Vec<(Vec<Letter>, Vec<Gen>)> = vec![(Vec::new(), self.word.clone())];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (node, word) in frontier {
                let perm: Vec<Letter> = (0..d)
                    .map(|x| Self::act_one_level(&self.aut, &word, x).0)
                    .collect();
                out.push((node.clone(), perm));
                for x in 0..d {
                    let (_, sec) = Self::act_one_level(&self.aut, &word, x);
                    let mut child = node.clone();
                    child.push(x);
                    next.push((child, sec));
                }
            }
            frontier = next;
        }
        out
    }
}
