//! Parametric operator pencils: linear combinations of group words whose
//! coefficients are rational functions of named parameters.
//!
//! A pencil comes in two shapes.  A *scalar* pencil is a single
//! group-algebra combination; its level-n matrix is the usual expansion.
//! A *grid* pencil is a d×d operator matrix of such combinations (d the
//! alphabet size); its level-n matrix expands every cell at level n−1 and
//! assembles the grid, so the outer matrix index doubles as the first
//! letter of the index words.

use super::partition::BlockSplit;
use crate::algebra::{expand_combination, AlgebraElement, LevelMatrix, Scalar};
use crate::dynamics::RationalFunction;
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroup, Gen, GroupElement, MealyAutomaton};
use std::sync::Arc;

/// Budget used when classifying the subgroup generated by an eliminated
/// block's support.
pub const SUPPORT_GROUP_BUDGET: usize = 512;

/// Word-problem depth bound for the support-subgroup enumeration.
const SUPPORT_DEPTH_BOUND: usize = 64;

/// One pencil term: a parameter-dependent coefficient attached to a word.
#[derive(Debug, Clone)]
pub struct PencilTerm {
    /// Coefficient as a rational function of the pencil parameters.
    pub coefficient: RationalFunction,
    /// Freely reduced word in the automaton's signed states.
    pub word: Vec<Gen>,
}

/// Scalar or grid shape of a pencil.
#[derive(Debug, Clone)]
pub enum PencilForm {
    /// One combination of words.
    Scalar(Vec<PencilTerm>),
    /// A d×d grid of combinations (`cells[row][col]`).
    Grid(Vec<Vec<Vec<PencilTerm>>>),
}

/// A named parametric operator pencil over a catalog group.
#[derive(Debug, Clone)]
pub struct Pencil {
    name: String,
    automaton: Arc<MealyAutomaton>,
    params: Vec<String>,
    form: PencilForm,
}

impl Pencil {
    /// Build a scalar pencil; every coefficient must use exactly the given
    /// parameters.
    pub fn scalar(
        name: impl Into<String>,
        automaton: Arc<MealyAutomaton>,
        params: Vec<String>,
        terms: Vec<PencilTerm>,
    ) -> Result<Self> {
        let pencil = Self {
            name: name.into(),
            automaton,
            params,
            form: PencilForm::Scalar(terms),
        };
        pencil.validate()?;
        Ok(pencil)
    }

    /// Build a grid pencil; the grid must be d×d for the automaton's
    /// alphabet size d.
    pub fn grid(
        name: impl Into<String>,
        automaton: Arc<MealyAutomaton>,
        params: Vec<String>,
        cells: Vec<Vec<Vec<PencilTerm>>>,
    ) -> Result<Self> {
        let pencil = Self {
            name: name.into(),
            automaton,
            params,
            form: PencilForm::Grid(cells),
        };
        pencil.validate()?;
        Ok(pencil)
    }

    fn validate(&self) -> Result<()> {
        let arity = self.params.len();
        let check_terms = |terms: &[PencilTerm]| -> Result<()> {
            for t in terms {
                if t.coefficient.arity() != arity {
                    return Err(Error::Mismatch(format!(
                        "pencil `{}`: coefficient arity {} does not match {} parameters",
                        self.name,
                        t.coefficient.arity(),
                        arity
                    )));
                }
            }
            Ok(())
        };
        match &self.form {
            PencilForm::Scalar(terms) => check_terms(terms),
            PencilForm::Grid(cells) => {
                let d = self.automaton.alphabet_size() as usize;
                if cells.len() != d || cells.iter().any(|row| row.len() != d) {
                    return Err(Error::Mismatch(format!(
                        "pencil `{}`: grid must be {d}×{d}",
                        self.name
                    )));
                }
                for row in cells {
                    for cell in row {
                        check_terms(cell)?;
                    }
                }
                Ok(())
            }
        }
    }

    /// Pencil name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Parameter names, in evaluation order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// The group the pencil lives over.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.automaton
    }

    /// Whether this is a grid pencil.
    pub fn is_grid(&self) -> bool {
        matches!(self.form, PencilForm::Grid(_))
    }

    /// Dimension of the level-`level` matrix.
    pub fn dim(&self, level: u32) -> Result<usize> {
        crate::algebra::level_dim(self.automaton.alphabet_size(), level)
    }

    fn combine<S: Scalar>(
        &self,
        terms: &[PencilTerm],
        point: &[S],
        margin: f64,
    ) -> Result<AlgebraElement<S>> {
        let mut out = AlgebraElement::zero(self.automaton.clone());
        let names: Vec<&str> = self.params.iter().map(|s| s.as_str()).collect();
        for t in terms {
            let value = t.coefficient.eval(point, margin).map_err(|hit| {
                Error::SingularLocus {
                    map: self.name.clone(),
                    denominator: t.coefficient.den().render(&names),
                    value: hit.magnitude,
                    margin,
                }
            })?;
            out.add_term(t.word.clone(), &value);
        }
        Ok(out)
    }

    /// Evaluate a scalar pencil to a group-algebra element.
    pub fn evaluate<S: Scalar>(&self, point: &[S], margin: f64) -> Result<AlgebraElement<S>> {
        self.check_point_len(point.len())?;
        match &self.form {
            PencilForm::Scalar(terms) => self.combine(terms, point, margin),
            PencilForm::Grid(_) => Err(Error::Mismatch(format!(
                "pencil `{}` is a grid pencil; use `level_matrix`",
                self.name
            ))),
        }
    }

    /// The level-`level` matrix of the pencil at a parameter point.
    ///
    /// Grid pencils require `level ≥ 1` (their cells are expanded at
    /// `level − 1` and assembled, the outer grid index playing the role of
    /// the first letter).
    pub fn level_matrix<S: Scalar>(
        &self,
        point: &[S],
        level: u32,
        margin: f64,
    ) -> Result<LevelMatrix<S>> {
        self.check_point_len(point.len())?;
        match &self.form {
            PencilForm::Scalar(terms) => {
                let elem = self.combine(terms, point, margin)?;
                expand_combination(&elem, level)
            }
            PencilForm::Grid(cells) => {
                if level == 0 {
                    return Err(Error::Mismatch(format!(
                        "grid pencil `{}` has no level-0 matrix",
                        self.name
                    )));
                }
                let mut blocks = Vec::with_capacity(cells.len());
                for row in cells {
                    let mut out_row = Vec::with_capacity(row.len());
                    for cell in row {
                        let elem = self.combine(cell, point, margin)?;
                        out_row.push(expand_combination(&elem, level - 1)?);
                    }
                    blocks.push(out_row);
                }
                LevelMatrix::from_blocks(&blocks)
            }
        }
    }

    /// The words (sections, at one symbolic level) that appear in the
    /// eliminated block of the given split, deduplicated.
    pub fn complement_support(&self, split: &BlockSplit) -> Result<Vec<GroupElement>> {
        let d = self.automaton.alphabet_size() as usize;
        let mut words: Vec<Vec<Gen>> = Vec::new();
        let mut push = |word: Vec<Gen>| {
            if !words.contains(&word) {
                words.push(word);
            }
        };
        match (&self.form, split) {
            (PencilForm::Scalar(terms), BlockSplit::FirstLetter(i)) => {
                for t in terms {
                    for x in 0..d {
                        let (y, section) =
                            GroupElement::act_one_level(&self.automaton, &t.word, x as u8);
                        if x != *i as usize && y as usize != *i as usize {
                            push(section);
                        }
                    }
                }
            }
            (PencilForm::Grid(cells), BlockSplit::LetterMatch) => {
                for (r, row) in cells.iter().enumerate() {
                    for (c, cell) in row.iter().enumerate() {
                        for t in cell {
                            for x in 0..d {
                                let (y, section) = GroupElement::act_one_level(
                                    &self.automaton,
                                    &t.word,
                                    x as u8,
                                );
                                // Entry ((r,y),(c,x)) of the one-level block
                                // matrix: eliminated iff both coordinates
                                // miss the letter-matching set.
                                if x != c && y as usize != r {
                                    push(section);
                                }
                            }
                        }
                    }
                }
            }
            (PencilForm::Scalar(_), BlockSplit::LetterMatch) => {
                return Err(Error::Mismatch(format!(
                    "pencil `{}` is scalar; letter-match elimination applies to grid pencils",
                    self.name
                )));
            }
            (PencilForm::Grid(_), BlockSplit::FirstLetter(_)) => {
                return Err(Error::Mismatch(format!(
                    "pencil `{}` is a grid pencil; its elimination is the letter-match split",
                    self.name
                )));
            }
        }
        Ok(words
            .into_iter()
            .map(|w| GroupElement::from_word(self.automaton.clone(), w))
            .collect())
    }

    /// Order of the subgroup generated by the eliminated block's support.
    /// Fails with [`Error::InfiniteComplementGroup`] when the enumeration
    /// exceeds [`SUPPORT_GROUP_BUDGET`] elements — the signal that the
    /// elimination leaves every finite combination of group elements.
    pub fn complement_group_order(&self, split: &BlockSplit) -> Result<usize> {
        let support = self.complement_support(split)?;
        let elements = enumerate_subgroup(
            &self.automaton,
            &support,
            SUPPORT_DEPTH_BOUND,
            SUPPORT_GROUP_BUDGET,
        )?;
        Ok(elements.len())
    }

    /// Render the pencil's symbolic content for catalogs and reports.
    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.params.iter().map(|s| s.as_str()).collect();
        let render_terms = |terms: &[PencilTerm]| -> String {
            if terms.is_empty() {
                return "0".to_string();
            }
            terms
                .iter()
                .map(|t| {
                    let coeff = t.coefficient.render(&names);
                    let word = crate::group::render_word(&self.automaton, &t.word);
                    format!("({coeff})·{word}")
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        match &self.form {
            PencilForm::Scalar(terms) => {
                format!("{} ({}) = {}", self.name, self.params.join(", "), render_terms(terms))
            }
            PencilForm::Grid(cells) => {
                let rows = cells
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|cell| render_terms(cell))
                            .collect::<Vec<_>>()
                            .join(" | ")
                    })
                    .collect::<Vec<_>>()
                    .join("\n  ");
                format!("{} ({}) =\n  {}", self.name, self.params.join(", "), rows)
            }
        }
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        if len != self.params.len() {
            return Err(Error::Mismatch(format!(
                "pencil `{}` expects {} parameters, got {len}",
                self.name,
                self.params.len()
            )));
        }
        Ok(())
    }
}
