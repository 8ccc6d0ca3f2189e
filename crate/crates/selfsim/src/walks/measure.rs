//! Finitely supported sub-probability measures on an automaton group.
//!
//! A measure is a nonnegative weight function on finitely many group
//! elements with total mass at most 1; mass strictly below 1 records a
//! deficit (truncated or escaped probability).  Atoms are keyed by
//! *canonical* representatives: whenever two atoms are provably the same
//! tree automorphism (decided by the word problem) their weights are
//! merged, and the identity class is always keyed by the empty word.
//!
//! Weights come in two lanes through the [`Weight`] trait: exact rationals
//! (`BigRational`, used for the closed-form renormalization identities) and
//! `f64` (used for Neumann truncations and Monte Carlo estimates).

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::group::{render_word, Canon, Gen, GroupElement, MealyAutomaton};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Tolerated overshoot of the total mass above 1 (floating lane only;
/// the exact lane rejects any mass strictly above 1).
pub const MASS_SLACK: f64 = 1e-12;

/// How close to 1 a floating-point mass must be for a measure to count as a
/// probability measure.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Default per-atom pruning threshold for floating-point supports.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tree depth bound handed to every word-problem query made on behalf of a
/// measure.  Catalog groups are contracting, so equality searches close far
/// earlier; the bound only matters as a give-up point on pathological input.
pub const WORD_DEPTH_BOUND: usize = 64;

/// Scalar types usable as measure weights: real, ordered, printable.
pub trait Weight: Scalar {
    /// Strictly negative test (exact where the scalar is exact).
    fn is_negative(&self) -> bool;

    /// The weight as an `f64` (used for tolerances, sampling, entropy).
    fn to_f64(&self) -> f64 {
        self.approx().re
    }

    /// Small rational constant `p/q` (panics when `q == 0`).
    fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "ratio denominator must be nonzero");
        Self::from_rational(&BigRational::new(p.into(), q.into()))
    }

    /// Decimal/fraction rendering used by the line serialization.
    fn render(&self) -> String;
}

impl Weight for BigRational {
    fn is_negative(&self) -> bool {
        self < &<BigRational as num_traits::Zero>::zero()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Weight for f64 {
    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// A finitely supported measure on the group of a fixed automaton.
///
/// Invariants: every weight is nonnegative, the total mass is at most 1
/// (up to [`MASS_SLACK`] in the floating lane), atom keys are canonical
/// words (the identity class is keyed by the empty word), and no atom
/// carries an exactly zero weight.
#[derive(Clone, Debug)]
pub struct Measure<W: Weight> {
    aut: Arc<MealyAutomaton>,
    atoms: BTreeMap<Vec<Gen>, (GroupElement, W)>,
}

/// Merge raw `(element, weight)` pairs into canonical-keyed atoms.
///
/// A fresh word-problem interner is seeded with the identity element, so
/// the identity class always lands on the empty word.  Pairs are merged in
/// a deterministic order (sorted by raw word) which fixes the canonical
/// representative choice independent of the caller's ordering.
fn canonical_merge<W: Weight>(
    aut: &Arc<MealyAutomaton>,
    pairs: Vec<(GroupElement, W)>,
) -> Result<BTreeMap<Vec<Gen>, (GroupElement, W)>> {
    // Pre-merge identical raw words so the interner sees each word once.
    let mut raw: BTreeMap<Vec<Gen>, (GroupElement, W)> = BTreeMap::new();
    for (g, w) in pairs {
        if w.is_negative() {
            return Err(Error::BadMeasure(format!(
                "negative weight {} on atom {}",
                w.render(),
                g
            )));
        }
        if w.is_zero() {
            continue;
        }
        match raw.entry(g.word().to_vec()) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let (_, acc) = e.get_mut();
                *acc = acc.add(&w);
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((g, w));
            }
        }
    }
    let mut canon = Canon::new(aut.clone(), WORD_DEPTH_BOUND);
    canon.canon(&GroupElement::identity(aut.clone()));
    let mut atoms: BTreeMap<Vec<Gen>, (GroupElement, W)> = BTreeMap::new();
    for (_, (g, w)) in raw {
        let rep = canon.canon(&g);
        match atoms.entry(rep.word().to_vec()) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let (_, acc) = e.get_mut();
                *acc = acc.add(&w);
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((rep, w));
            }
        }
    }
    Ok(atoms)
}

impl<W: Weight> Measure<W> {
    /// The zero measure (empty support).
    pub fn zero(aut: Arc<MealyAutomaton>) -> Self {
        Self {
            aut,
            atoms: BTreeMap::new(),
        }
    }

    /// The point mass `δ_g`.
    pub fn point(g: GroupElement) -> Result<Self> {
        let aut = g.automaton().clone();
        Self::from_atoms(&aut, vec![(g, W::one())])
    }

    /// The point mass at the identity, `δ_e`.
    pub fn identity_point(aut: &Arc<MealyAutomaton>) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(
            Vec::new(),
            (GroupElement::identity(aut.clone()), W::one()),
        );
        Self {
            aut: aut.clone(),
            atoms,
        }
    }

    /// Build a measure from `(element, weight)` pairs.  Equal elements are
    /// merged (their weights add), negative weights and total mass above 1
    /// are rejected, zero-weight atoms are dropped.
    pub fn from_atoms(
        aut: &Arc<MealyAutomaton>,
        pairs: Vec<(GroupElement, W)>,
    ) -> Result<Self> {
        for (g, _) in &pairs {
            if !crate::group::same_automaton(g.automaton(), aut) {
                return Err(Error::Mismatch(
                    "measure atom lives over a different automaton".into(),
                ));
            }
        }
        let atoms = canonical_merge(aut, pairs)?;
        let m = Self {
            aut: aut.clone(),
            atoms,
        };
        m.check_mass()?;
        Ok(m)
    }

    /// Reject total mass above 1 (exactly in the exact lane, up to
    /// [`MASS_SLACK`] in the floating lane).
    fn check_mass(&self) -> Result<()> {
        if W::EXACT {
            let excess = self.mass().sub(&W::one());
            if !excess.is_zero() && !excess.is_negative() {
                return Err(Error::BadMeasure(format!(
                    "total mass {} exceeds 1",
                    self.mass().render()
                )));
            }
        } else if self.mass_f64() > 1.0 + MASS_SLACK {
            return Err(Error::BadMeasure(format!(
                "total mass {} exceeds 1 + {MASS_SLACK:.0e}",
                self.mass_f64()
            )));
        }
        Ok(())
    }

    /// The automaton whose group this measure lives on.
    pub fn automaton(&self) -> &Arc<MealyAutomaton> {
        &self.aut
    }

    /// Atoms in canonical key order: `(representative, weight)`.
    pub fn atoms(&self) -> impl Iterator<Item = (&GroupElement, &W)> {
        self.atoms.values().map(|(g, w)| (g, w))
    }

    /// Number of atoms in the support.
    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    /// True when the support is empty.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass.
    pub fn mass(&self) -> W {
        let mut total = W::zero();
        for (_, w) in self.atoms.values() {
            total = total.add(w);
        }
        total
    }

    /// Total mass as `f64`.
    pub fn mass_f64(&self) -> f64 {
        self.mass().to_f64()
    }

    /// Mass missing to 1 (the deficit of a sub-probability measure).
    pub fn deficit(&self) -> f64 {
        1.0 - self.mass_f64()
    }

    /// True when the mass is 1: exactly in the exact lane, within
    /// [`PROBABILITY_TOLERANCE`] in the floating lane.
    pub fn is_probability(&self) -> bool {
        if W::EXACT {
            self.mass() == W::one()
        } else {
            (self.mass_f64() - 1.0).abs() <= PROBABILITY_TOLERANCE
        }
    }

    /// Weight of the identity class (zero when absent).
    pub fn identity_weight(&self) -> W {
        self.atoms
            .get(&Vec::new() as &Vec<Gen>)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(W::zero)
    }

    /// Weight of the class of `g` (canonicalized against this measure's
    /// atoms; zero when the class is not in the support).
    pub fn weight_of(&self, g: &GroupElement) -> W {
        if g.is_identity_word() {
            return self.identity_weight();
        }
        if let Some((_, w)) = self.atoms.get(g.word()) {
            return w.clone();
        }
        let mut canon = Canon::new(self.aut.clone(), WORD_DEPTH_BOUND);
        canon.canon(&GroupElement::identity(self.aut.clone()));
        for (rep, _) in self.atoms.values() {
            canon.canon(rep);
        }
        let key = canon.canon(g);
        self.atoms
            .get(key.word())
            .map(|(_, w)| w.clone())
            .unwrap_or_else(W::zero)
    }

    /// Multiply every weight by a nonnegative constant.
    pub fn scale(&self, k: &W) -> Result<Self> {
        if k.is_negative() {
            return Err(Error::BadMeasure(format!(
                "scaling by negative constant {}",
                k.render()
            )));
        }
        let pairs = self
            .atoms
            .values()
            .map(|(g, w)| (g.clone(), w.mul(k)))
            .collect();
        Self::from_atoms(&self.aut, pairs)
    }

    /// Sum of two measures (weights add on merged classes).  The result
    /// must still be a sub-probability measure.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if !crate::group::same_automaton(&self.aut, &rhs.aut) {
            return Err(Error::Mismatch(
                "cannot add measures over different automata".into(),
            ));
        }
        let mut pairs: Vec<(GroupElement, W)> = Vec::new();
        for (g, w) in self.atoms.values() {
            pairs.push((g.clone(), w.clone()));
        }
        for (g, w) in rhs.atoms.values() {
            pairs.push((g.clone(), w.clone()));
        }
        Self::from_atoms(&self.aut, pairs)
    }

    /// Convolution `(self * rhs)(t) = Σ_{g·h = t} self(g)·rhs(h)`, the
    /// distribution of a product of independent picks (left factor from
    /// `self`).
    pub fn convolve(&self, rhs: &Self) -> Result<Self> {
        if !crate::group::same_automaton(&self.aut, &rhs.aut) {
            return Err(Error::Mismatch(
                "cannot convolve measures over different automata".into(),
            ));
        }
        let mut pairs: Vec<(GroupElement, W)> = Vec::new();
        for (g, wg) in self.atoms.values() {
            for (h, wh) in rhs.atoms.values() {
                pairs.push((g.mul(h)?, wg.mul(wh)));
            }
        }
        Self::from_atoms(&self.aut, pairs)
    }

    /// Remove the identity atom and renormalize the rest to mass 1.
    /// Returns the stripped measure and the removed identity weight.
    ///
    /// Requires a probability measure whose identity weight is strictly
    /// below 1 (the identity point mass has nothing left to renormalize).
    pub fn strip_identity(&self) -> Result<(Self, W)> {
        if !self.is_probability() {
            return Err(Error::BadMeasure(format!(
                "strip requires mass 1, got {}",
                self.mass().render()
            )));
        }
        let atom = self.identity_weight();
        // Renormalize by the measured non-identity mass rather than the
        // theoretical 1 − atom: on a probability measure they coincide, but
        // the measured sum makes the result's mass exactly 1 up to rounding,
        // so iterated stripping cannot amplify floating-point mass drift.
        let mut rest = W::zero();
        for (key, (_, w)) in &self.atoms {
            if !key.is_empty() {
                rest = rest.add(w);
            }
        }
        if rest.is_zero() || rest.is_negative() || (!W::EXACT && rest.to_f64() <= 0.0) {
            return Err(Error::BadMeasure(
                "measure is concentrated on the identity; nothing to strip".into(),
            ));
        }
        let mut pairs: Vec<(GroupElement, W)> = Vec::new();
        for (key, (g, w)) in &self.atoms {
            if key.is_empty() {
                continue;
            }
            let scaled = w.div(&rest).ok_or_else(|| {
                Error::BadMeasure("renormalization divided by zero".into())
            })?;
            pairs.push((g.clone(), scaled));
        }
        Ok((Self::from_atoms(&self.aut, pairs)?, atom))
    }

    /// Drop atoms with weight magnitude below `threshold` (floating-lane
    /// truncation control; exact measures usually pass `0.0`).
    pub fn prune(&self, threshold: f64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .filter(|(_, (_, w))| w.magnitude() >= threshold)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self {
            aut: self.aut.clone(),
            atoms,
        }
    }

    /// The same measure with `f64` weights.
    pub fn to_f64(&self) -> Measure<f64> {
        let atoms = self
            .atoms
            .iter()
            .map(|(k, (g, w))| (k.clone(), (g.clone(), w.to_f64())))
            .collect();
        Measure {
            aut: self.aut.clone(),
            atoms,
        }
    }

    /// Total-variation distance, treating any mass deficit as an extra
    /// hidden atom: `½ (Σ_g |a_g − b_g| + |deficit_a − deficit_b|)`.
    /// Atoms of the two measures are matched by the word problem, so
    /// different representatives of one class compare as equal.
    pub fn tv_distance(&self, rhs: &Self) -> Result<f64> {
        if !crate::group::same_automaton(&self.aut, &rhs.aut) {
            return Err(Error::Mismatch(
                "cannot compare measures over different automata".into(),
            ));
        }
        let mut canon = Canon::new(self.aut.clone(), WORD_DEPTH_BOUND);
        canon.canon(&GroupElement::identity(self.aut.clone()));
        let mut joint: BTreeMap<Vec<Gen>, (f64, f64)> = BTreeMap::new();
        for (g, w) in self.atoms.values() {
            let key = canon.canon(g).word().to_vec();
            joint.entry(key).or_insert((0.0, 0.0)).0 += w.to_f64();
        }
        for (g, w) in rhs.atoms.values() {
            let key = canon.canon(g).word().to_vec();
            joint.entry(key).or_insert((0.0, 0.0)).1 += w.to_f64();
        }
        let mut sum = 0.0;
        for (a, b) in joint.values() {
            sum += (a - b).abs();
        }
        sum += (self.deficit() - rhs.deficit()).abs();
        Ok(0.5 * sum)
    }

    /// Shannon entropy `−Σ w ln w` of the atom weights (natural log;
    /// deficit mass is ignored).
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for (_, w) in self.atoms.values() {
            let p = w.to_f64();
            if p > 0.0 {
                h -= p * p.ln();
            }
        }
        h
    }

    /// Mean representative word length `Σ w·|g|`.  Representative words
    /// come from the word-problem interner, not from geodesics, so this is
    /// an upper estimate of the mean word-metric length.
    pub fn mean_word_length(&self) -> f64 {
        self.atoms
            .values()
            .map(|(g, w)| w.to_f64() * g.len() as f64)
            .sum()
    }

    /// Line serialization: a `# group <name> mass <mass>` header followed
    /// by one `weight<TAB>word` line per atom (`'` marks inversion, the
    /// identity renders as `e`), ordered by word length then text.
    pub fn render(&self) -> String {
        let mut lines: Vec<(usize, String, String)> = self
            .atoms
            .values()
            .map(|(g, w)| {
                let word = render_word(&self.aut, g.word());
                (g.len(), word, w.render())
            })
            .collect();
        lines.sort();
        let mut out = format!(
            "# group {} mass {}\n",
            self.aut.name(),
            self.mass().render()
        );
        for (_, word, weight) in lines {
            out.push_str(&weight);
            out.push('\t');
            out.push_str(&word);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> GroupElement {
        GroupElement::generator_by_name(aut, name).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn equal_elements_merge_into_one_atom() {
        // In the first catalog group bc = d, so the two atoms must fuse.
        let aut = catalog::load("grigorchuk").unwrap();
        let bc = gen(&aut, "b").mul(&gen(&aut, "c")).unwrap();
        let m = Measure::<BigRational>::from_atoms(
            &aut,
            vec![
                (bc, rat(1, 4)),
                (gen(&aut, "d"), rat(1, 4)),
                (GroupElement::identity(aut.clone()), rat(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(m.support_size(), 2);
        assert_eq!(m.weight_of(&gen(&aut, "d")), rat(1, 2));
        assert_eq!(m.identity_weight(), rat(1, 2));
        assert!(m.is_probability());
    }

    #[test]
    fn identity_class_lands_on_the_empty_word() {
        // a·a is the identity automorphism but a nonempty free word.
        let aut = catalog::load("grigorchuk").unwrap();
        let a = gen(&aut, "a");
        let aa = a.mul(&a).unwrap();
        assert_eq!(aa.len(), 2);
        let m = Measure::<f64>::from_atoms(&aut, vec![(aa, 1.0)]).unwrap();
        assert_eq!(m.identity_weight(), 1.0);
        assert_eq!(m.support_size(), 1);
    }

    #[test]
    fn negative_and_overweight_atoms_are_rejected() {
        let aut = catalog::load("grigorchuk").unwrap();
        let a = gen(&aut, "a");
        let neg = Measure::<f64>::from_atoms(&aut, vec![(a.clone(), -0.1)]);
        assert!(matches!(neg, Err(Error::BadMeasure(_))));
        let heavy =
            Measure::<BigRational>::from_atoms(&aut, vec![(a, rat(101, 100))]);
        assert!(matches!(heavy, Err(Error::BadMeasure(_))));
    }

    #[test]
    fn convolution_respects_group_relations() {
        // (½e + ½a)² = ½e + ½a because a is an involution.
        let aut = catalog::load("grigorchuk").unwrap();
        let m = Measure::<BigRational>::from_atoms(
            &aut,
            vec![
                (GroupElement::identity(aut.clone()), rat(1, 2)),
                (gen(&aut, "a"), rat(1, 2)),
            ],
        )
        .unwrap();
        let sq = m.convolve(&m).unwrap();
        assert_eq!(sq.support_size(), 2);
        assert_eq!(sq.identity_weight(), rat(1, 2));
        assert_eq!(sq.weight_of(&gen(&aut, "a")), rat(1, 2));
        assert_eq!(sq.mass(), rat(1, 1));
    }

    #[test]
    fn strip_identity_renormalizes() {
        let aut = catalog::load("grigorchuk").unwrap();
        let m = Measure::<BigRational>::from_atoms(
            &aut,
            vec![
                (GroupElement::identity(aut.clone()), rat(1, 2)),
                (gen(&aut, "a"), rat(1, 2)),
            ],
        )
        .unwrap();
        let (stripped, atom) = m.strip_identity().unwrap();
        assert_eq!(atom, rat(1, 2));
        assert_eq!(stripped.support_size(), 1);
        assert_eq!(stripped.weight_of(&gen(&aut, "a")), rat(1, 1));

        let e_only = Measure::<BigRational>::identity_point(&aut);
        assert!(matches!(
            e_only.strip_identity(),
            Err(Error::BadMeasure(_))
        ));

        let deficient =
            Measure::<BigRational>::from_atoms(&aut, vec![(gen(&aut, "a"), rat(1, 2))])
                .unwrap();
        assert!(matches!(
            deficient.strip_identity(),
            Err(Error::BadMeasure(_))
        ));
    }

    #[test]
    fn tv_distance_matches_across_representatives() {
        // One measure holds the atom as `d`, the other as `bc`.
        let aut = catalog::load("grigorchuk").unwrap();
        let lhs =
            Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "d"), 1.0)]).unwrap();
        let bc = gen(&aut, "b").mul(&gen(&aut, "c")).unwrap();
        let rhs = Measure::<f64>::from_atoms(&aut, vec![(bc, 1.0)]).unwrap();
        assert_eq!(lhs.tv_distance(&rhs).unwrap(), 0.0);

        let other =
            Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "b"), 1.0)]).unwrap();
        assert_eq!(lhs.tv_distance(&other).unwrap(), 1.0);
    }

    #[test]
    fn tv_distance_counts_deficit() {
        let aut = catalog::load("grigorchuk").unwrap();
        let full =
            Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "a"), 1.0)]).unwrap();
        let half =
            Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "a"), 0.5)]).unwrap();
        // Half the mass moved to the hidden deficit atom: TV = ½(0.5 + 0.5).
        assert!((full.tv_distance(&half).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn render_is_deterministic_and_ordered() {
        let aut = catalog::load("basilica").unwrap();
        let a = gen(&aut, "a");
        let b = gen(&aut, "b");
        let m = Measure::<BigRational>::from_atoms(
            &aut,
            vec![
                (a.clone(), rat(1, 4)),
                (a.inverse(), rat(1, 4)),
                (b.clone(), rat(1, 4)),
                (b.inverse(), rat(1, 4)),
            ],
        )
        .unwrap();
        let text = m.render();
        assert_eq!(
            text,
            "# group basilica mass 1\n1/4\ta\n1/4\ta'\n1/4\tb\n1/4\tb'\n"
        );
        assert_eq!(text, m.render());
    }

    #[test]
    fn entropy_and_length_diagnostics() {
        let aut = catalog::load("grigorchuk").unwrap();
        let m = Measure::<f64>::from_atoms(
            &aut,
            vec![
                (GroupElement::identity(aut.clone()), 0.5),
                (gen(&aut, "a"), 0.5),
            ],
        )
        .unwrap();
        assert!((m.entropy() - (2.0f64).ln()).abs() < 1e-15);
        assert!((m.mean_word_length() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn prune_drops_tiny_atoms() {
        let aut = catalog::load("grigorchuk").unwrap();
        let m = Measure::<f64>::from_atoms(
            &aut,
            vec![(gen(&aut, "a"), 0.9), (gen(&aut, "b"), 1e-18)],
        )
        .unwrap();
        let pruned = m.prune(PRUNE_THRESHOLD);
        assert_eq!(pruned.support_size(), 1);
        assert!((pruned.mass_f64() - 0.9).abs() < 1e-15);
    }
}
