//! Monte Carlo estimation of the first-hit measure.
//!
//! The left random walk `g ← h·g` (increments `h` drawn from μ) is watched
//! through its projection to the orbit-coordinate pair `x·g`: one step by
//! `h` updates the pair as `x·g ← h(x)·(h|_x · g)`.  Starting at `x = i`
//! with `g = e`, the group coordinate at the first return of `x` to `i` is
//! distributed as the first-hit measure `k_i(μ)`; sampling it yields an
//! independent check of the closed-form elimination.
//!
//! Runs are parallel over samples with one counter-mode RNG stream per
//! sample index, so results are deterministic under a fixed seed no matter
//! the thread schedule; runs that fail to return within `max_steps` are
//! counted as a mass deficit.

use super::measure::{Measure, Weight, PROBABILITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::group::{Gen, GroupElement, Letter};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Outcome of a first-hit sampling run.
#[derive(Clone, Debug)]
pub struct FirstHitReport {
    /// Empirical measure of the group coordinate at first return
    /// (mass `returned / samples`).
    pub measure: Measure<f64>,
    /// Total number of simulated walks.
    pub samples: u64,
    /// Walks that returned to the start letter within the step budget.
    pub returned: u64,
    /// Walks that exhausted `max_steps` without returning (the deficit).
    pub timed_out: u64,
    /// Mean number of steps over the returning walks (0 when none did).
    pub mean_return_steps: f64,
}

impl FirstHitReport {
    /// One-line summary for logs and CLI output.
    pub fn summary_line(&self) -> String {
        format!(
            "FIRST_HIT samples {} returned {} timed_out {} mean_steps {:.4} support {}",
            self.samples,
            self.returned,
            self.timed_out,
            self.mean_return_steps,
            self.measure.support_size()
        )
    }
}

/// Simulate `n_samples` first-hit excursions of the walk driven by μ from
/// letter `i`, with at most `max_steps` steps each, deterministically
/// seeded.  Returns the empirical first-hit measure and run statistics.
pub fn simulate_first_hit<W: Weight>(
    mu: &Measure<W>,
    i: Letter,
    n_samples: u64,
    max_steps: u64,
    seed: u64,
) -> Result<FirstHitReport> {
    let aut = mu.automaton().clone();
    let d = aut.alphabet_size();
    if i >= d {
        return Err(Error::BadLetter {
            letter: i,
            alphabet: d,
        });
    }
    if n_samples == 0 || max_steps == 0 {
        return Err(Error::Invalid(
            "simulation needs n_samples > 0 and max_steps > 0".into(),
        ));
    }
    if (mu.mass_f64() - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::BadMeasure(format!(
            "simulation needs mass 1, got {}",
            mu.mass_f64()
        )));
    }

    // Deterministically ordered atom table with cumulative weights.
    let atoms: Vec<(GroupElement, f64)> = mu
        .atoms()
        .map(|(g, w)| (g.clone(), w.to_f64()))
        .collect();
    let mut cumulative: Vec<f64> = Vec::with_capacity(atoms.len());
    let mut acc = 0.0;
    for (_, w) in &atoms {
        acc += w;
        cumulative.push(acc);
    }
    let total = acc;

    // One independent excursion per sample index.
    type Tally = (BTreeMap<Vec<Gen>, u64>, u64, u64, u64);
    let empty = || (BTreeMap::new(), 0u64, 0u64, 0u64);
    let merge = |mut a: Tally, b: Tally| -> Tally {
        for (word, count) in b.0 {
            *a.0.entry(word).or_insert(0) += count;
        }
        (a.0, a.1 + b.1, a.2 + b.2, a.3 + b.3)
    };
    let (counts, returned, timed_out, step_sum) = (0..n_samples)
        .into_par_iter()
        .map(|idx| -> Result<Tally> {
            let mut rng = rng::stream(seed, idx);
            let mut x = i;
            let mut g = GroupElement::identity(aut.clone());
            for step in 1..=max_steps {
                let u: f64 = rng.gen::<f64>() * total;
                let pick = cumulative.partition_point(|&c| c <= u).min(atoms.len() - 1);
                let h = &atoms[pick].0;
                let (image, section) = h.act_and_section(&[x])?;
                g = section.mul(&g)?;
                x = image[0];
                if x == i {
                    let mut tally = empty();
                    tally.0.insert(g.word().to_vec(), 1);
                    return Ok((tally.0, 1, 0, step));
                }
            }
            Ok((BTreeMap::new(), 0, 1, 0))
        })
        .try_reduce(empty, |a, b| Ok(merge(a, b)))?;

    // Sequential canonical aggregation: raw free words are merged into
    // canonical classes in sorted order, independent of thread timing.
    let weight = 1.0 / n_samples as f64;
    let mut pairs: Vec<(GroupElement, f64)> = Vec::with_capacity(counts.len());
    for (word, count) in counts {
        pairs.push((
            GroupElement::from_word(aut.clone(), word),
            count as f64 * weight,
        ));
    }
    let measure = Measure::from_atoms(&aut, pairs)?;
    Ok(FirstHitReport {
        measure,
        samples: n_samples,
        returned,
        timed_out,
        mean_return_steps: if returned > 0 {
            step_sum as f64 / returned as f64
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, MealyAutomaton};
    use crate::walks::schur_map::{probabilistic_schur, SchurPolicy};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn gen(aut: &Arc<MealyAutomaton>, name: &str) -> GroupElement {
        GroupElement::generator_by_name(aut, name).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn grigorchuk_third(aut: &Arc<MealyAutomaton>) -> Measure<BigRational> {
        let e = GroupElement::identity(aut.clone());
        Measure::from_atoms(
            aut,
            vec![
                (gen(aut, "a"), rat(1, 3)),
                (gen(aut, "b"), rat(1, 12)),
                (gen(aut, "c"), rat(1, 12)),
                (gen(aut, "d"), rat(1, 12)),
                (e, rat(5, 12)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_point_returns_immediately() {
        let aut = catalog::load("grigorchuk").unwrap();
        let e = Measure::<f64>::identity_point(&aut);
        let report = simulate_first_hit(&e, 0, 500, 10, 42).unwrap();
        assert_eq!(report.returned, 500);
        assert_eq!(report.timed_out, 0);
        assert_eq!(report.measure.support_size(), 1);
        assert_eq!(report.measure.identity_weight(), 1.0);
        assert_eq!(report.mean_return_steps, 1.0);
    }

    #[test]
    fn empirical_first_hit_approaches_the_exact_measure() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mu = grigorchuk_third(&aut);
        let exact = probabilistic_schur(&mu, 0, SchurPolicy::ExactSubalgebra)
            .unwrap()
            .to_f64();
        let report = simulate_first_hit(&mu, 0, 20_000, 400, 7).unwrap();
        assert!(report.timed_out == 0, "excursions return fast here");
        let tv = exact.tv_distance(&report.measure).unwrap();
        assert!(tv <= 0.03, "TV distance {tv} too large at 20k samples");
    }

    #[test]
    fn equal_seeds_reproduce_equal_reports() {
        let aut = catalog::load("basilica").unwrap();
        let a = gen(&aut, "a");
        let b = gen(&aut, "b");
        let mu = Measure::<f64>::from_atoms(
            &aut,
            vec![
                (a.clone(), 0.25),
                (a.inverse(), 0.25),
                (b.clone(), 0.25),
                (b.inverse(), 0.25),
            ],
        )
        .unwrap();
        let r1 = simulate_first_hit(&mu, 1, 4_000, 200, 99).unwrap();
        let r2 = simulate_first_hit(&mu, 1, 4_000, 200, 99).unwrap();
        assert_eq!(r1.measure.render(), r2.measure.render());
        assert_eq!(r1.summary_line(), r2.summary_line());
        let r3 = simulate_first_hit(&mu, 1, 4_000, 200, 100).unwrap();
        assert_ne!(r1.measure.render(), r3.measure.render());
    }

    #[test]
    fn step_budget_shows_up_as_deficit() {
        // One step only: the walk returns immediately or times out.
        let aut = catalog::load("grigorchuk").unwrap();
        let mu = grigorchuk_third(&aut);
        let report = simulate_first_hit(&mu, 0, 10_000, 1, 5).unwrap();
        assert!(report.timed_out > 0);
        let return_rate = report.returned as f64 / report.samples as f64;
        // P(stay at letter 0 in one step) = 1 − α = 2/3.
        assert!((return_rate - 2.0 / 3.0).abs() < 0.02);
        assert!((report.measure.mass_f64() - return_rate).abs() < 1e-12);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let aut = catalog::load("grigorchuk").unwrap();
        let e = Measure::<f64>::identity_point(&aut);
        assert!(simulate_first_hit(&e, 7, 10, 10, 1).is_err());
        assert!(simulate_first_hit(&e, 0, 0, 10, 1).is_err());
        let deficient =
            Measure::<f64>::from_atoms(&aut, vec![(gen(&aut, "a"), 0.5)]).unwrap();
        assert!(simulate_first_hit(&deficient, 0, 10, 10, 1).is_err());
    }
}
