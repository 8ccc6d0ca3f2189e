//! Numerical verification of renormalization laws.
//!
//! For a [`Direction`] `(pencil, S_block, map, scale)` and a range of
//! levels, draws parameter samples, evaluates the Schur complement of the
//! level-(n+1) pencil matrix and the rescaled level-n matrix at the mapped
//! point, and reports the worst entrywise deviation.

use super::catalog::Direction;
use super::complement::schur_complement;
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

/// Maximum redraws per sample index before the index is counted rejected.
const MAX_ATTEMPTS: usize = 50;

/// How sample points are produced.
#[derive(Debug, Clone)]
pub enum SampleSpec {
    /// `count` seeded uniform draws from the centered cube of the given
    /// half-width; draws too close to a singular locus are retried.
    Count {
        /// Number of samples.
        count: usize,
        /// Base seed; sample `i` uses an independent stream derived from it.
        seed: u64,
        /// Half-width of the sampling cube per coordinate.
        half_width: f64,
    },
    /// Explicit points; a singular locus here is an error, not a redraw.
    Points(Vec<Vec<f64>>),
}

/// Result of checking one sample point across the level range.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    /// Sample index (stable under the seeding scheme).
    pub index: usize,
    /// The sampled parameter point.
    pub point: Vec<f64>,
    /// Its image under the direction's map.
    pub image: Vec<f64>,
    /// `(level, deviation)` pairs, one per checked level.
    pub per_level: Vec<(u32, f64)>,
    /// Maximum deviation over all levels.
    pub deviation: f64,
}

/// Full report of a self-similarity verification run.
#[derive(Debug, Clone)]
pub struct SelfSimilarityReport {
    pencil: String,
    map: String,
    block: u8,
    levels: (u32, u32),
    margin: f64,
    samples: Vec<SampleOutcome>,
    rejected: usize,
    max_deviation: f64,
}

impl SelfSimilarityReport {
    /// Per-sample outcomes, ordered by sample index.
    pub fn samples(&self) -> &[SampleOutcome] {
        &self.samples
    }

    /// Number of sample indices abandoned after repeated singular draws.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    /// Worst deviation over all samples and levels.
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }

    /// Checked level range (small-side levels).
    pub fn levels(&self) -> (u32, u32) {
        self.levels
    }

    /// One-line summary suitable for a terminal.
    pub fn summary_line(&self) -> String {
        format!(
            "MAX_DEV {:.3e} pencil {} block {} map {} levels {}..{} samples {} rejected {}",
            self.max_deviation,
            self.pencil,
            self.block,
            self.map,
            self.levels.0,
            self.levels.1,
            self.samples.len(),
            self.rejected
        )
    }

    /// Full multi-line report: one line per sample and level, then the
    /// rejection count and the `MAX_DEV` trailer.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# schur self-similarity: S_{} of {} vs {} (levels {}..{}, margin {:.1e})",
            self.block, self.pencil, self.map, self.levels.0, self.levels.1, self.margin
        );
        for s in &self.samples {
            let point = join_coords(&s.point);
            for (level, dev) in &s.per_level {
                let _ = writeln!(
                    out,
                    "sample {}\tpoint {}\tlevel {}\tdev {:.6e}",
                    s.index, point, level, dev
                );
            }
        }
        let _ = writeln!(out, "REJECTED {}", self.rejected);
        let _ = writeln!(out, "MAX_DEV {:.6e}", self.max_deviation);
        out
    }
}

fn join_coords(point: &[f64]) -> String {
    let parts: Vec<String> = point.iter().map(|v| format!("{v:.9}")).collect();
    parts.join(",")
}

/// Check one direction over a range of small-side levels.
///
/// For each sample `z` and each level `n` in `levels`, compares
/// `S(M_{n+1}(z))` against `scale(z) · M_n(map(z))` entrywise in floating
/// point and records the worst deviation.
pub fn verify_self_similarity(
    dir: &Direction,
    levels: RangeInclusive<u32>,
    spec: &SampleSpec,
    margin: f64,
) -> Result<SelfSimilarityReport> {
    let (lo, hi) = (*levels.start(), *levels.end());
    if lo < 1 || hi < lo {
        return Err(Error::Invalid(format!(
            "level range {lo}..={hi} must start at 1 and be nondecreasing"
        )));
    }
    let arity = dir.pencil().params().len();

    let outcomes: Vec<Result<Option<SampleOutcome>>> = match spec {
        SampleSpec::Count {
            count,
            seed,
            half_width,
        } => (0..*count)
            .into_par_iter()
            .map(|index| {
                let mut rng = rng::stream(*seed, index as u64);
                for _ in 0..MAX_ATTEMPTS {
                    let point: Vec<f64> = (0..arity)
                        .map(|_| rng.gen_range(-half_width..=*half_width))
                        .collect();
                    match check_point(dir, index, &point, lo, hi, margin) {
                        Ok(outcome) => return Ok(Some(outcome)),
                        Err(e) if is_redrawable(&e) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Ok(None)
            })
            .collect(),
        SampleSpec::Points(points) => points
            .par_iter()
            .enumerate()
            .map(|(index, point)| {
                if point.len() != arity {
                    return Err(Error::Mismatch(format!(
                        "sample {index}: point has {} coordinates, pencil `{}` expects {arity}",
                        point.len(),
                        dir.pencil().name()
                    )));
                }
                check_point(dir, index, point, lo, hi, margin).map(Some)
            })
            .collect(),
    };

    let mut samples = Vec::new();
    let mut rejected = 0usize;
    for outcome in outcomes {
        match outcome? {
            Some(s) => samples.push(s),
            None => rejected += 1,
        }
    }
    if samples.is_empty() {
        let attempted = match spec {
            SampleSpec::Count { count, .. } => *count,
            SampleSpec::Points(points) => points.len(),
        };
        return Err(Error::AllSamplesRejected { attempted, margin });
    }
    let max_deviation = samples
        .iter()
        .map(|s| s.deviation)
        .fold(0.0_f64, f64::max);
    Ok(SelfSimilarityReport {
        pencil: dir.pencil().name().to_string(),
        map: dir.map().name().to_string(),
        block: dir.block(),
        levels: (lo, hi),
        margin,
        samples,
        rejected,
        max_deviation,
    })
}

/// Errors that mean "this draw landed too close to a singular locus": the
/// sampler retries instead of failing.
fn is_redrawable(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularLocus { .. } | Error::SingularBlock { .. } | Error::NotSpectralForm { .. }
    )
}

fn check_point(
    dir: &Direction,
    index: usize,
    point: &[f64],
    lo: u32,
    hi: u32,
    margin: f64,
) -> Result<SampleOutcome> {
    let image = dir.map().eval_real(point, margin)?;
    let kappa = dir
        .scale()
        .eval_real(point, margin)
        .map_err(|hit| Error::SingularLocus {
            map: dir.pencil().name().to_string(),
            denominator: "scale denominator".to_string(),
            value: hit.magnitude,
            margin,
        })?;
    let mut per_level = Vec::with_capacity((hi - lo + 1) as usize);
    let mut worst = 0.0_f64;
    for n in lo..=hi {
        let big = dir.pencil().level_matrix::<f64>(point, n + 1, margin)?;
        let small = dir
            .pencil()
            .level_matrix::<f64>(&image, n, margin)?
            .scale(&kappa);
        let complement = schur_complement(&big, dir.split())?;
        let dev = complement.max_diff(&small)?;
        per_level.push((n, dev));
        worst = worst.max(dev);
    }
    Ok(SampleOutcome {
        index,
        point: point.to_vec(),
        image,
        per_level,
        deviation: worst,
    })
}
