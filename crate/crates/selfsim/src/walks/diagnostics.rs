//! Growth diagnostics along convolution powers of a measure.
//!
//! These are desk-scale numerical estimates computed from truncated
//! convolution powers μ*ⁿ — useful for eyeballing entropy growth, word
//! drift, and return probabilities, but not certified asymptotics: the
//! pruning threshold biases every column, and n is small.

use super::measure::{Measure, Weight};
use crate::error::{Error, Result};

/// One row of the diagnostics table: statistics of the n-th convolution
/// power of the input measure.
#[derive(Clone, Debug)]
pub struct WalkDiagnosticsRow {
    /// Convolution power n (row 1 is the measure itself).
    pub n: usize,
    /// Number of canonical atoms after pruning.
    pub support: usize,
    /// Retained mass after pruning (deficit is the pruned remainder).
    pub mass: f64,
    /// Shannon entropy −Σ w·ln w of the retained atoms, in nats.
    pub entropy: f64,
    /// entropy / n.
    pub entropy_rate: f64,
    /// Mean canonical word length under the retained atoms.
    pub mean_length: f64,
    /// mean_length / n.
    pub drift_rate: f64,
    /// Weight of the identity class (exact return probability at step n
    /// up to pruning loss).
    pub return_probability: f64,
}

impl WalkDiagnosticsRow {
    /// Fixed-width table line; pair with [`diagnostics_header`].
    pub fn render(&self) -> String {
        format!(
            "{:>4} {:>9} {:>12.9} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>14.9}",
            self.n,
            self.support,
            self.mass,
            self.entropy,
            self.entropy_rate,
            self.mean_length,
            self.drift_rate,
            self.return_probability,
        )
    }
}

/// Header line matching [`WalkDiagnosticsRow::render`].
pub fn diagnostics_header() -> String {
    format!(
        "{:>4} {:>9} {:>12} {:>12} {:>12} {:>12} {:>12} {:>14}",
        "n", "support", "mass", "entropy", "entr_rate", "mean_len", "drift_rate", "return_prob",
    )
}

/// Compute diagnostics rows for μ*¹ … μ*ⁿᵐᵃˣ, pruning atoms below
/// `prune_threshold` after every convolution to keep supports tractable.
pub fn convolution_diagnostics<W: Weight>(
    mu: &Measure<W>,
    n_max: usize,
    prune_threshold: f64,
) -> Result<Vec<WalkDiagnosticsRow>> {
    if n_max == 0 {
        return Err(Error::Invalid("diagnostics need n_max ≥ 1".into()));
    }
    if !(0.0..1.0).contains(&prune_threshold) {
        return Err(Error::Invalid(
            "prune threshold must lie in [0, 1)".into(),
        ));
    }
    let base = mu.prune(prune_threshold);
    let mut power = base.clone();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            power = power.convolve(&base)?.prune(prune_threshold);
        }
        let entropy = power.entropy();
        let mean_length = power.mean_word_length();
        rows.push(WalkDiagnosticsRow {
            n,
            support: power.support_size(),
            mass: power.mass_f64(),
            entropy,
            entropy_rate: entropy / n as f64,
            mean_length,
            drift_rate: mean_length / n as f64,
            return_probability: power.identity_weight().to_f64(),
        });
    }
    Ok(rows)
}
