//! Random walks on self-similar groups: weighted measures on group
//! elements, their matrices of first-level transitions, the probabilistic
//! Schur complement (first-hit renormalization), closed-form parameter
//! maps on catalog families, Monte Carlo cross-checks, and growth
//! diagnostics.
//!
//! The central object is [`Measure`], a finitely supported sub-probability
//! measure with canonically reduced words as keys, generic over exact
//! rational or floating-point weights.  [`measure_matrix`] refines a
//! measure into a letter-indexed matrix of section measures, and
//! [`probabilistic_schur`] eliminates all letters but one to produce the
//! distribution of the first return to that letter — exactly, through the
//! regular representation of the finite group spanned by the eliminated
//! block, or by adaptive Neumann truncation.

pub mod diagnostics;
pub mod family;
pub mod matrix;
pub mod measure;
pub mod schur_map;
pub mod simulate;

pub use diagnostics::{convolution_diagnostics, diagnostics_header, WalkDiagnosticsRow};
pub use family::{
    family_measure, family_schur_map, self_affine_search, self_affine_search_family,
    FamilyFixedPoint, SelfAffineOutcome, WalkFamily, DEGENERATE_MARGIN, FAMILY_NAMES,
};
pub use matrix::{measure_matrix, MeasureMatrix};
pub use measure::{Measure, Weight, PRUNE_THRESHOLD};
pub use schur_map::{probabilistic_schur, SchurPolicy};
pub use simulate::{simulate_first_hit, FirstHitReport};
