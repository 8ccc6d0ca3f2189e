//! Schur-complement engine: block partitions of level matrices, dense
//! complements and block inverses, parametric operator pencils, and the
//! verification of renormalization laws connecting consecutive levels.

pub mod catalog;
pub mod complement;
pub mod partition;
pub mod pencil;
pub mod verify;

pub use catalog::{direction, pencil, resolve_pencil, Direction, DIRECTIONS, PENCIL_NAMES};
pub use complement::{
    compose_schur, default_threshold, frobenius_inverse, frobenius_inverse_dense,
    schur_complement, schur_complement_dense, schur_complement_with, PIVOT_RATIO,
};
pub use partition::{BlockSplit, IndexPartition};
pub use pencil::{Pencil, PencilForm, PencilTerm, SUPPORT_GROUP_BUDGET};
pub use verify::{verify_self_similarity, SampleOutcome, SampleSpec, SelfSimilarityReport};
