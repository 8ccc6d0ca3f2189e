//! Group-algebra elements, their matrix expansions on tree levels, and the
//! dense exact/floating linear algebra beneath the Schur machinery.

pub mod dense;
pub mod element;
pub mod expand;
pub mod expr;
pub mod matrix;
pub mod scalar;

pub use dense::{
    determinant, inverse, lu_factor, smallest_pivot, smallest_singular_value, solve,
    solve_refined, DenseMatrix, Lu,
};
pub use element::AlgebraElement;
pub use expand::{expand_combination, expand_element, permutation_matrix_direct};
pub use expr::parse_combination;
pub use matrix::{level_dim, LevelMatrix, MAX_LEVEL_DIM};
pub use scalar::{rational_from_str, Scalar};
