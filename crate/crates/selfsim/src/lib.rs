//! Self-similar groups of rooted-tree automorphisms and their operator
//! theory: matrix recursions, Schur-complement renormalization, finite-level
//! spectral approximations, induced rational dynamics, and random-walk
//! renormalization.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod group;
pub mod rng;
pub mod schur;
pub mod spectra;
pub mod walks;

pub use error::{Error, Result};
