//! Multidimensional rational dynamics: the renormalization maps induced by
//! Schur complements on operator pencils, their algebraic identities,
//! spectral curve families, backward orbits, and attractor clouds.

pub mod catalog;
pub mod curves;
pub mod identity;
pub mod orbit;
pub mod poly;
pub mod ratfun;

pub use curves::CurveFamily;
pub use identity::{check_identity, check_semiconjugacy, SampleReport, SemiConjugacy};
pub use orbit::{attractor_cloud, backward_orbit_1d, BackwardOrbit, Cloud};
pub use poly::MultiPoly;
pub use ratfun::{RationalFunction, RationalMapND, SingularHit};
