//! Finite-level spectral approximations: Hermitian eigen-solves, affine
//! spectral slices, singular-set clouds over parameter grids, pullback
//! checks, and curve-family residuals.

pub mod eigen;
pub mod emit;
pub mod slice;
pub mod sweep;

pub use eigen::{hermitian_eigenvalues, HERMITIAN_TOLERANCE};
pub use emit::{cloud_csv, points_csv, scatter_svg, slice_csv};
pub use slice::{level_spectrum, SpectralSlice, AFFINE_TOLERANCE};
pub use sweep::{
    curve_residual, pullback_check, spectrum_sweep, CurveFitReport, GridAxis, PullbackReport,
    SigmaCloud, CLOUD_DEDUP,
};
