//! One-parameter spectral slices of pencils that are affine in a
//! designated spectral parameter with coefficient `-I`.

use super::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::schur::Pencil;

/// Entrywise tolerance for the affinity check `M(s1) - M(s0) = -(s1-s0) I`.
pub const AFFINE_TOLERANCE: f64 = 1e-12;

/// Denominator margin used when evaluating pencil coefficients at slice
/// points (catalog pencils have polynomial coefficients, so this never
/// rejects them).
const COEFF_MARGIN: f64 = 1e-12;

/// Eigenvalues of one affine slice `M(z) = A(fixed) - s·I` at a level.
#[derive(Debug, Clone)]
pub struct SpectralSlice {
    pencil: String,
    fixed: Vec<(String, f64)>,
    spectral: String,
    level: u32,
    eigenvalues: Vec<f64>,
}

impl SpectralSlice {
    /// Pencil name.
    pub fn pencil(&self) -> &str {
        &self.pencil
    }

    /// Fixed (non-spectral) parameter values in pencil order.
    pub fn fixed(&self) -> &[(String, f64)] {
        &self.fixed
    }

    /// Name of the spectral parameter.
    pub fn spectral(&self) -> &str {
        &self.spectral
    }

    /// Tree level of the slice.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Eigenvalues, ascending; the pencil is singular exactly at these
    /// spectral-parameter values.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Build the full parameter point for a pencil from fixed values plus a
/// value for the spectral parameter. Returns the point and the index of
/// the spectral parameter.
pub(crate) fn assemble_point(
    params: &[String],
    fixed: &[(String, f64)],
    spectral: &str,
    spectral_value: f64,
) -> Result<(Vec<f64>, usize)> {
    let spectral_index = params
        .iter()
        .position(|p| p == spectral)
        .ok_or_else(|| Error::NotSpectralForm {
            param: spectral.to_string(),
            detail: format!("pencil parameters are [{}]", params.join(", ")),
        })?;
    let mut point = vec![f64::NAN; params.len()];
    point[spectral_index] = spectral_value;
    for (name, value) in fixed {
        if name == spectral {
            return Err(Error::Mismatch(format!(
                "parameter `{name}` is the spectral parameter; it cannot be fixed"
            )));
        }
        let idx = params.iter().position(|p| p == name).ok_or_else(|| {
            Error::UnknownName {
                kind: "pencil parameter",
                name: name.clone(),
            }
        })?;
        point[idx] = *value;
    }
    if let Some(missing) = point.iter().position(|v| v.is_nan()) {
        return Err(Error::Mismatch(format!(
            "parameter `{}` was given no value",
            params[missing]
        )));
    }
    Ok((point, spectral_index))
}

/// Eigenvalues of the level-`level` matrix of the slice through `fixed`.
///
/// The pencil must be affine in `spectral` with identity coefficient:
/// `M(..., s, ...) = A - s·I`. This is verified by expanding the pencil at
/// spectral values 0 and 1 and checking that the difference is exactly
/// `-I` within [`AFFINE_TOLERANCE`].
pub fn level_spectrum(
    p: &Pencil,
    fixed: &[(String, f64)],
    spectral: &str,
    level: u32,
) -> Result<SpectralSlice> {
    let params = p.params().to_vec();
    let (point0, _) = assemble_point(&params, fixed, spectral, 0.0)?;
    let (point1, _) = assemble_point(&params, fixed, spectral, 1.0)?;
    let a0 = p.level_matrix::<f64>(&point0, level, COEFF_MARGIN)?;
    let a1 = p.level_matrix::<f64>(&point1, level, COEFF_MARGIN)?;
    let diff = a1.sub(&a0)?;
    let shifted = diff.add(&crate::algebra::LevelMatrix::identity(
        diff.alphabet(),
        diff.level(),
    )?)?;
    let deviation = shifted.max_norm();
    if deviation > AFFINE_TOLERANCE {
        return Err(Error::NotSpectralForm {
            param: spectral.to_string(),
            detail: format!(
                "M(s=1) - M(s=0) differs from -I by {deviation:.3e} at level {level}"
            ),
        });
    }
    let eigenvalues = hermitian_eigenvalues(&a0)?;
    Ok(SpectralSlice {
        pencil: p.name().to_string(),
        fixed: fixed.to_vec(),
        spectral: spectral.to_string(),
        level,
        eigenvalues,
    })
}
