//! Multi-parameter singular-set clouds: sweep a grid over the non-spectral
//! parameters, solve each affine slice exactly in the spectral parameter,
//! and check clouds against rational-map pullbacks and implicit curve
//! families.

use super::slice::level_spectrum;
use crate::dynamics::{CurveFamily, RationalMapND};
use crate::error::{Error, Result};
use crate::schur::Pencil;
use rayon::prelude::*;

/// Eigenvalues closer than this within one fiber are merged.
pub const CLOUD_DEDUP: f64 = 1e-9;

/// One sampling axis for a non-spectral parameter.
#[derive(Debug, Clone)]
pub struct GridAxis {
    /// Parameter name.
    pub param: String,
    /// Left end of the sweep.
    pub min: f64,
    /// Right end of the sweep.
    pub max: f64,
    /// Number of grid values (0 gives an empty cloud, 1 gives `min`).
    pub count: usize,
}

impl GridAxis {
    /// Evenly spaced sample values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|i| self.min + (self.max - self.min) * (i as f64) / ((n - 1) as f64))
                .collect(),
        }
    }
}

/// Points of parameter space where the level pencil is singular, restricted
/// to a finite grid in the non-spectral parameters.
#[derive(Debug, Clone)]
pub struct SigmaCloud {
    pencil: String,
    params: Vec<String>,
    spectral_index: usize,
    level: u32,
    points: Vec<Vec<f64>>,
}

impl SigmaCloud {
    /// Pencil name the cloud was computed from.
    pub fn pencil(&self) -> &str {
        &self.pencil
    }

    /// Full parameter names in pencil order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Index of the spectral parameter within [`Self::params`].
    pub fn spectral_index(&self) -> usize {
        self.spectral_index
    }

    /// Tree level of the underlying matrices.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Full parameter-space points (spectral coordinate filled with the
    /// eigenvalue), grid-major, eigenvalues ascending within each fiber.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Number of cloud points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the grid produced no points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sweep the grid and collect the singular set of the level-`level` pencil.
///
/// The axes must cover exactly the non-spectral parameters (any order);
/// each fiber is solved as an affine slice, so the cloud is exactly the
/// singular set restricted to the grid, up to eigensolver accuracy.
pub fn spectrum_sweep(
    p: &Pencil,
    axes: &[GridAxis],
    spectral: &str,
    level: u32,
) -> Result<SigmaCloud> {
    let params = p.params().to_vec();
    let spectral_index = params
        .iter()
        .position(|s| s == spectral)
        .ok_or_else(|| Error::NotSpectralForm {
            param: spectral.to_string(),
            detail: format!("pencil parameters are [{}]", params.join(", ")),
        })?;
    // Axes must name each non-spectral parameter exactly once.
    let mut coverage = vec![false; params.len()];
    coverage[spectral_index] = true;
    for axis in axes {
        let idx = params
            .iter()
            .position(|s| *s == axis.param)
            .ok_or_else(|| Error::UnknownName {
                kind: "pencil parameter",
                name: axis.param.clone(),
            })?;
        if coverage[idx] {
            return Err(Error::Mismatch(format!(
                "parameter `{}` appears twice (or is the spectral parameter)",
                axis.param
            )));
        }
        coverage[idx] = true;
    }
    if let Some(missing) = coverage.iter().position(|c| !c) {
        return Err(Error::Mismatch(format!(
            "no grid axis for parameter `{}`",
            params[missing]
        )));
    }

    let axis_values: Vec<Vec<f64>> = axes.iter().map(GridAxis::values).collect();
    let total: usize = axis_values.iter().map(Vec::len).product::<usize>()
        * usize::from(!axes.is_empty());
    let total = if axes.is_empty() { 1 } else { total };

    let fibers: Vec<Result<Vec<Vec<f64>>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            // Decode the row-major multi-index (first axis slowest).
            let mut rest = flat;
            let mut fixed: Vec<(String, f64)> = Vec::with_capacity(axes.len());
            for (axis, values) in axes.iter().zip(&axis_values).rev() {
                let k = rest % values.len();
                rest /= values.len();
                fixed.push((axis.param.clone(), values[k]));
            }
            fixed.reverse();
            let slice = level_spectrum(p, &fixed, spectral, level)?;
            let mut out: Vec<Vec<f64>> = Vec::new();
            let mut last: Option<f64> = None;
            for &eig in slice.eigenvalues() {
                if last.is_some_and(|prev| eig - prev <= CLOUD_DEDUP) {
                    continue;
                }
                last = Some(eig);
                let mut point = vec![0.0; params.len()];
                point[spectral_index] = eig;
                for (name, value) in &fixed {
                    let idx = params.iter().position(|s| s == name).unwrap();
                    point[idx] = *value;
                }
                out.push(point);
            }
            Ok(out)
        })
        .collect();

    let mut points = Vec::new();
    for fiber in fibers {
        points.extend(fiber?);
    }
    Ok(SigmaCloud {
        pencil: p.name().to_string(),
        params,
        spectral_index,
        level,
        points,
    })
}

/// Outcome of checking a cloud against the pullback law.
#[derive(Debug, Clone)]
pub struct PullbackReport {
    /// Points whose image was checked against the lower-level fiber.
    pub checked: usize,
    /// Points skipped because the map's denominators fell inside the margin.
    pub skipped: usize,
    /// Worst distance from an image point to the lower-level singular set.
    pub max_deviation: f64,
    /// The cloud point achieving the worst deviation.
    pub worst_point: Option<Vec<f64>>,
}

/// Check that every admissible cloud point maps into the singular set one
/// level down.
///
/// For each cloud point `z`, computes `map(z)` and measures the distance
/// from its spectral coordinate to the exact eigenvalue fiber of the
/// level-`small_level` pencil at the image's non-spectral coordinates.
/// Points where a denominator magnitude falls below `margin` are skipped
/// as inadmissible.
pub fn pullback_check(
    cloud: &SigmaCloud,
    map: &RationalMapND,
    p: &Pencil,
    small_level: u32,
    margin: f64,
) -> Result<PullbackReport> {
    if p.name() != cloud.pencil() {
        return Err(Error::Mismatch(format!(
            "cloud was computed from `{}`, not `{}`",
            cloud.pencil(),
            p.name()
        )));
    }
    let params = cloud.params().to_vec();
    if map.arity() != params.len() {
        return Err(Error::Mismatch(format!(
            "map `{}` has arity {}, pencil has {} parameters",
            map.name(),
            map.arity(),
            params.len()
        )));
    }
    let spectral_index = cloud.spectral_index();
    let spectral = params[spectral_index].clone();

    let outcomes: Vec<Result<Option<f64>>> = cloud
        .points()
        .par_iter()
        .map(|point| {
            let image = match map.eval_real(point, margin) {
                Ok(image) => image,
                Err(Error::SingularLocus { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let fixed: Vec<(String, f64)> = params
                .iter()
                .zip(&image)
                .enumerate()
                .filter(|(i, _)| *i != spectral_index)
                .map(|(_, (name, value))| (name.clone(), *value))
                .collect();
            let slice = level_spectrum(p, &fixed, &spectral, small_level)?;
            let target = image[spectral_index];
            let dev = slice
                .eigenvalues()
                .iter()
                .map(|e| (e - target).abs())
                .fold(f64::INFINITY, f64::min);
            Ok(Some(dev))
        })
        .collect();

    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut max_deviation = 0.0_f64;
    let mut worst_point = None;
    for (point, outcome) in cloud.points().iter().zip(outcomes) {
        match outcome? {
            None => skipped += 1,
            Some(dev) => {
                checked += 1;
                if dev > max_deviation {
                    max_deviation = dev;
                    worst_point = Some(point.clone());
                }
            }
        }
    }
    Ok(PullbackReport {
        checked,
        skipped,
        max_deviation,
        worst_point,
    })
}

/// Residual report of a cloud against an implicit curve family.
#[derive(Debug, Clone)]
pub struct CurveFitReport {
    /// Number of cloud points measured.
    pub count: usize,
    /// Worst min-residual over the cloud.
    pub max_residual: f64,
    /// Decade histogram: `(exponent, points)` counts points whose residual
    /// lies in `(10^(e-1), 10^e]`, clamped to the -16..=2 range.
    pub histogram: Vec<(i32, usize)>,
}

impl CurveFitReport {
    /// Multi-line rendering of the histogram plus the maximum.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (exp, n) in &self.histogram {
            out.push_str(&format!("residual <= 1e{exp:+}: {n}\n"));
        }
        out.push_str(&format!(
            "points {} max residual {:.6e}\n",
            self.count, self.max_residual
        ));
        out
    }
}

/// For each cloud point, take the minimum absolute value of the family's
/// implicit equations; report the maximum over the cloud and a decade
/// histogram.
pub fn curve_residual(cloud: &SigmaCloud, family: &CurveFamily) -> Result<CurveFitReport> {
    if family.spatial_arity() != cloud.params().len() {
        return Err(Error::Mismatch(format!(
            "curve family `{}` lives in {} variables, cloud points have {}",
            family.name,
            family.spatial_arity(),
            cloud.params().len()
        )));
    }
    if family.theta_values.is_empty() && family.lines.is_empty() {
        return Err(Error::Invalid("curve family is empty".into()));
    }
    let residuals: Vec<f64> = cloud
        .points()
        .par_iter()
        .map(|point| family.residual(point))
        .collect();
    let mut counts = std::collections::BTreeMap::<i32, usize>::new();
    let mut max_residual = 0.0_f64;
    for &r in &residuals {
        max_residual = max_residual.max(r);
        let exp = if r == 0.0 {
            -16
        } else {
            (r.log10().ceil() as i32).clamp(-16, 2)
        };
        *counts.entry(exp).or_default() += 1;
    }
    Ok(CurveFitReport {
        count: residuals.len(),
        max_residual,
        histogram: counts.into_iter().collect(),
    })
}
