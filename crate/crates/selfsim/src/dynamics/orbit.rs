//! Backward orbits of one-dimensional polynomial maps and forward orbit
//! clouds of multidimensional rational maps.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::ratfun::RationalMapND;
use crate::error::{Error, Result};
use crate::rng;

/// Absolute spacing below which two preimages are considered equal.
const DEDUP_SPACING: f64 = 1e-12;
/// Imaginary part (relative to the real part) below which a root counts
/// as real.
const REALITY_TOLERANCE: f64 = 1e-10;

/// All real preimages of a seed set under a polynomial map, level by level.
#[derive(Debug, Clone)]
pub struct BackwardOrbit {
    /// `levels[0]` is the (deduplicated, sorted) seed list; `levels[k]`
    /// holds the real solutions of `f(x) = t` over `t` in `levels[k-1]`.
    pub levels: Vec<Vec<f64>>,
    /// Union of all levels, ascending and deduplicated.
    pub values: Vec<f64>,
    /// Number of complex (discarded) preimages encountered.
    pub dropped_complex: usize,
}

fn sort_dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for x in v {
        if out.last().map_or(true, |&last| x - last > DEDUP_SPACING) {
            out.push(x);
        }
    }
    out
}

/// Real roots of `c[0] + c[1] x + ... + c[deg] x^deg`, plus the count of
/// complex roots discarded. `c[deg]` must be nonzero.
fn real_roots(coeffs: &[f64]) -> (Vec<f64>, usize) {
    let deg = coeffs.len() - 1;
    match deg {
        0 => (Vec::new(), 0),
        1 => (vec![-coeffs[0] / coeffs[1]], 0),
        2 => {
            let (c, b, a) = (coeffs[0], coeffs[1], coeffs[2]);
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                return (Vec::new(), 2);
            }
            // Stable quadratic formula: compute the larger-magnitude root
            // first, obtain the other from the product of roots.
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q == 0.0 {
                (vec![0.0, -b / a], 0)
            } else {
                (vec![q / a, c / q], 0)
            }
        }
        _ => {
            // Companion matrix of the monic normalization.
            let lead = coeffs[deg];
            let n = deg;
            let companion = DMatrix::<f64>::from_fn(n, n, |r, c| {
                if c == n - 1 {
                    -coeffs[r] / lead
                } else if r == c + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            let eigen = companion.complex_eigenvalues();
            let mut roots = Vec::new();
            let mut dropped = 0usize;
            for ev in eigen.iter() {
                if ev.im.abs() <= REALITY_TOLERANCE * ev.re.abs().max(1.0) {
                    roots.push(ev.re);
                } else {
                    dropped += 1;
                }
            }
            (roots, dropped)
        }
    }
}

/// Compute the backward orbit of `seeds` under a one-dimensional
/// polynomial map, to the given depth.
///
/// The map must have arity one and a constant denominator. Complex
/// preimages are dropped and counted; each level is deduplicated at
/// spacing 1e-12.
pub fn backward_orbit_1d(f: &RationalMapND, seeds: &[f64], depth: usize) -> Result<BackwardOrbit> {
    if f.arity() != 1 {
        return Err(Error::Mismatch(format!(
            "backward orbit needs a one-dimensional map, `{}` has arity {}",
            f.name(),
            f.arity()
        )));
    }
    let comp = &f.comps()[0];
    if !comp.is_polynomial() {
        return Err(Error::Invalid(format!(
            "backward orbit needs a polynomial map, `{}` has a nonconstant denominator",
            f.name()
        )));
    }
    let den_const = comp
        .den()
        .terms()
        .next()
        .map(|(_, c)| c.to_f64().unwrap_or(f64::NAN))
        .unwrap_or(1.0);
    let mut coeffs: Vec<f64> = comp
        .num()
        .univariate_coeffs()
        .expect("arity checked above")
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN) / den_const)
        .collect();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::Invalid(format!(
            "map `{}` is constant; preimages are not discrete",
            f.name()
        )));
    }

    let mut levels = vec![sort_dedup(seeds.to_vec())];
    let mut dropped_complex = 0usize;
    for _ in 0..depth {
        let previous = levels.last().unwrap();
        let mut next = Vec::new();
        for &target in previous {
            let mut shifted = coeffs.clone();
            shifted[0] -= target;
            let (roots, dropped) = real_roots(&shifted);
            next.extend(roots);
            dropped_complex += dropped;
        }
        levels.push(sort_dedup(next));
    }
    let values = sort_dedup(levels.concat());
    Ok(BackwardOrbit {
        levels,
        values,
        dropped_complex,
    })
}

/// Number of tail iterates recorded per orbit.
const TAIL_LENGTH: usize = 16;
/// Coordinate magnitude beyond which an orbit counts as escaped.
const ESCAPE_BOUND: f64 = 1e6;
/// Denominator margin used while iterating (tight, so the dynamics are
/// disturbed as little as possible).
const ORBIT_MARGIN: f64 = 1e-9;
/// Half-width of the initial-point sampling box.
const START_BOX: f64 = 4.0;

/// A forward-orbit point cloud with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Cloud {
    /// Map that generated the cloud.
    pub map: String,
    /// Master seed.
    pub seed: u64,
    /// Recorded points, grouped by orbit in orbit order.
    pub points: Vec<Vec<f64>>,
    /// Orbits that left the escape bound.
    pub escaped: usize,
    /// Orbits that hit a singular locus.
    pub singular: usize,
    /// Total orbits simulated.
    pub orbits: usize,
}

impl Cloud {
    /// Render as CSV with identifying header comments; byte-stable under
    /// equal seeds.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# map: {}\n", self.map));
        out.push_str(&format!("# seed: {}\n", self.seed));
        out.push_str(&format!(
            "# orbits: {} escaped: {} singular: {}\n",
            self.orbits, self.escaped, self.singular
        ));
        let arity = self.points.first().map(Vec::len).unwrap_or(0);
        let header: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for p in &self.points {
            let row: Vec<String> = p.iter().map(f64::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

enum OrbitOutcome {
    Tail(Vec<Vec<f64>>),
    Escaped,
    Singular,
}

fn simulate_orbit(map: &RationalMapND, seed: u64, index: u64, burn_in: usize) -> OrbitOutcome {
    use rand::Rng;
    let mut orbit_rng = rng::stream(seed, index);
    let mut point: Vec<f64> = (0..map.arity())
        .map(|_| orbit_rng.gen_range(-START_BOX..START_BOX))
        .collect();
    let mut tail = Vec::with_capacity(TAIL_LENGTH);
    for step in 0..burn_in + TAIL_LENGTH {
        match map.eval_real(&point, ORBIT_MARGIN) {
            Ok(next) => point = next,
            Err(_) => return OrbitOutcome::Singular,
        }
        if point.iter().any(|c| !c.is_finite() || c.abs() > ESCAPE_BOUND) {
            return OrbitOutcome::Escaped;
        }
        if step >= burn_in {
            tail.push(point.clone());
        }
    }
    OrbitOutcome::Tail(tail)
}

/// Iterate random starting points and collect the bounded orbit tails.
///
/// Simulates `ceil(n_points / 16)` orbits in parallel with per-orbit
/// seeded generators, so the cloud is deterministic for a fixed seed.
/// Orbits that escape or hit a singular locus contribute no points and
/// are counted in the result.
pub fn attractor_cloud(
    map: &RationalMapND,
    n_points: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Cloud> {
    if !(2..=3).contains(&map.arity()) {
        return Err(Error::Invalid(format!(
            "attractor clouds are drawn for maps of arity 2 or 3, `{}` has arity {}",
            map.name(),
            map.arity()
        )));
    }
    let orbits = n_points.div_ceil(TAIL_LENGTH).max(1);
    let outcomes: Vec<OrbitOutcome> = (0..orbits)
        .into_par_iter()
        .map(|i| simulate_orbit(map, seed, i as u64, burn_in))
        .collect();
    let mut cloud = Cloud {
        map: map.name().to_string(),
        seed,
        points: Vec::with_capacity(n_points),
        escaped: 0,
        singular: 0,
        orbits,
    };
    for outcome in outcomes {
        match outcome {
            OrbitOutcome::Tail(tail) => {
                for p in tail {
                    if cloud.points.len() < n_points {
                        cloud.points.push(p);
                    }
                }
            }
            OrbitOutcome::Escaped => cloud.escaped += 1,
            OrbitOutcome::Singular => cloud.singular += 1,
        }
    }
    Ok(cloud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::catalog;
    use crate::dynamics::poly::MultiPoly;
    use crate::dynamics::ratfun::RationalFunction;

    #[test]
    fn quadratic_preimages_match_closed_forms() {
        // Solutions of x^2 - x - 3 = 0 are (1 ± sqrt 13)/2.
        let orbit = backward_orbit_1d(&catalog::hanoi_1d(), &[0.0], 1).unwrap();
        let lo = (1.0 - 13f64.sqrt()) / 2.0;
        let hi = (1.0 + 13f64.sqrt()) / 2.0;
        assert_eq!(orbit.levels.len(), 2);
        assert_eq!(orbit.values.len(), 3);
        assert!((orbit.values[0] - lo).abs() < 1e-14);
        assert!((orbit.values[1] - 0.0).abs() < 1e-14);
        assert!((orbit.values[2] - hi).abs() < 1e-14);
        assert_eq!(orbit.dropped_complex, 0);

        // 2x^2 - 1 = 1 has the two solutions ±1.
        let orbit = backward_orbit_1d(&catalog::chebyshev(), &[1.0], 1).unwrap();
        assert_eq!(orbit.levels[1], vec![-1.0, 1.0]);
    }

    #[test]
    fn depth_zero_returns_seeds() {
        let orbit = backward_orbit_1d(&catalog::chebyshev(), &[0.3, -0.7, 0.3], 0).unwrap();
        assert_eq!(orbit.levels.len(), 1);
        assert_eq!(orbit.values, vec![-0.7, 0.3]);
    }

    #[test]
    fn complex_preimages_are_counted_not_returned() {
        // 2x^2 - 1 = -3 has no real solutions.
        let orbit = backward_orbit_1d(&catalog::chebyshev(), &[-3.0], 1).unwrap();
        assert_eq!(orbit.dropped_complex, 2);
        assert!(orbit.levels[1].is_empty());
        assert_eq!(orbit.values, vec![-3.0]);
    }

    #[test]
    fn index_map_orbit_doubles_per_level() {
        let orbit = backward_orbit_1d(&catalog::theta_alpha(), &[0.0], 2).unwrap();
        assert_eq!(orbit.levels[1].len(), 2);
        assert_eq!(orbit.levels[2].len(), 4);
        assert_eq!(orbit.values.len(), 7);
        assert_eq!(orbit.dropped_complex, 0);
        // Preimages of 0 under 1 - 2 th^2 are ±sqrt(1/2).
        assert!((orbit.levels[1][1] - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cubic_falls_back_to_the_companion_matrix() {
        // x^3 - x = 0 has roots {-1, 0, 1}.
        let x = MultiPoly::var(1, 0);
        let cubic = RationalMapND::new(
            "cubic",
            vec!["x".into()],
            vec![RationalFunction::from_poly(x.pow(3).sub(&x))],
        );
        let orbit = backward_orbit_1d(&cubic, &[0.0], 1).unwrap();
        assert_eq!(orbit.levels[1].len(), 3);
        for (root, expect) in orbit.levels[1].iter().zip([-1.0, 0.0, 1.0]) {
            assert!((root - expect).abs() < 1e-10, "{root} vs {expect}");
        }
    }

    #[test]
    fn non_polynomial_maps_are_rejected() {
        assert!(backward_orbit_1d(&catalog::grigorchuk_f(), &[0.0], 1).is_err());
        let x = MultiPoly::var(1, 0);
        let reciprocal = RationalMapND::new(
            "recip",
            vec!["x".into()],
            vec![RationalFunction::new(MultiPoly::int(1, 1), x)],
        );
        assert!(backward_orbit_1d(&reciprocal, &[1.0], 1).is_err());
    }

    #[test]
    fn contraction_cloud_concentrates_at_the_fixed_point() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let half = MultiPoly::int(2, 2);
        let contraction = RationalMapND::new(
            "halve",
            vec!["x".into(), "y".into()],
            vec![
                RationalFunction::new(x, half.clone()),
                RationalFunction::new(y, half),
            ],
        );
        let cloud = attractor_cloud(&contraction, 32, 100, 5).unwrap();
        assert_eq!(cloud.points.len(), 32);
        for p in &cloud.points {
            assert!(p.iter().all(|c| c.abs() < 1e-6), "{p:?}");
        }
    }

    #[test]
    fn clouds_are_deterministic_per_seed() {
        let map = catalog::basilica();
        let a = attractor_cloud(&map, 64, 60, 42).unwrap();
        let b = attractor_cloud(&map, 64, 60, 42).unwrap();
        assert_eq!(a.csv(), b.csv());
        let c = attractor_cloud(&map, 64, 60, 43).unwrap();
        assert_ne!(a.csv(), c.csv());
    }

    #[test]
    fn arity_guard_rejects_1d_maps() {
        assert!(attractor_cloud(&catalog::chebyshev(), 10, 10, 1).is_err());
    }
}
