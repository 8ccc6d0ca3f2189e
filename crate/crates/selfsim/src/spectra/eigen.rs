//! Hermitian eigenvalue computation for level matrices.

use crate::algebra::{LevelMatrix, Scalar};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Entrywise deviation from Hermitian symmetry above which a matrix is
/// rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// All eigenvalues of a Hermitian level matrix, sorted ascending.
///
/// Real symmetric input is solved directly; complex Hermitian input goes
/// through the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose
/// spectrum is that of the original with every multiplicity doubled.
pub fn hermitian_eigenvalues<S: Scalar>(m: &LevelMatrix<S>) -> Result<Vec<f64>> {
    if !m.is_hermitian(HERMITIAN_TOLERANCE) {
        let dev = hermitian_deviation(m);
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: HERMITIAN_TOLERANCE,
        });
    }
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dense = m.to_dense();
    let mut has_imaginary = false;
    let approx: DMatrix<nalgebra::Complex<f64>> = DMatrix::from_fn(n, n, |i, j| {
        let v = dense.get(i, j).approx();
        if v.im != 0.0 {
            has_imaginary = true;
        }
        nalgebra::Complex::new(v.re, v.im)
    });
    let mut values: Vec<f64> = if has_imaginary {
        let embedded = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, bj) = (i % n, j % n);
            let v = approx[(bi, bj)];
            match (i / n, j / n) {
                (0, 0) | (1, 1) => v.re,
                (0, 1) => -v.im,
                _ => v.im,
            }
        });
        let sym = (embedded.clone() + embedded.transpose()) * 0.5;
        let all = sym.symmetric_eigenvalues();
        let mut sorted: Vec<f64> = all.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        // Every eigenvalue appears twice; keep one representative per pair.
        sorted.chunks(2).map(|pair| (pair[0] + pair[1]) / 2.0).collect()
    } else {
        let real = DMatrix::<f64>::from_fn(n, n, |i, j| approx[(i, j)].re);
        let sym = (real.clone() + real.transpose()) * 0.5;
        sym.symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn hermitian_deviation<S: Scalar>(m: &LevelMatrix<S>) -> f64 {
    let dense = m.to_dense();
    let n = m.dim();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let a = dense.get(i, j).approx();
            let b = dense.get(j, i).approx().conj();
            worst = worst.max((a - b).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{expand_combination, AlgebraElement};
    use crate::group::{catalog, GroupElement};
    use num_complex::Complex64;

    fn markov(group: &str, gens: &[&str], level: u32) -> LevelMatrix<f64> {
        let aut = catalog::load(group).unwrap();
        let mut sum = AlgebraElement::<f64>::zero(aut.clone());
        for g in gens {
            let e = GroupElement::generator_by_name(&aut, g).unwrap();
            sum.add_term(e.word().to_vec(), &1.0);
        }
        expand_combination(&sum, level).unwrap()
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[3,1],[1,3]] has eigenvalues 2 and 4.
        let m = markov("grigorchuk", &["a", "b", "c", "d"], 1);
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(eig.len(), 2);
        assert!((eig[0] - 2.0).abs() < 1e-12 && (eig[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_matrix_returns_its_diagonal_sorted() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mut m = LevelMatrix::<f64>::zeros(aut.alphabet_size(), 1).unwrap();
        m.set(0, 0, 5.0);
        m.set(1, 1, -3.0);
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(eig, vec![-3.0, 5.0]);
    }

    #[test]
    fn level_two_spectrum_matches_the_characteristic_polynomial() {
        // The 4x4 level-2 expansion of a+b+c+d has characteristic
        // polynomial (s-4)(s-2)(s^2-2s-4): roots 4, 2, 1±sqrt(5).
        let m = markov("grigorchuk", &["a", "b", "c", "d"], 2);
        let eig = hermitian_eigenvalues(&m).unwrap();
        let expected = [
            1.0 - 5.0_f64.sqrt(),
            2.0,
            1.0 + 5.0_f64.sqrt(),
            4.0,
        ];
        let mut expected = expected.to_vec();
        expected.sort_by(f64::total_cmp);
        for (g, e) in eig.iter().zip(expected.iter()) {
            assert!((g - e).abs() < 1e-10, "{eig:?} vs {expected:?}");
        }
    }

    #[test]
    fn residuals_are_backward_stable() {
        let m = markov("hanoi", &["a", "b", "c"], 3);
        let eig = hermitian_eigenvalues(&m).unwrap();
        let dense = m.to_dense();
        let n = m.dim();
        let nm = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| *dense.get(i, j));
        let sym = nm.clone().symmetric_eigen();
        // Spot-check: each solver eigenpair satisfies ||Mv - s v|| small.
        for k in 0..n {
            let v = sym.eigenvectors.column(k);
            let s = sym.eigenvalues[k];
            let r = (&nm * v) - v * s;
            assert!(r.norm() <= 1e-9 * 3.0_f64 * (n as f64));
        }
        assert_eq!(eig.len(), n);
    }

    #[test]
    fn complex_hermitian_matrices_use_the_real_embedding() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mut m = LevelMatrix::<Complex64>::zeros(aut.alphabet_size(), 1).unwrap();
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(-1.0, 0.0));
        m.set(0, 1, Complex64::new(0.0, 2.0));
        m.set(1, 0, Complex64::new(0.0, -2.0));
        // Eigenvalues of [[1, 2i], [-2i, -1]] are ±sqrt(5).
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(eig.len(), 2);
        assert!((eig[0] + 5.0_f64.sqrt()).abs() < 1e-12);
        assert!((eig[1] - 5.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let aut = catalog::load("grigorchuk").unwrap();
        let mut m = LevelMatrix::<f64>::zeros(aut.alphabet_size(), 1).unwrap();
        m.set(0, 1, 1.0);
        match hermitian_eigenvalues(&m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }
}
