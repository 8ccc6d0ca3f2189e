//! Small dense matrices over any [`Scalar`], with LU factorization,
//! multi-RHS solves, and determinants.
//!
//! This is the workhorse behind Schur complements: block sizes there are
//! arbitrary (not powers of the alphabet size), and the same elimination
//! code must run both in exact rational arithmetic and in complex floats.

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: &S) {
        let slot = &mut self.data[i * self.cols + j];
        *slot = slot.add(v);
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(k)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    out.add_assign_at(i, j, &prod);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.magnitude())
            .fold(0.0, f64::max)
    }

    /// Entrywise max-norm of the difference.
    pub fn max_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub(b).magnitude())
            .fold(0.0, f64::max)
    }

    /// Extract the submatrix on the given row/column index lists.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Assemble a 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
            for j in 0..b.cols {
                out.set(i, a.cols + j, b.get(i, j).clone());
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                out.set(a.rows + i, j, c.get(i, j).clone());
            }
            for j in 0..d.cols {
                out.set(a.rows + i, a.cols + j, d.get(i, j).clone());
            }
        }
        out
    }
}

/// LU factorization with partial pivoting, shared by solves and determinants.
///
/// For floating scalars a pivot is rejected when its magnitude is at most
/// `threshold`; exact scalars reject only literal zeros.  Reusing one
/// factorization across several solves (and refinement rounds) is the point
/// of exposing the struct.
pub struct Lu<S: Scalar> {
    lu: DenseMatrix<S>,
    perm: Vec<usize>,
    swaps: usize,
    smallest_pivot: f64,
}

/// Factor a square matrix; fails (reporting the smallest singular value)
/// when a pivot falls at or below `threshold`.
pub fn lu_factor<S: Scalar>(m: &DenseMatrix<S>, threshold: f64) -> Result<Lu<S>> {
    assert_eq!(m.rows(), m.cols(), "LU needs a square matrix");
    let n = m.rows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;
    let mut smallest = f64::INFINITY;

    for col in 0..n {
        // Select the largest-magnitude pivot at or below the diagonal.
        let mut best = col;
        let mut best_mag = lu.get(col, col).magnitude();
        for row in col + 1..n {
            let mag = lu.get(row, col).magnitude();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        let singular = if S::EXACT {
            lu.get(best, col).is_zero()
        } else {
            best_mag <= threshold
        };
        if singular {
            // A vanished pivot only estimates the conditioning; report the
            // actual smallest singular value (floating approximation).
            return Err(Error::SingularBlock {
                smallest: smallest_singular_value(m),
                threshold,
            });
        }
        smallest = smallest.min(best_mag);
        if best != col {
            for j in 0..n {
                let hi = lu.get(col, j).clone();
                let lo = lu.get(best, j).clone();
                lu.set(col, j, lo);
                lu.set(best, j, hi);
            }
            perm.swap(col, best);
            swaps += 1;
        }
        let pivot = lu.get(col, col).clone();
        for row in col + 1..n {
            let factor = match lu.get(row, col).div(&pivot) {
                Some(f) => f,
                None => unreachable!("pivot checked nonzero"),
            };
            lu.set(row, col, factor.clone());
            if factor.is_zero() {
                continue;
            }
            for j in col + 1..n {
                let delta = factor.mul(lu.get(col, j));
                let val = lu.get(row, j).sub(&delta);
                lu.set(row, j, val);
            }
        }
    }

    Ok(Lu {
        lu,
        perm,
        swaps,
        smallest_pivot: if smallest.is_finite() { smallest } else { 0.0 },
    })
}

impl<S: Scalar> Lu<S> {
    /// Smallest pivot magnitude met during factorization.
    pub fn smallest_pivot(&self) -> f64 {
        self.smallest_pivot
    }

    /// Solve `A X = RHS` using the stored factors.
    pub fn solve(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        let n = self.lu.rows();
        assert_eq!(rhs.rows(), n);
        let k = rhs.cols();
        // Apply the row permutation to the right-hand side.
        let mut x = DenseMatrix::zeros(n, k);
        for i in 0..n {
            for j in 0..k {
                x.set(i, j, rhs.get(self.perm[i], j).clone());
            }
        }
        // Forward substitution (unit lower triangle).
        for i in 0..n {
            for pivot_col in 0..i {
                let factor = self.lu.get(i, pivot_col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let delta = factor.mul(x.get(pivot_col, j));
                    let val = x.get(i, j).sub(&delta);
                    x.set(i, j, val);
                }
            }
        }
        // Back substitution.
        for i in (0..n).rev() {
            for upper in i + 1..n {
                let factor = self.lu.get(i, upper).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let delta = factor.mul(x.get(upper, j));
                    let val = x.get(i, j).sub(&delta);
                    x.set(i, j, val);
                }
            }
            let pivot = self.lu.get(i, i).clone();
            for j in 0..k {
                let val = x
                    .get(i, j)
                    .div(&pivot)
                    .expect("pivot was checked nonzero during factorization");
                x.set(i, j, val);
            }
        }
        x
    }

    /// Determinant from the stored factors.
    pub fn determinant(&self) -> S {
        let n = self.lu.rows();
        let mut det = S::one();
        for i in 0..n {
            det = det.mul(self.lu.get(i, i));
        }
        if self.swaps % 2 == 1 {
            det = det.neg();
        }
        det
    }
}

/// Solve `A X = B` for `X` (multi-column right-hand side).
pub fn solve<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &DenseMatrix<S>,
    threshold: f64,
) -> Result<DenseMatrix<S>> {
    Ok(lu_factor(a, threshold)?.solve(b))
}

/// Solve `A X = B` with a few rounds of iterative refinement in working
/// precision (a no-op for exact scalars).  Refinement squeezes the forward
/// error well below the bare-LU level when entries span many magnitudes,
/// which the renormalization checks near their admissibility margins do.
pub fn solve_refined<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &DenseMatrix<S>,
    threshold: f64,
    rounds: usize,
) -> Result<DenseMatrix<S>> {
    let factors = lu_factor(a, threshold)?;
    let mut x = factors.solve(b);
    if !S::EXACT {
        for _ in 0..rounds {
            let residual = b.sub(&a.matmul(&x));
            if residual.max_norm() == 0.0 {
                break;
            }
            x = x.add(&factors.solve(&residual));
        }
    }
    Ok(x)
}

/// Matrix inverse via LU.
pub fn inverse<S: Scalar>(a: &DenseMatrix<S>, threshold: f64) -> Result<DenseMatrix<S>> {
    solve(a, &DenseMatrix::identity(a.rows()), threshold)
}

/// Determinant via LU; returns zero for a singular matrix.
pub fn determinant<S: Scalar>(a: &DenseMatrix<S>) -> S {
    match lu_factor(a, 0.0) {
        Ok(lu) => lu.determinant(),
        Err(_) => S::zero(),
    }
}

/// Smallest pivot magnitude seen while factoring (a cheap conditioning probe).
pub fn smallest_pivot<S: Scalar>(a: &DenseMatrix<S>, threshold: f64) -> Result<f64> {
    Ok(lu_factor(a, threshold)?.smallest_pivot)
}

/// Smallest singular value, computed in floating point on the `approx`
/// image of the entries (exact scalars are rounded first).
pub fn smallest_singular_value<S: Scalar>(a: &DenseMatrix<S>) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let mat = nalgebra::DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j).approx());
    mat.svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_solve_round_trips() {
        let a = DenseMatrix::from_rows(vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 2)],
            vec![q(0, 1), q(1, 2), q(1, 1)],
        ]);
        let b = DenseMatrix::from_rows(vec![vec![q(1, 1)], vec![q(0, 1)], vec![q(2, 1)]]);
        let x = solve(&a, &b, 0.0).unwrap();
        assert_eq!(a.matmul(&x), b, "A·x must reproduce b exactly");
    }

    #[test]
    fn exact_determinant() {
        let a = DenseMatrix::from_rows(vec![
            vec![q(0, 1), q(1, 1)],
            vec![q(1, 1), q(0, 1)],
        ]);
        assert_eq!(determinant(&a), q(-1, 1), "swap matrix has determinant -1");
        let b = DenseMatrix::from_rows(vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(2, 1), q(4, 1)],
        ]);
        assert!(Scalar::is_zero(&determinant(&b)));
    }

    #[test]
    fn singular_exact_matrix_errors() {
        let a = DenseMatrix::from_rows(vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(2, 1), q(4, 1)],
        ]);
        match solve(&a, &DenseMatrix::identity(2), 0.0) {
            Err(Error::SingularBlock { .. }) => {}
            other => panic!("expected SingularBlock, got {other:?}"),
        }
    }

    #[test]
    fn float_inverse_matches_identity() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let a = DenseMatrix::from_rows(vec![
            vec![c(4.0), c(1.0), Complex64::new(0.0, 1.0)],
            vec![c(1.0), c(3.0), c(0.5)],
            vec![Complex64::new(0.0, -1.0), c(0.5), c(5.0)],
        ]);
        let inv = inverse(&a, 1e-14).unwrap();
        let err = a.matmul(&inv).max_diff(&DenseMatrix::identity(3));
        assert!(err < 1e-12, "residual {err}");
    }

    #[test]
    fn near_singular_float_is_rejected() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let a = DenseMatrix::from_rows(vec![
            vec![c(1.0), c(1.0)],
            vec![c(1.0), c(1.0 + 1e-13)],
        ]);
        // Eliminating leaves a pivot of ~1e-13, below a 1e-10 threshold.
        assert!(matches!(
            solve(&a, &DenseMatrix::identity(2), 1e-10),
            Err(Error::SingularBlock { .. })
        ));
    }

    #[test]
    fn blocks_and_submatrices_round_trip() {
        let a = DenseMatrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(4, 1)]]);
        let b = DenseMatrix::from_rows(vec![vec![q(5, 1)], vec![q(6, 1)]]);
        let c = DenseMatrix::from_rows(vec![vec![q(7, 1), q(8, 1)]]);
        let d = DenseMatrix::from_rows(vec![vec![q(9, 1)]]);
        let m = DenseMatrix::from_blocks(&a, &b, &c, &d);
        assert_eq!(m.submatrix(&[0, 1], &[0, 1]), a);
        assert_eq!(m.submatrix(&[0, 1], &[2]), b);
        assert_eq!(m.submatrix(&[2], &[0, 1]), c);
        assert_eq!(m.submatrix(&[2], &[2]), d);
    }
}
