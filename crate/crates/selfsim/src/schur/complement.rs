//! Block eliminations: Schur complements, the block-inverse formula built
//! from them, and compositions of complements along letter paths.
//!
//! Writing a square matrix in the two-block form determined by an
//! [`IndexPartition`] (kept block A, couplings B and C, eliminated block D),
//! the complement of the eliminated block is `A − B·D⁻¹·C`.  Eliminations
//! here are numerically dense: D is LU-factored with partial pivoting and
//! the solve is refined, so the engine works unchanged over exact rationals,
//! reals, and complex scalars.

use super::partition::{BlockSplit, IndexPartition};
use crate::algebra::{lu_factor, DenseMatrix, LevelMatrix, Scalar};
use crate::error::{Error, Result};
use crate::group::Letter;

/// Pivot threshold as a fraction of the matrix max-norm: a pivot below
/// `PIVOT_RATIO · ‖M‖_max` counts as singular.
pub const PIVOT_RATIO: f64 = 1e-10;

/// Refinement rounds applied to every eliminated-block solve.
const REFINEMENT_ROUNDS: usize = 2;

/// The scale-normalized pivot threshold for a dense matrix.
pub fn default_threshold<S: Scalar>(m: &DenseMatrix<S>) -> f64 {
    PIVOT_RATIO * m.max_norm()
}

/// Schur complement of the eliminated block: `A − B·D⁻¹·C` on the kept
/// indices, in the positional order of the kept list.
pub fn schur_complement_dense<S: Scalar>(
    m: &DenseMatrix<S>,
    part: &IndexPartition,
    threshold: f64,
) -> Result<DenseMatrix<S>> {
    check_shape(m, part)?;
    let a = m.submatrix(part.keep(), part.keep());
    let b = m.submatrix(part.keep(), part.dropped());
    let c = m.submatrix(part.dropped(), part.keep());
    let d = m.submatrix(part.dropped(), part.dropped());
    let x = solve_block(&d, &c, threshold)?;
    Ok(a.sub(&b.matmul(&x)))
}

/// Full inverse assembled from the two-block formula
/// `M⁻¹ = [[S⁻¹, −S⁻¹BD⁻¹], [−D⁻¹CS⁻¹, D⁻¹ + D⁻¹CS⁻¹BD⁻¹]]`
/// with `S = A − B·D⁻¹·C`, scattered back to the original index positions.
pub fn frobenius_inverse_dense<S: Scalar>(
    m: &DenseMatrix<S>,
    part: &IndexPartition,
    threshold: f64,
) -> Result<DenseMatrix<S>> {
    check_shape(m, part)?;
    let a = m.submatrix(part.keep(), part.keep());
    let b = m.submatrix(part.keep(), part.dropped());
    let c = m.submatrix(part.dropped(), part.keep());
    let d = m.submatrix(part.dropped(), part.dropped());

    let d_inv = solve_block(&d, &DenseMatrix::identity(d.rows()), threshold)?;
    let x = d_inv.matmul(&c); // D⁻¹C
    let p = b.matmul(&d_inv); // BD⁻¹
    let schur = a.sub(&b.matmul(&x));
    let s_inv = solve_block(&schur, &DenseMatrix::identity(schur.rows()), threshold)?;

    let top_right = s_inv.matmul(&p).scale(&S::one().neg());
    let bottom_left = x.matmul(&s_inv).scale(&S::one().neg());
    let bottom_right = d_inv.sub(&x.matmul(&top_right));

    let n = part.total();
    let mut out = DenseMatrix::zeros(n, n);
    scatter(&mut out, &s_inv, part.keep(), part.keep());
    scatter(&mut out, &top_right, part.keep(), part.dropped());
    scatter(&mut out, &bottom_left, part.dropped(), part.keep());
    scatter(&mut out, &bottom_right, part.dropped(), part.dropped());
    Ok(out)
}

/// Schur complement of a level matrix under a structural split, read back
/// as a matrix one level down (the scale-normalized pivot threshold is
/// applied to the eliminated block).
pub fn schur_complement<S: Scalar>(
    m: &LevelMatrix<S>,
    split: &BlockSplit,
) -> Result<LevelMatrix<S>> {
    let dense = m.to_dense();
    schur_complement_with(m, split, default_threshold(&dense))
}

/// As [`schur_complement`], with an explicit pivot threshold.
pub fn schur_complement_with<S: Scalar>(
    m: &LevelMatrix<S>,
    split: &BlockSplit,
    threshold: f64,
) -> Result<LevelMatrix<S>> {
    let part = IndexPartition::for_level(split, m.alphabet(), m.level())?;
    let small = schur_complement_dense(&m.to_dense(), &part, threshold)?;
    LevelMatrix::from_dense(m.alphabet(), m.level() - 1, &small)
}

/// Block-formula inverse of a level matrix (same level back).
pub fn frobenius_inverse<S: Scalar>(
    m: &LevelMatrix<S>,
    split: &BlockSplit,
) -> Result<LevelMatrix<S>> {
    let part = IndexPartition::for_level(split, m.alphabet(), m.level())?;
    let dense = m.to_dense();
    let inv = frobenius_inverse_dense(&dense, &part, default_threshold(&dense))?;
    LevelMatrix::from_dense(m.alphabet(), m.level(), &inv)
}

/// Composition of first-letter complements along a letter path
/// `i₁ i₂ … i_k`: the result lives k levels down and equals
/// `((T_{i_k}·…·T_{i₁})* M⁻¹ (T_{i_k}·…·T_{i₁}))⁻¹` when `M` is invertible,
/// where `T_i` embeds a level space onto the subtree with first letter `i`.
/// Since the isometry product prepends letters right-to-left, the sequential
/// elimination consumes the *last* path letter first.
pub fn compose_schur<S: Scalar>(m: &LevelMatrix<S>, path: &[Letter]) -> Result<LevelMatrix<S>> {
    if path.is_empty() {
        return Ok(m.clone());
    }
    let mut current = m.clone();
    for j in (0..path.len()).rev() {
        current = schur_complement(&current, &BlockSplit::FirstLetter(path[j])).map_err(
            |source| {
                Error::Invalid(format!(
                    "Schur composition failed at path prefix {:?} (eliminating around first \
                     letter {} at level {}): {source}",
                    &path[..=j],
                    path[j],
                    current.level(),
                ))
            },
        )?;
    }
    Ok(current)
}

fn check_shape<S: Scalar>(m: &DenseMatrix<S>, part: &IndexPartition) -> Result<()> {
    if m.rows() != m.cols() {
        return Err(Error::Mismatch(format!(
            "block elimination needs a square matrix, got {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() != part.total() {
        return Err(Error::Mismatch(format!(
            "partition covers {} indices but the matrix has {}",
            part.total(),
            m.rows()
        )));
    }
    Ok(())
}

/// Factor once, solve with refinement.
fn solve_block<S: Scalar>(
    d: &DenseMatrix<S>,
    rhs: &DenseMatrix<S>,
    threshold: f64,
) -> Result<DenseMatrix<S>> {
    let factors = lu_factor(d, threshold)?;
    let mut x = factors.solve(rhs);
    if !S::EXACT {
        for _ in 0..REFINEMENT_ROUNDS {
            let residual = rhs.sub(&d.matmul(&x));
            if residual.max_norm() == 0.0 {
                break;
            }
            x = x.add(&factors.solve(&residual));
        }
    }
    Ok(x)
}

fn scatter<S: Scalar>(
    out: &mut DenseMatrix<S>,
    block: &DenseMatrix<S>,
    rows: &[usize],
    cols: &[usize],
) {
    for (bi, &i) in rows.iter().enumerate() {
        for (bj, &j) in cols.iter().enumerate() {
            let v = block.get(bi, bj).clone();
            if !v.is_zero() {
                out.set(i, j, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{determinant, inverse, smallest_singular_value};
    use crate::rng;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn random_matrix(n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = rng::single(seed);
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rng.gen_range(-1.0..1.0));
            }
            // Diagonal dominance keeps every eliminated block invertible.
            let boost = n as f64 + 1.0;
            m.set(i, i, m.get(i, i) + boost);
        }
        m
    }

    #[test]
    fn scalar_two_by_two() {
        let m = DenseMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let part = IndexPartition::leading(2, 1).unwrap();
        let s = schur_complement_dense(&m, &part, 1e-12).unwrap();
        assert!((s.get(0, 0) - (1.0 - 2.0 * 3.0 / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn block_diagonal_complement_is_the_kept_block() {
        let mut m = DenseMatrix::<f64>::zeros(5, 5);
        for i in 0..5 {
            m.set(i, i, (i + 1) as f64);
        }
        m.set(0, 1, 7.0);
        m.set(1, 0, -3.0);
        let part = IndexPartition::leading(5, 2).unwrap();
        let s = schur_complement_dense(&m, &part, 1e-12).unwrap();
        let a = m.submatrix(part.keep(), part.keep());
        assert!(s.max_diff(&a) == 0.0);
    }

    #[test]
    fn exact_complement_over_rationals() {
        let m = DenseMatrix::from_rows(vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 2)],
            vec![q(0, 1), q(1, 2), q(2, 1)],
        ]);
        let part = IndexPartition::leading(3, 1).unwrap();
        let s = schur_complement_dense(&m, &part, 0.0).unwrap();
        // D = [[3, 1/2], [1/2, 2]], det = 23/4; complement = 2 - [1 0] D⁻¹ [1 0]ᵀ
        // = 2 - (2)/(23/4) = 2 - 8/23 = 38/23.
        assert_eq!(s.get(0, 0), &q(38, 23));
    }

    #[test]
    fn two_path_agreement_with_the_embedded_inverse() {
        // (T* M⁻¹ T)⁻¹ with T the coordinate embedding of the kept set.
        for seed in 0..5u64 {
            let m = random_matrix(8, 0xaa00 + seed);
            let part = IndexPartition::leading(8, 3).unwrap();
            let s = schur_complement_dense(&m, &part, 1e-12).unwrap();
            let m_inv = inverse(&m, 1e-12).unwrap();
            let corner = m_inv.submatrix(part.keep(), part.keep());
            let via_isometry = inverse(&corner, 1e-12).unwrap();
            assert!(s.max_diff(&via_isometry) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn determinant_factorizes_through_the_complement() {
        for seed in 0..5u64 {
            let m = random_matrix(6, 0xbb00 + seed);
            let part = IndexPartition::leading(6, 2).unwrap();
            let s = schur_complement_dense(&m, &part, 1e-12).unwrap();
            let d = m.submatrix(part.dropped(), part.dropped());
            let det_m: f64 = determinant(&m);
            let det_split = determinant(&s) * determinant(&d);
            assert!(
                (det_m - det_split).abs() <= 1e-10 * det_m.abs(),
                "seed {seed}: {det_m} vs {det_split}"
            );
        }
    }

    #[test]
    fn frobenius_inverse_matches_direct_inverse() {
        for seed in 0..5u64 {
            let m = random_matrix(8, 0xcc00 + seed);
            let part = IndexPartition::leading(8, 5).unwrap();
            let via_blocks = frobenius_inverse_dense(&m, &part, 1e-12).unwrap();
            let residual = m.matmul(&via_blocks).sub(&DenseMatrix::identity(8));
            assert!(residual.max_norm() <= 1e-10, "seed {seed}");
            let direct = inverse(&m, 1e-12).unwrap();
            assert!(via_blocks.max_diff(&direct) <= 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn frobenius_inverse_of_identity_and_block_diagonal() {
        let id = DenseMatrix::<f64>::identity(6);
        let part = IndexPartition::leading(6, 2).unwrap();
        let inv = frobenius_inverse_dense(&id, &part, 1e-12).unwrap();
        assert!(inv.max_diff(&id) == 0.0);

        let mut m = DenseMatrix::<f64>::zeros(4, 4);
        m.set(0, 0, 2.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(2, 2, 4.0);
        m.set(3, 3, 0.5);
        let part = IndexPartition::leading(4, 2).unwrap();
        let inv = frobenius_inverse_dense(&m, &part, 1e-12).unwrap();
        // Top block [[2,1],[1,1]]⁻¹ = [[1,-1],[-1,2]]; bottom diag(1/4, 2).
        assert!((inv.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((inv.get(0, 1) + 1.0).abs() < 1e-12);
        assert!((inv.get(1, 1) - 2.0).abs() < 1e-12);
        assert!((inv.get(2, 2) - 0.25).abs() < 1e-12);
        assert!((inv.get(3, 3) - 2.0).abs() < 1e-12);
        assert!((inv.get(2, 3)).abs() == 0.0);
    }

    #[test]
    fn singular_eliminated_block_reports_singular_value() {
        let mut m = DenseMatrix::<f64>::zeros(3, 3);
        m.set(0, 0, 1.0);
        // Eliminated 2×2 block is identically zero.
        let part = IndexPartition::leading(3, 1).unwrap();
        let err = schur_complement_dense(&m, &part, 1e-12).unwrap_err();
        match err {
            Error::SingularBlock { smallest, .. } => assert_eq!(smallest, 0.0),
            other => panic!("expected SingularBlock, got {other}"),
        }
    }

    #[test]
    fn kernel_restriction_lemma() {
        // Build a singular M with a known kernel vector v and invertible
        // eliminated block: subtract the rank-one correction (Mv)uᵀ/(uᵀv).
        let base = random_matrix(7, 0xdd01);
        let mut rng = rng::single(0xdd02);
        let v: Vec<f64> = (0..7).map(|_| rng.gen_range(0.5..1.5)).collect();
        let w: Vec<f64> = (0..7)
            .map(|i| (0..7).map(|j| base.get(i, j) * v[j]).sum())
            .collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let mut m = base.clone();
        for i in 0..7 {
            for j in 0..7 {
                m.set(i, j, m.get(i, j) - w[i] * v[j] / vv);
            }
        }
        let part = IndexPartition::leading(7, 3).unwrap();
        let s = schur_complement_dense(&m, &part, 1e-12).unwrap();

        // The kept restriction of the kernel vector lies in ker S.
        let x1: Vec<f64> = part.keep().iter().map(|&i| v[i]).collect();
        let image: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| s.get(i, j) * x1[j]).sum())
            .collect();
        let norm = image.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        assert!(norm < 1e-9, "S·x₁ = {image:?}");

        // And the complement itself is singular (kernel transported down).
        assert!(smallest_singular_value(&s) < 1e-9);
    }

    #[test]
    fn complement_is_homogeneous() {
        let m = random_matrix(6, 0xee01);
        let part = IndexPartition::leading(6, 2).unwrap();
        let s = schur_complement_dense(&m, &part, 1e-12).unwrap();
        let t = -2.75;
        let st = schur_complement_dense(&m.scale(&t), &part, 1e-12).unwrap();
        assert!(st.max_diff(&s.scale(&t)) < 1e-10);
    }
}
