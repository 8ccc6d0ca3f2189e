//! Level matrices: the image of group-algebra elements on the finite level
//! spaces of the rooted tree.
//!
//! The level-n space has one basis vector per word of length n, indexed
//! root-major: word `v1 v2 … vn` gets index `v1·d^(n-1) + v2·d^(n-2) + … + vn`.
//! With that order, the d² blocks of a level-(n+1) matrix obtained from the
//! self-similar structure are contiguous: block `(y, x)` occupies rows
//! `y·d^n..(y+1)·d^n` and columns `x·d^n..(x+1)·d^n`.
//!
//! Storage is sparse (sorted coordinate map), which suits the permutation
//! matrices and short combinations this library manipulates; conversion to
//! dense is explicit.

use super::dense::DenseMatrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::group::Letter;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Largest level dimension the library will materialize.
pub const MAX_LEVEL_DIM: usize = 4096;

/// Sparse matrix acting on one tree level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelMatrix<S: Scalar> {
    alphabet: u8,
    level: u32,
    dim: usize,
    entries: BTreeMap<(u32, u32), S>,
}

/// `alphabet^level`, guarded by the dimension budget.
pub fn level_dim(alphabet: u8, level: u32) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..level {
        dim = dim
            .checked_mul(alphabet as usize)
            .filter(|&d| d <= MAX_LEVEL_DIM)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "level {level} over alphabet {alphabet} exceeds max dimension {MAX_LEVEL_DIM}"
                ))
            })?;
    }
    Ok(dim)
}

impl<S: Scalar> LevelMatrix<S> {
    /// All-zero matrix for the given level.
    pub fn zeros(alphabet: u8, level: u32) -> Result<Self> {
        let dim = level_dim(alphabet, level)?;
        Ok(Self {
            alphabet,
            level,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Identity on the level space.
    pub fn identity(alphabet: u8, level: u32) -> Result<Self> {
        let mut m = Self::zeros(alphabet, level)?;
        for i in 0..m.dim {
            m.entries.insert((i as u32, i as u32), S::one());
        }
        Ok(m)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Root-major index of a level word.
    pub fn index_of_word(&self, v: &[Letter]) -> Result<usize> {
        if v.len() != self.level as usize {
            return Err(Error::Mismatch(format!(
                "word length {} does not match level {}",
                v.len(),
                self.level
            )));
        }
        let mut idx = 0usize;
        for &x in v {
            if x >= self.alphabet {
                return Err(Error::BadLetter {
                    letter: x,
                    alphabet: self.alphabet,
                });
            }
            idx = idx * self.alphabet as usize + x as usize;
        }
        Ok(idx)
    }

    /// Level word behind a root-major index.
    pub fn word_of_index(&self, mut idx: usize) -> Vec<Letter> {
        let mut word = vec![0u8; self.level as usize];
        for slot in word.iter_mut().rev() {
            *slot = (idx % self.alphabet as usize) as u8;
            idx /= self.alphabet as usize;
        }
        word
    }

    /// Entry at (row, col); zero when absent.
    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries
            .get(&(row as u32, col as u32))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Set an entry (removing it when zero).
    pub fn set(&mut self, row: usize, col: usize, value: S) {
        assert!(row < self.dim && col < self.dim, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row as u32, col as u32));
        } else {
            self.entries.insert((row as u32, col as u32), value);
        }
    }

    /// Add `value` into an entry.
    pub fn add_entry(&mut self, row: usize, col: usize, value: &S) {
        if value.is_zero() {
            return;
        }
        assert!(row < self.dim && col < self.dim, "index out of range");
        let key = (row as u32, col as u32);
        let updated = match self.entries.get(&key) {
            Some(old) => old.add(value),
            None => value.clone(),
        };
        if updated.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, updated);
        }
    }

    /// Iterate stored entries row-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (r as usize, c as usize, v))
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.alphabet != rhs.alphabet || self.level != rhs.level {
            return Err(Error::Mismatch(format!(
                "level matrices of shape (d={}, n={}) vs (d={}, n={})",
                self.alphabet, self.level, rhs.alphabet, rhs.level
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_entry(r, c, v);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_entry(r, c, &v.neg());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self {
                alphabet: self.alphabet,
                level: self.level,
                dim: self.dim,
                entries: BTreeMap::new(),
            };
        }
        Self {
            alphabet: self.alphabet,
            level: self.level,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&k2, v)| (k2, v.mul(k)))
                .collect(),
        }
    }

    /// Sparse matrix product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        // Group the right factor by row for cache-friendly lookups.
        let mut rows: BTreeMap<u32, Vec<(u32, &S)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            rows.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.alphabet, self.level)?;
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rows.get(&k) {
                for &(j, b) in row {
                    out.add_entry(i as usize, j as usize, &a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self {
            alphabet: self.alphabet,
            level: self.level,
            dim: self.dim,
            entries: BTreeMap::new(),
        };
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.conj());
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.magnitude())
            .fold(0.0, f64::max)
    }

    /// Entrywise max-norm of the difference.
    pub fn max_diff(&self, rhs: &Self) -> Result<f64> {
        Ok(self.sub(rhs)?.max_norm())
    }

    /// True when `‖M - M*‖_max ≤ tolerance`.
    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.sub(&self.adjoint())
            .map(|d| d.max_norm() <= tolerance)
            .unwrap_or(false)
    }

    /// Extract the `(y, x)` block as a matrix one level down.
    pub fn block(&self, y: Letter, x: Letter) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::Mismatch("level-0 matrix has no blocks".into()));
        }
        let sub_dim = self.dim / self.alphabet as usize;
        let mut out = Self::zeros(self.alphabet, self.level - 1)?;
        let row0 = y as usize * sub_dim;
        let col0 = x as usize * sub_dim;
        for (&(r, c), v) in &self.entries {
            let (r, c) = (r as usize, c as usize);
            if r >= row0 && r < row0 + sub_dim && c >= col0 && c < col0 + sub_dim {
                out.entries
                    .insert(((r - row0) as u32, (c - col0) as u32), v.clone());
            }
        }
        Ok(out)
    }

    /// Assemble one level up from a d×d grid of equal-level blocks
    /// (`blocks[y][x]` goes to block row y, block column x).
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Result<Self> {
        let d = blocks.len();
        if d == 0 || blocks.iter().any(|row| row.len() != d) {
            return Err(Error::Mismatch("block grid must be d×d".into()));
        }
        let proto = &blocks[0][0];
        if d != proto.alphabet as usize {
            return Err(Error::Mismatch(format!(
                "block grid is {d}×{d} but alphabet is {}",
                proto.alphabet
            )));
        }
        let sub_dim = proto.dim;
        let mut out = Self::zeros(proto.alphabet, proto.level + 1)?;
        for (y, row) in blocks.iter().enumerate() {
            for (x, block) in row.iter().enumerate() {
                proto.check_same_shape(block)?;
                for (r, c, v) in block.iter() {
                    out.set(y * sub_dim + r, x * sub_dim + c, v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Dense copy.
    pub fn to_dense(&self) -> DenseMatrix<S> {
        let mut out = DenseMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.iter() {
            out.set(r, c, v.clone());
        }
        out
    }

    /// Rebuild from a dense matrix of matching dimension.
    pub fn from_dense(alphabet: u8, level: u32, dense: &DenseMatrix<S>) -> Result<Self> {
        let mut out = Self::zeros(alphabet, level)?;
        if dense.rows() != out.dim || dense.cols() != out.dim {
            return Err(Error::Mismatch(format!(
                "dense {}×{} does not fit level {} (dim {})",
                dense.rows(),
                dense.cols(),
                level,
                out.dim
            )));
        }
        for r in 0..out.dim {
            for c in 0..out.dim {
                let v = dense.get(r, c);
                if !v.is_zero() {
                    out.entries.insert((r as u32, c as u32), v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Export in the text interchange format: a header comment
    /// `# level=<n> dim=<d^n>` followed by one `row col re im` line per
    /// stored entry, row-major.  Floats use shortest round-trip formatting.
    pub fn export_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# level={} dim={}", self.level, self.dim).unwrap();
        for (r, c, v) in self.iter() {
            let z = v.approx();
            writeln!(out, "{} {} {} {}", r, c, z.re, z.im).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn indexing_is_root_major() {
        let m = LevelMatrix::<BigRational>::zeros(2, 3).unwrap();
        assert_eq!(m.index_of_word(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(m.index_of_word(&[0, 0, 1]).unwrap(), 1);
        assert_eq!(m.index_of_word(&[1, 0, 0]).unwrap(), 4);
        assert_eq!(m.word_of_index(5), vec![1, 0, 1]);
        for idx in 0..8 {
            assert_eq!(m.index_of_word(&m.word_of_index(idx)).unwrap(), idx);
        }
    }

    #[test]
    fn block_round_trip() {
        let mut m = LevelMatrix::<BigRational>::zeros(2, 2).unwrap();
        m.set(0, 1, q(3));
        m.set(2, 3, q(5));
        m.set(3, 0, q(7));
        let blocks: Vec<Vec<_>> = (0..2)
            .map(|y| (0..2).map(|x| m.block(y, x).unwrap()).collect())
            .collect();
        let back = LevelMatrix::from_blocks(&blocks).unwrap();
        assert_eq!(m, back);
        assert_eq!(blocks[1][1].get(0, 1), q(5), "entry (2,3) sits in block (1,1)");
    }

    #[test]
    fn matmul_matches_dense() {
        let mut a = LevelMatrix::<BigRational>::zeros(2, 2).unwrap();
        let mut b = LevelMatrix::<BigRational>::zeros(2, 2).unwrap();
        a.set(0, 1, q(2));
        a.set(1, 2, q(-1));
        a.set(3, 3, q(4));
        b.set(1, 0, q(3));
        b.set(2, 3, q(5));
        b.set(3, 3, q(1));
        let sparse = a.matmul(&b).unwrap();
        let dense = a.to_dense().matmul(&b.to_dense());
        assert_eq!(sparse.to_dense(), dense);
    }

    #[test]
    fn export_format_is_stable() {
        let mut m = LevelMatrix::<BigRational>::zeros(2, 1).unwrap();
        m.set(0, 1, q(1));
        m.set(1, 0, -q(2));
        let text = m.export_string();
        assert_eq!(text, "# level=1 dim=2\n0 1 1 0\n1 0 -2 0\n");
    }

    #[test]
    fn dimension_budget_is_enforced() {
        assert!(LevelMatrix::<BigRational>::zeros(2, 12).is_ok(), "4096 is allowed");
        assert!(LevelMatrix::<BigRational>::zeros(2, 13).is_err());
        assert!(LevelMatrix::<BigRational>::zeros(3, 8).is_err(), "3^8 > 4096");
    }
}
