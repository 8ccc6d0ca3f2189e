//! Index partitions: which coordinates a block elimination keeps.
//!
//! A Schur complement splits the index set of a square matrix into a kept
//! part and an eliminated part.  For level matrices the split is described
//! structurally by a [`BlockSplit`] and materialized here into explicit
//! sorted index lists.  The kept list is always sorted ascending, and for
//! the structural splits its positional order coincides with the root-major
//! order of the one-level-smaller space, so the complement can be re-read
//! as a level matrix without any extra permutation.

use crate::algebra::level_dim;
use crate::error::{Error, Result};
use crate::group::Letter;

/// Structural description of the kept block of a level matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSplit {
    /// Keep the words whose first letter equals the given letter — the
    /// classical block indexed by one subtree.  Needs level ≥ 1.
    FirstLetter(Letter),
    /// Keep the words whose first two letters agree.  This is the split
    /// used by d×d operator-matrix pencils stored one level up (the outer
    /// matrix index doubles as the first letter): the kept coordinates are
    /// the (outer index, word) pairs whose word starts with the outer
    /// index.  Needs level ≥ 2.
    LetterMatch,
}

impl BlockSplit {
    /// Human-readable label used in reports.
    pub fn label(&self) -> String {
        match self {
            BlockSplit::FirstLetter(i) => format!("first-letter {i}"),
            BlockSplit::LetterMatch => "letter-match".to_string(),
        }
    }
}

/// Explicit kept/eliminated index lists over `0..total`.
#[derive(Debug, Clone)]
pub struct IndexPartition {
    label: String,
    total: usize,
    keep: Vec<usize>,
    drop: Vec<usize>,
}

impl IndexPartition {
    /// Build from an explicit kept set (must be sorted, strictly increasing,
    /// within range, and a proper nonempty subset).
    pub fn from_keep(total: usize, keep: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if keep.is_empty() || keep.len() >= total {
            return Err(Error::Mismatch(format!(
                "kept set must be a proper nonempty subset: {} of {} indices kept",
                keep.len(),
                total
            )));
        }
        let strictly_increasing = keep.windows(2).all(|w| w[0] < w[1]);
        if !strictly_increasing || *keep.last().unwrap() >= total {
            return Err(Error::Mismatch(
                "kept indices must be strictly increasing and within range".into(),
            ));
        }
        let mut drop = Vec::with_capacity(total - keep.len());
        let mut it = keep.iter().copied().peekable();
        for idx in 0..total {
            if it.peek() == Some(&idx) {
                it.next();
            } else {
                drop.push(idx);
            }
        }
        Ok(Self {
            label: label.into(),
            total,
            keep,
            drop,
        })
    }

    /// Keep the first `head` indices — the generic two-block split used by
    /// plain dense-matrix identities.
    pub fn leading(total: usize, head: usize) -> Result<Self> {
        Self::from_keep(total, (0..head).collect(), format!("leading {head}"))
    }

    /// Materialize a structural split for a level matrix of the given
    /// alphabet and level.
    pub fn for_level(split: &BlockSplit, alphabet: u8, level: u32) -> Result<Self> {
        let d = alphabet as usize;
        let total = level_dim(alphabet, level)?;
        match *split {
            BlockSplit::FirstLetter(letter) => {
                if level == 0 {
                    return Err(Error::Mismatch(
                        "first-letter split needs a level ≥ 1 matrix".into(),
                    ));
                }
                if letter >= alphabet {
                    return Err(Error::BadLetter { letter, alphabet });
                }
                let sub = total / d;
                let start = letter as usize * sub;
                Self::from_keep(total, (start..start + sub).collect(), split.label())
            }
            BlockSplit::LetterMatch => {
                if level < 2 {
                    return Err(Error::Mismatch(
                        "letter-match split needs a level ≥ 2 matrix".into(),
                    ));
                }
                let sub = total / (d * d);
                let mut keep = Vec::with_capacity(d * sub);
                for i in 0..d {
                    let base = i * d * sub + i * sub;
                    keep.extend(base..base + sub);
                }
                Self::from_keep(total, keep, split.label())
            }
        }
    }

    /// Report label.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Size of the full index set.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Kept indices, sorted ascending.
    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    /// Eliminated indices, sorted ascending.
    pub fn dropped(&self) -> &[usize] {
        &self.drop
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_letter_keeps_a_contiguous_block() {
        let p = IndexPartition::for_level(&BlockSplit::FirstLetter(1), 2, 3).unwrap();
        assert_eq!(p.keep(), &[4, 5, 6, 7]);
        assert_eq!(p.dropped(), &[0, 1, 2, 3]);
        assert_eq!(p.total(), 8);
    }

    #[test]
    fn letter_match_keeps_matching_pairs() {
        // Level-2 words over a 3-letter alphabet: keep 00, 11, 22.
        let p = IndexPartition::for_level(&BlockSplit::LetterMatch, 3, 2).unwrap();
        assert_eq!(p.keep(), &[0, 4, 8]);
        // Level 3: each kept pair carries its whole subtree.
        let p = IndexPartition::for_level(&BlockSplit::LetterMatch, 3, 3).unwrap();
        assert_eq!(p.keep(), &[0, 1, 2, 12, 13, 14, 24, 25, 26]);
    }

    #[test]
    fn bad_splits_are_rejected() {
        assert!(IndexPartition::for_level(&BlockSplit::FirstLetter(2), 2, 3).is_err());
        assert!(IndexPartition::for_level(&BlockSplit::FirstLetter(0), 2, 0).is_err());
        assert!(IndexPartition::for_level(&BlockSplit::LetterMatch, 3, 1).is_err());
        assert!(IndexPartition::from_keep(4, vec![0, 1, 2, 3], "all").is_err());
        assert!(IndexPartition::from_keep(4, vec![2, 1], "unsorted").is_err());
        assert!(IndexPartition::leading(4, 0).is_err());
    }

    #[test]
    fn leading_split_partitions() {
        let p = IndexPartition::leading(5, 2).unwrap();
        assert_eq!(p.keep(), &[0, 1]);
        assert_eq!(p.dropped(), &[2, 3, 4]);
    }
}
