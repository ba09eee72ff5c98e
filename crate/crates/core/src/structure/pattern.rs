use std::fmt::Write as _;
use std::ops::Range;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Structural-zero mask over the strict upper triangle of `R`.
///
/// Entries below the diagonal are implicitly zero; diagonal entries never are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroPattern {
    dim: usize,
    zero: Vec<bool>,
}

impl ZeroPattern {
    /// A fully dense pattern.
    pub fn dense(dim: usize) -> Self {
        Self {
            dim,
            zero: vec![false; dim * dim],
        }
    }

    /// Builds a pattern from 0-based `(i, j)` pairs with `i < j`.
    pub fn from_zeros(dim: usize, zeros: &[(usize, usize)]) -> Result<Self> {
        let mut p = Self::dense(dim);
        for &(i, j) in zeros {
            if i >= j || j >= dim {
                return Err(Error::InvalidPair {
                    i: i + 1,
                    j: j + 1,
                    dim,
                });
            }
            p.set_zero(i, j, true);
        }
        Ok(p)
    }

    /// Parses the ASCII grid produced by [`ZeroPattern::to_ascii`] (header
    /// lines starting with anything other than `0`, `x` or `#` are skipped).
    pub fn from_ascii(text: &str) -> Result<Self> {
        let rows: Vec<Vec<char>> = text
            .lines()
            .map(|l| l.chars().filter(|c| !c.is_whitespace()).collect::<Vec<_>>())
            .filter(|r| !r.is_empty() && r.iter().all(|c| matches!(c, '0' | 'x' | '#')))
            .collect();
        let dim = rows.len();
        let mut p = Self::dense(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "pattern row {} has {} cells, expected {dim}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                if i < j {
                    p.set_zero(i, j, c == '0');
                }
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `true` for structural zeros and for every entry below the diagonal.
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.zero[i * self.dim + j],
            std::cmp::Ordering::Equal => false,
            std::cmp::Ordering::Greater => true,
        }
    }

    pub fn set_zero(&mut self, i: usize, j: usize, zero: bool) {
        assert!(
            i < j && j < self.dim,
            "only strict upper entries are stored"
        );
        self.zero[i * self.dim + j] = zero;
    }

    /// 0-based strict upper zeros in row-major order.
    pub fn zeros(&self) -> Vec<(usize, usize)> {
        (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_zero(i, j))
            .collect()
    }

    pub fn zero_count(&self) -> usize {
        self.zeros().len()
    }

    /// Every zero of `self` is also a zero of `other`.
    pub fn is_subset_of(&self, other: &ZeroPattern) -> bool {
        self.dim == other.dim && self.zeros().iter().all(|&(i, j)| other.is_zero(i, j))
    }

    /// Zeros of `self` that are not zeros of `other`.
    pub fn difference(&self, other: &ZeroPattern) -> Vec<(usize, usize)> {
        self.zeros()
            .into_iter()
            .filter(|&(i, j)| !other.is_zero(i, j))
            .collect()
    }

    pub fn union(&self, other: &ZeroPattern) -> ZeroPattern {
        let mut out = self.clone();
        for (i, j) in other.zeros() {
            out.set_zero(i, j, true);
        }
        out
    }

    /// All entries with row in `rows` and column in `cols` (above the
    /// diagonal) are zero.
    pub fn is_block_zero(&self, rows: Range<usize>, cols: Range<usize>) -> bool {
        rows.into_iter()
            .all(|i| cols.clone().all(|j| i >= j || self.is_zero(i, j)))
    }

    /// Sizes of the finest contiguous partition of `range` under which the
    /// restricted pattern is block diagonal.
    pub fn finest_block_partition(&self, range: Range<usize>) -> Vec<usize> {
        let mut sizes = Vec::new();
        let mut start = range.start;
        for cut in range.start + 1..range.end {
            if self.is_block_zero(range.start..cut, cut..range.end) {
                sizes.push(cut - start);
                start = cut;
            }
        }
        if range.end > start {
            sizes.push(range.end - start);
        }
        sizes
    }

    /// The restricted pattern is block diagonal with the given contiguous
    /// block sizes starting at `offset`.
    pub fn is_block_diagonal(&self, offset: usize, sizes: &[usize]) -> bool {
        let mut start = offset;
        let end = offset + sizes.iter().sum::<usize>();
        for &s in sizes {
            if !self.is_block_zero(start..start + s, start + s..end) {
                return false;
            }
            start += s;
        }
        true
    }

    /// Grid with `0` for structural zeros, `x` for generic entries and `#` on
    /// the diagonal; entries below the diagonal print as `0`.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    if i == j {
                        "#".to_string()
                    } else if self.is_zero(i, j) {
                        "0".to_string()
                    } else {
                        "x".to_string()
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// `{dim, zeros: [[i, j], …], stats}` with 1-based indices.
    pub fn to_json_value(&self, stats: Value) -> Value {
        let zeros: Vec<[usize; 2]> = self.zeros().iter().map(|&(i, j)| [i + 1, j + 1]).collect();
        json!({ "dim": self.dim, "zeros": zeros, "stats": stats })
    }

    /// Inverse of [`ZeroPattern::to_json_value`].
    pub fn from_json_value(value: &Value) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            dim: usize,
            zeros: Vec<[usize; 2]>,
        }
        let raw: Raw =
            serde_json::from_value(value.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        let zeros: Option<Vec<(usize, usize)>> = raw
            .zeros
            .iter()
            .map(|&[i, j]| Some((i.checked_sub(1)?, j.checked_sub(1)?)))
            .collect();
        let zeros = zeros.ok_or_else(|| Error::Schema("pattern indices are 1-based".into()))?;
        Self::from_zeros(raw.dim, &zeros)
    }
}

/// Summary counts attached to JSON pattern output.
#[derive(Debug, Clone, Serialize)]
pub struct PatternCounts {
    pub structural_zeros: usize,
    pub upper_entries: usize,
}

impl From<&ZeroPattern> for PatternCounts {
    fn from(p: &ZeroPattern) -> Self {
        Self {
            structural_zeros: p.zero_count(),
            upper_entries: p.dim * p.dim.saturating_sub(1) / 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_block() -> ZeroPattern {
        ZeroPattern::from_zeros(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn ascii_round_trip() {
        let p = two_block();
        let text = p.to_ascii();
        assert_eq!(text, "# x 0 0\n0 # 0 0\n0 0 # x\n0 0 0 #\n");
        assert_eq!(ZeroPattern::from_ascii(&text).unwrap(), p);
    }

    #[test]
    fn json_round_trip() {
        let p = two_block();
        let v = p.to_json_value(Value::Null);
        assert_eq!(v["zeros"][0], json!([1, 3]));
        assert_eq!(ZeroPattern::from_json_value(&v).unwrap(), p);
    }

    #[test]
    fn finest_partition() {
        let p = two_block();
        assert_eq!(p.finest_block_partition(0..4), vec![2, 2]);
        assert_eq!(p.finest_block_partition(0..3), vec![2, 1]);
        assert!(p.is_block_diagonal(0, &[2, 2]));
        assert!(!p.is_block_diagonal(0, &[1, 3]));
        assert_eq!(ZeroPattern::dense(3).finest_block_partition(0..3), vec![3]);
    }

    #[test]
    fn invalid_zero_rejected() {
        assert!(ZeroPattern::from_zeros(3, &[(1, 1)]).is_err());
        assert!(ZeroPattern::from_zeros(3, &[(2, 1)]).is_err());
    }

    #[test]
    fn subset_and_difference() {
        let p = two_block();
        let q = ZeroPattern::from_zeros(4, &[(0, 2)]).unwrap();
        assert!(q.is_subset_of(&p));
        assert!(!p.is_subset_of(&q));
        assert_eq!(p.difference(&q).len(), 3);
        assert_eq!(q.union(&p), p);
    }
}
