//! Block-orthogonal `(Γ, k, γ)` structure: candidate parameters, the
//! four sufficient conditions, and the zeros they imply.

use serde::Serialize;

use super::pattern::ZeroPattern;
use crate::linalg::RMatrix;

/// Relative size below which an off-block entry of `EᵗE` counts as zero.
pub const ETE_TOLERANCE: f64 = 1e-9;

/// `Γ` super-blocks of `k` sub-blocks of `γ` symbols each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BoParams {
    #[serde(rename = "Gamma")]
    pub super_blocks: usize,
    pub k: usize,
    #[serde(rename = "gamma")]
    pub block_size: usize,
}

impl BoParams {
    pub fn super_size(&self) -> usize {
        self.k * self.block_size
    }

    pub fn dim(&self) -> usize {
        self.super_blocks * self.super_size()
    }

    /// Strict-upper zeros forced inside the diagonal super-blocks.
    pub fn implied_zeros(&self) -> Vec<(usize, usize)> {
        let (ss, g) = (self.super_size(), self.block_size);
        let mut out = Vec::new();
        for s in 0..self.super_blocks {
            let base = s * ss;
            for i in base..base + ss {
                for j in i + 1..base + ss {
                    if (i - base) / g != (j - base) / g {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }

    /// Cross sub-block pairs inside each super-block.
    fn cross_pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        self.implied_zeros().into_iter()
    }

    /// `E` block feeding super-block `s ≥ 1`: rows above, columns of `s`.
    fn e_block(&self, r: &RMatrix, s: usize) -> RMatrix {
        let ss = self.super_size();
        let rows: Vec<usize> = (0..s * ss).collect();
        let cols: Vec<usize> = (s * ss..(s + 1) * ss).collect();
        r.select_rows(&rows).select_columns(&cols)
    }
}

/// Parameters with `Γ ≥ 2`, `k ≥ 2` and `Γkγ = dim`.
pub fn bo_candidates(dim: usize) -> Vec<BoParams> {
    let mut out = Vec::new();
    for super_blocks in 2..=dim {
        if !dim.is_multiple_of(super_blocks) {
            continue;
        }
        let ss = dim / super_blocks;
        for k in 2..=ss {
            if ss.is_multiple_of(k) {
                out.push(BoParams {
                    super_blocks,
                    k,
                    block_size: ss / k,
                });
            }
        }
    }
    out
}

/// Evaluation of the four sufficient conditions for one parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoEvidence {
    pub params: BoParams,
    /// Conditions 1 and 2: cross sub-block pairs are orthogonal for every
    /// channel inside each super-block.
    pub pairs_orthogonal: bool,
    /// Condition 3: every sampled `R` has full rank.
    pub full_rank: bool,
    pub min_diag_relative: f64,
    /// Condition 4: `EᵗE` is block diagonal for every super-block `s ≥ 1`.
    pub ete_block_diagonal: bool,
    pub ete_max_relative: f64,
    pub samples: usize,
}

impl BoEvidence {
    pub fn holds(&self) -> bool {
        self.pairs_orthogonal && self.full_rank && self.ete_block_diagonal && self.samples > 0
    }
}

/// Checks the conditions on a pairwise orthogonality graph and on sampled
/// `R` factors (each draw tested separately).
pub fn bo_evidence(graph: &[Vec<bool>], samples: &[RMatrix], params: BoParams) -> BoEvidence {
    let pairs_orthogonal = params.cross_pairs().all(|(i, j)| graph[i][j]);
    let g = params.block_size;
    let ss = params.super_size();
    let mut min_diag_relative = f64::INFINITY;
    let mut ete_max_relative: f64 = 0.0;
    for r in samples {
        let scale = r.frobenius_norm();
        for i in 0..r.rows() {
            min_diag_relative = min_diag_relative.min(r[(i, i)] / scale);
        }
        for s in 1..params.super_blocks {
            let e = params.e_block(r, s);
            let ete = &e.transpose() * &e;
            let norm = ete.frobenius_norm();
            if norm == 0.0 {
                continue;
            }
            for a in 0..ss {
                for b in 0..ss {
                    if a / g != b / g {
                        ete_max_relative = ete_max_relative.max(ete[(a, b)].abs() / norm);
                    }
                }
            }
        }
    }
    if samples.is_empty() {
        min_diag_relative = 0.0;
    }
    BoEvidence {
        params,
        pairs_orthogonal,
        full_rank: min_diag_relative > crate::linalg::RANK_TOLERANCE,
        min_diag_relative,
        ete_block_diagonal: ete_max_relative < ETE_TOLERANCE,
        ete_max_relative,
        samples: samples.len(),
    }
}

/// The measured pattern shows the block-orthogonal shape: diagonal
/// super-blocks split into `k` sub-blocks and every coupling block `E`
/// carries at least one nonzero.
pub fn pattern_matches(pattern: &ZeroPattern, params: BoParams) -> bool {
    let ss = params.super_size();
    let diag_ok = params
        .implied_zeros()
        .iter()
        .all(|&(i, j)| pattern.is_zero(i, j));
    let coupled =
        (1..params.super_blocks).all(|s| !pattern.is_block_zero(0..s * ss, s * ss..(s + 1) * ss));
    diag_ok && coupled
}
