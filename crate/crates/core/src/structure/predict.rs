//! Channel-free zero-structure predictions.
//!
//! `R_ij = ⟨q_i, h_j⟩` and `q_i ∝ h_i − Σ_{k<i} R_ki q_k`, so `R_ij` vanishes
//! for every channel when `h_i ⊥ h_j` and every earlier row has a zero in
//! column `i` or column `j`. Pairwise orthogonality plus this induction gives
//! the multi-group and fast zeros. Block-orthogonal codes add zeros that only
//! appear through `EᵗE` cancellation.

use super::bo::ETE_TOLERANCE;
use super::channel::{empirical_pattern, ChannelModel};
use super::pattern::ZeroPattern;
use crate::code::StbcCode;
use crate::criteria::{hr_graph, orthogonality_graph};
use crate::linalg::RMatrix;

/// Seed of the probe draws used for the block-orthogonal closure.
pub const PROBE_SEED: u64 = 0x5eed;

/// Number of probe draws.
pub const PROBE_DRAWS: usize = 8;

/// Propagates pairwise orthogonality through the Gram-Schmidt induction.
/// `forced` zeros are taken as given.
pub fn propagate(graph: &[Vec<bool>], forced: Option<&ZeroPattern>) -> ZeroPattern {
    let dim = graph.len();
    let mut p = ZeroPattern::dense(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let forced_zero = forced.is_some_and(|f| f.is_zero(i, j));
            let induced = graph[i][j] && (0..i).all(|k| p.is_zero(k, i) || p.is_zero(k, j));
            p.set_zero(i, j, forced_zero || induced);
        }
    }
    p
}

/// Zeros implied by pairwise `c1 && c2` orthogonality alone.
pub fn channel_free_pattern(code: &StbcCode) -> ZeroPattern {
    propagate(&orthogonality_graph(code), None)
}

/// Zeros the HRQF matrix predicts: `U_ij = 0` propagated the same way.
pub fn hrqf_predicted_pattern(code: &StbcCode) -> ZeroPattern {
    propagate(&hr_graph(code), None)
}

/// Pairwise prediction plus the `EᵗE` closure checked on `probes`.
///
/// For a split `R = [R_1 E; 0 R_2]` at column `c`, `R_2ᵗR_2 = H_2ᵗH_2 − EᵗE`,
/// so `R_2` is the Cholesky factor of a matrix whose `(a, b)` entry vanishes
/// when the pair is orthogonal and `(EᵗE)_ab = 0`. Propagating those zeros
/// inside `R_2` is exact; block-orthogonal codes are the case where the
/// split falls on a super-block boundary.
pub fn predicted_pattern_with_probes(code: &StbcCode, probes: &[RMatrix]) -> ZeroPattern {
    let graph = orthogonality_graph(code);
    let dim = code.dim();
    let mut forced = ZeroPattern::dense(dim);
    if !probes.is_empty() {
        for split in 1..dim - 1 {
            let ete_zero = ete_zero_mask(probes, split);
            let n = dim - split;
            let sub: Vec<Vec<bool>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| graph[split + a][split + b] && ete_zero[a][b])
                        .collect()
                })
                .collect();
            for (a, b) in propagate(&sub, None).zeros() {
                forced.set_zero(split + a, split + b, true);
            }
        }
    }
    propagate(&graph, Some(&forced))
}

/// Entries of `EᵗE` (with `E = R[..split, split..]`) that are below
/// [`ETE_TOLERANCE`] relative to `‖EᵗE‖_F` in every probe.
fn ete_zero_mask(probes: &[RMatrix], split: usize) -> Vec<Vec<bool>> {
    let dim = probes[0].cols();
    let n = dim - split;
    let rows: Vec<usize> = (0..split).collect();
    let cols: Vec<usize> = (split..dim).collect();
    let mut mask = vec![vec![true; n]; n];
    for r in probes {
        let e = r.select_rows(&rows).select_columns(&cols);
        let ete = &e.transpose() * &e;
        let norm = ete.frobenius_norm();
        for (a, row) in mask.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                if norm > 0.0 && ete[(a, b)].abs() >= ETE_TOLERANCE * norm {
                    *cell = false;
                }
            }
        }
    }
    mask
}

/// Receive antennas for probe draws: `n_t`, raised to `⌈κ/T⌉` if needed.
pub fn probe_receive_antennas(code: &StbcCode) -> usize {
    code.n_t().max(code.kappa().div_ceil(code.t()))
}

/// Structural prediction from pairwise conditions, Gram-Schmidt induction
/// and the block-orthogonal closure checked on a few probe channels.
pub fn predicted_pattern(code: &StbcCode) -> ZeroPattern {
    let channel = ChannelModel::new(probe_receive_antennas(code), PROBE_SEED);
    match empirical_pattern(code, &channel, PROBE_DRAWS) {
        Ok(e) => predicted_pattern_with_probes(code, &e.samples),
        Err(_) => channel_free_pattern(code),
    }
}
