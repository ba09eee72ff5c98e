use std::ops::Range;

use serde::Serialize;

use super::constellation::Constellation;
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_qr, RMatrix};
use crate::structure::{best_fast_split, ZeroPattern, EMPIRICAL_ZERO_TOLERANCE};

/// Largest codebook the exhaustive oracle accepts, in bits.
pub const ORACLE_LIMIT_BITS: u32 = 20;

/// Outcome of one decoding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    /// Decided real symbols.
    pub s_hat: Vec<f64>,
    /// Level index of each decided symbol.
    pub indices: Vec<usize>,
    /// `‖Qᵗy − R·s_hat‖²`.
    pub metric: f64,
    /// Metric-increment evaluations, pruned ones included.
    pub nodes_visited: u64,
    /// Complete-candidate evaluations; independent head groups count once
    /// per tail candidate (their largest search), as in FSD accounting.
    pub leaves: u64,
    /// Agreement with the exhaustive oracle, when it was run.
    pub is_ml: Option<bool>,
}

/// Order in which the sphere decoder visits the symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodingPlan {
    /// Plain depth-first search over the range.
    Dense(Range<usize>),
    /// Joint search over `tail`, then each head group on its own.
    Fast {
        head: Vec<Range<usize>>,
        tail: Range<usize>,
    },
    /// Independent blocks.
    Blocks(Vec<DecodingPlan>),
}

impl DecodingPlan {
    pub fn unstructured(dim: usize) -> Self {
        DecodingPlan::Dense(0..dim)
    }

    /// Block-diagonal groups of `pattern`, each split into head and tail when
    /// that lowers the worst case.
    pub fn from_pattern(pattern: &ZeroPattern) -> Self {
        let dim = pattern.dim();
        let mut start = 0;
        let mut blocks = Vec::new();
        for size in pattern.finest_block_partition(0..dim) {
            let range = start..start + size;
            start += size;
            blocks.push(match best_fast_split(pattern, range.clone()) {
                Some(w) => DecodingPlan::Fast {
                    head: w.head.groups(),
                    tail: w.tail_range(),
                },
                None => DecodingPlan::Dense(range),
            });
        }
        if blocks.len() == 1 {
            blocks.pop().expect("one block")
        } else {
            DecodingPlan::Blocks(blocks)
        }
    }

    /// Pairs `(i, j)` the plan treats as exactly zero.
    fn assumed_zeros(&self, dim: usize) -> Vec<(usize, usize)> {
        let owner = |plan: &DecodingPlan| -> Vec<Range<usize>> {
            match plan {
                DecodingPlan::Dense(r) => vec![r.clone()],
                DecodingPlan::Fast { head, tail } => {
                    let mut v = head.clone();
                    v.push(tail.clone());
                    v
                }
                DecodingPlan::Blocks(_) => unreachable!("blocks are flat"),
            }
        };
        let mut zeros = Vec::new();
        let blocks: Vec<&DecodingPlan> = match self {
            DecodingPlan::Blocks(b) => b.iter().collect(),
            other => vec![other],
        };
        let mut block_of = vec![0; dim];
        let mut head_of = vec![usize::MAX; dim];
        for (b, plan) in blocks.iter().enumerate() {
            for (g, r) in owner(plan).into_iter().enumerate() {
                for i in r {
                    block_of[i] = b;
                    if let DecodingPlan::Fast { head, .. } = plan {
                        if g < head.len() {
                            head_of[i] = g;
                        }
                    }
                }
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let split_blocks = block_of[i] != block_of[j];
                let split_heads = head_of[i] != usize::MAX
                    && head_of[j] != usize::MAX
                    && head_of[i] != head_of[j];
                if split_blocks || split_heads {
                    zeros.push((i, j));
                }
            }
        }
        zeros
    }
}

/// Sphere decoder for a fixed `H_eq`, reusable across received vectors.
#[derive(Debug, Clone)]
pub struct SphereDecoder {
    q: RMatrix,
    r: RMatrix,
    plan: DecodingPlan,
    constellation: Constellation,
}

struct Counters {
    nodes: u64,
    leaves: u64,
}

/// Best point found by a search, with the leaves it cost.
struct Found {
    metric: f64,
    values: Vec<(usize, usize)>,
    leaves: u64,
}

impl SphereDecoder {
    /// Factors `h_eq` and prepares a plan from `pattern` (unstructured when
    /// `None`). Claimed zeros are checked against the actual `R`.
    pub fn new(
        h_eq: &RMatrix,
        constellation: &Constellation,
        pattern: Option<&ZeroPattern>,
    ) -> Result<Self> {
        let qr = gram_schmidt_qr(h_eq)?;
        let dim = h_eq.cols();
        let plan = match pattern {
            Some(p) if p.dim() != dim => {
                return Err(Error::DimensionMismatch(format!(
                    "pattern is {}x{}, H_eq has {dim} columns",
                    p.dim(),
                    p.dim()
                )))
            }
            Some(p) => DecodingPlan::from_pattern(p),
            None => DecodingPlan::unstructured(dim),
        };
        let scale = qr.r.frobenius_norm();
        for (i, j) in plan.assumed_zeros(dim) {
            let v = qr.r[(i, j)].abs();
            if v >= EMPIRICAL_ZERO_TOLERANCE * scale {
                return Err(Error::InvalidArgument(format!(
                    "pattern marks R[{},{}] as zero but |R| = {v:e}",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self {
            q: qr.q,
            r: qr.r,
            plan,
            constellation: constellation.clone(),
        })
    }

    pub fn plan(&self) -> &DecodingPlan {
        &self.plan
    }

    pub fn r(&self) -> &RMatrix {
        &self.r
    }

    /// `Qᵗy`.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        self.q.transpose_mul_vec(y)
    }

    /// `‖z − R s‖²`.
    pub fn metric(&self, z: &[f64], s: &[f64]) -> f64 {
        let rs = self.r.mul_vec(s);
        z.iter().zip(&rs).map(|(a, b)| (a - b).powi(2)).sum()
    }

    pub fn decode(&self, y: &[f64]) -> Result<DecodeResult> {
        if y.len() != self.q.rows() {
            return Err(Error::DimensionMismatch(format!(
                "received vector has {} entries, H_eq has {} rows",
                y.len(),
                self.q.rows()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("received vector"));
        }
        let z = self.project(y);
        let dim = self.r.cols();
        let mut counters = Counters {
            nodes: 0,
            leaves: 0,
        };
        let blocks: Vec<&DecodingPlan> = match &self.plan {
            DecodingPlan::Blocks(b) => b.iter().collect(),
            other => vec![other],
        };
        let mut indices = vec![0usize; dim];
        for block in blocks {
            let found = match block {
                DecodingPlan::Dense(r) => self.dense(&z, r.clone(), f64::INFINITY, &mut counters),
                DecodingPlan::Fast { head, tail } => {
                    self.fast(&z, head, tail.clone(), &mut counters)
                }
                DecodingPlan::Blocks(_) => unreachable!("blocks are flat"),
            }
            .expect("an infinite radius always yields a point");
            counters.leaves += found.leaves;
            for (i, k) in found.values {
                indices[i] = k;
            }
        }
        let s_hat: Vec<f64> = indices
            .iter()
            .map(|&k| self.constellation.level(k))
            .collect();
        Ok(DecodeResult {
            metric: self.metric(&z, &s_hat),
            s_hat,
            indices,
            nodes_visited: counters.nodes,
            leaves: counters.leaves,
            is_ml: None,
        })
    }

    /// Depth-first Schnorr-Euchner search over `range` using only the
    /// couplings inside it; returns the best point with metric `< bound`.
    fn dense(&self, z: &[f64], range: Range<usize>, bound: f64, c: &mut Counters) -> Option<Found> {
        let mut best: Option<Found> = None;
        let mut radius = bound;
        let mut s = vec![0.0; self.r.cols()];
        let mut idx = vec![0usize; self.r.cols()];
        let mut leaves = 0;
        self.enumerate(
            z,
            &range,
            range.end - 1,
            0.0,
            &mut radius,
            &mut s,
            &mut idx,
            c,
            &mut |d, idx| {
                leaves += 1;
                best = Some(Found {
                    metric: d,
                    values: range.clone().map(|i| (i, idx[i])).collect(),
                    leaves: 0,
                });
                d
            },
        );
        best.map(|mut f| {
            f.leaves = leaves;
            f
        })
    }

    /// Tail search with the head groups solved independently at each tail
    /// leaf.
    fn fast(
        &self,
        z: &[f64],
        head: &[Range<usize>],
        tail: Range<usize>,
        c: &mut Counters,
    ) -> Option<Found> {
        let mut best: Option<Found> = None;
        let mut radius = f64::INFINITY;
        let mut s = vec![0.0; self.r.cols()];
        let mut idx = vec![0usize; self.r.cols()];
        let mut leaves = 0;
        let head_end = head.last().map_or(tail.start, |r| r.end);
        let mut inner = Counters {
            nodes: 0,
            leaves: 0,
        };
        self.enumerate(
            z,
            &tail,
            tail.end - 1,
            0.0,
            &mut radius,
            &mut s,
            &mut idx,
            c,
            &mut |d_tail, tidx| {
                let mut zh = z.to_vec();
                for (i, zi) in zh.iter_mut().enumerate().take(head_end) {
                    for j in tail.clone() {
                        *zi -= self.r[(i, j)] * self.constellation.level(tidx[j]);
                    }
                }
                let current = best.as_ref().map_or(f64::INFINITY, |b| b.metric);
                let mut remaining = current - d_tail;
                let mut values: Vec<(usize, usize)> = tail.clone().map(|j| (j, tidx[j])).collect();
                let mut group_max = 0;
                let mut total = d_tail;
                for g in head {
                    let found = self.dense(&zh, g.clone(), remaining, &mut inner);
                    match found {
                        Some(f) => {
                            group_max = group_max.max(f.leaves);
                            remaining -= f.metric;
                            total += f.metric;
                            values.extend(f.values);
                        }
                        None => {
                            leaves += group_max;
                            return current;
                        }
                    }
                }
                leaves += group_max;
                if total < current {
                    best = Some(Found {
                        metric: total,
                        values,
                        leaves: 0,
                    });
                    total
                } else {
                    current
                }
            },
        );
        c.nodes += inner.nodes;
        best.map(|mut f| {
            f.leaves = leaves;
            f
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        z: &[f64],
        range: &Range<usize>,
        i: usize,
        partial: f64,
        radius: &mut f64,
        s: &mut [f64],
        idx: &mut [usize],
        c: &mut Counters,
        leaf: &mut dyn FnMut(f64, &[usize]) -> f64,
    ) {
        let mut num = z[i];
        for j in i + 1..range.end {
            num -= self.r[(i, j)] * s[j];
        }
        let rii = self.r[(i, i)];
        let center = num / rii;
        let levels = self.constellation.levels();
        let mut order: Vec<usize> = (0..levels.len()).collect();
        order.sort_by(|&a, &b| {
            (levels[a] - center)
                .abs()
                .total_cmp(&(levels[b] - center).abs())
        });
        for k in order {
            let inc = (num - rii * levels[k]).powi(2);
            c.nodes += 1;
            let d = partial + inc;
            if d >= *radius {
                break;
            }
            s[i] = levels[k];
            idx[i] = k;
            if i == range.start {
                *radius = leaf(d, idx);
            } else {
                self.enumerate(z, range, i - 1, d, radius, s, idx, c, leaf);
            }
        }
        s[i] = 0.0;
    }
}

/// Exact ML decision by sphere search; see [`SphereDecoder`].
pub fn sphere_decode(
    y: &[f64],
    h_eq: &RMatrix,
    constellation: &Constellation,
    pattern: Option<&ZeroPattern>,
) -> Result<DecodeResult> {
    SphereDecoder::new(h_eq, constellation, pattern)?.decode(y)
}

/// Exhaustive `argmin ‖y − H_eq s‖²` over the whole codebook. The reported
/// metric uses the same projected form as [`SphereDecoder`] when `H_eq` has
/// full column rank.
pub fn ml_oracle(y: &[f64], h_eq: &RMatrix, constellation: &Constellation) -> Result<DecodeResult> {
    let dim = h_eq.cols();
    let bits = constellation.bits_per_dimension() * dim as u32;
    if bits > ORACLE_LIMIT_BITS {
        return Err(Error::CodebookTooLarge {
            bits,
            limit: ORACLE_LIMIT_BITS,
        });
    }
    if y.len() != h_eq.rows() {
        return Err(Error::DimensionMismatch(format!(
            "received vector has {} entries, H_eq has {} rows",
            y.len(),
            h_eq.rows()
        )));
    }
    let m = constellation.m();
    let levels = constellation.levels();
    let columns: Vec<Vec<f64>> = (0..dim).map(|j| h_eq.column(j)).collect();
    let mut idx = vec![0usize; dim];
    let mut residual = y.to_vec();
    for col in &columns {
        for (ri, hij) in residual.iter_mut().zip(col) {
            *ri -= hij * levels[0];
        }
    }
    let mut best_idx = idx.clone();
    let mut best = f64::INFINITY;
    let mut evaluated = 0u64;
    'outer: loop {
        let metric: f64 = residual.iter().map(|v| v * v).sum();
        evaluated += 1;
        if metric < best {
            best = metric;
            best_idx.clone_from(&idx);
        }
        // Odometer step, updating the residual for each changed coordinate.
        let mut pos = 0;
        loop {
            if pos == dim {
                break 'outer;
            }
            let old = levels[idx[pos]];
            idx[pos] = (idx[pos] + 1) % m;
            let delta = levels[idx[pos]] - old;
            for (ri, hij) in residual.iter_mut().zip(&columns[pos]) {
                *ri -= hij * delta;
            }
            if idx[pos] != 0 {
                break;
            }
            pos += 1;
        }
    }
    let s_hat: Vec<f64> = best_idx.iter().map(|&k| levels[k]).collect();
    let metric = match gram_schmidt_qr(h_eq) {
        Ok(qr) => {
            let z = qr.q.transpose_mul_vec(y);
            let rs = qr.r.mul_vec(&s_hat);
            z.iter().zip(&rs).map(|(a, b)| (a - b).powi(2)).sum()
        }
        Err(Error::RankDeficient { .. }) => best,
        Err(e) => return Err(e),
    };
    Ok(DecodeResult {
        s_hat,
        indices: best_idx,
        metric,
        nodes_visited: evaluated,
        leaves: evaluated,
        is_ml: Some(true),
    })
}
