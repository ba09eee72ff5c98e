use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::pattern::{PatternCounts, ZeroPattern};
use crate::code::StbcCode;
use crate::error::{Error, Result};
use crate::linalg::{check_realify, gram_schmidt_qr, CMatrix, RMatrix};
use crate::parallel::{pool, task_rng};

/// Relative magnitude below which an `R` entry counts as zero in one draw.
pub const EMPIRICAL_ZERO_TOLERANCE: f64 = 1e-9;

/// Consecutive rank-deficient draws tolerated per trial before giving up.
pub const MAX_REDRAWS: usize = 16;

/// Default number of channel draws.
pub const DEFAULT_TRIALS: usize = 100;

/// Default seed used by the CLI and the channel-free probes.
pub const DEFAULT_SEED: u64 = 42;

/// I.i.d. `CN(0, 1)` Rayleigh channel with `n_r` receive antennas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChannelModel {
    pub n_r: usize,
    pub seed: u64,
}

impl ChannelModel {
    pub fn new(n_r: usize, seed: u64) -> Self {
        Self { n_r, seed }
    }

    /// Draws an `n_r × n_t` channel from `rng`.
    pub fn draw<R: Rng + ?Sized>(&self, n_t: usize, rng: &mut R) -> CMatrix {
        let data = (0..self.n_r * n_t)
            .map(|_| complex_gaussian(rng, 1.0))
            .collect();
        CMatrix::new(self.n_r, n_t, data).expect("sized by construction")
    }
}

/// Circularly-symmetric complex Gaussian with total variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// `H_eq = (I_T ⊗ Ȟ)·G`, of size `2 n_r T × 2κ`.
pub fn equivalent_channel(code: &StbcCode, h: &CMatrix) -> Result<RMatrix> {
    if h.cols() != code.n_t() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} transmit columns, code has n_t = {}",
            h.cols(),
            code.n_t()
        )));
    }
    let block = check_realify(h).kron_identity(code.t());
    Ok(&block * &code.generator_matrix())
}

pub(crate) fn ensure_determined(code: &StbcCode, n_r: usize) -> Result<()> {
    let rows = 2 * n_r * code.t();
    if rows < code.dim() {
        return Err(Error::UnderDetermined {
            rows,
            cols: code.dim(),
        });
    }
    Ok(())
}

/// One trial's `R` factor, redrawing rank-deficient channels.
fn trial_r(
    code: &StbcCode,
    channel: &ChannelModel,
    trial: usize,
    row_perm: Option<&[usize]>,
) -> Result<(RMatrix, usize)> {
    let mut rng = task_rng(channel.seed, trial as u64);
    for redraws in 0..=MAX_REDRAWS {
        let h = channel.draw(code.n_t(), &mut rng);
        let mut heq = equivalent_channel(code, &h)?;
        if let Some(p) = row_perm {
            heq = heq.select_rows(p);
        }
        match gram_schmidt_qr(&heq) {
            Ok(f) => return Ok((f.r, redraws)),
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::TooManyRedraws(MAX_REDRAWS + 1))
}

/// Measured zero structure over a batch of channel draws.
#[derive(Debug, Clone)]
pub struct EmpiricalPattern {
    pub pattern: ZeroPattern,
    /// Largest `|R_ij| / ‖R‖_F` per entry over all draws (row-major, `dim²`).
    pub max_relative: Vec<f64>,
    /// The sampled `R` factors, in trial order.
    pub samples: Vec<RMatrix>,
    pub channel: ChannelModel,
    pub trials: usize,
    pub redraws: usize,
}

impl EmpiricalPattern {
    pub fn max_relative(&self, i: usize, j: usize) -> f64 {
        self.max_relative[i * self.pattern.dim() + j]
    }

    /// Largest relative magnitude among entries marked zero.
    pub fn max_zero_magnitude(&self) -> f64 {
        self.pattern
            .zeros()
            .iter()
            .map(|&(i, j)| self.max_relative(i, j))
            .fold(0.0, f64::max)
    }

    pub fn stats_json(&self) -> Value {
        serde_json::json!({
            "counts": PatternCounts::from(&self.pattern),
            "trials": self.trials,
            "n_r": self.channel.n_r,
            "seed": self.channel.seed,
            "redraws": self.redraws,
            "threshold": EMPIRICAL_ZERO_TOLERANCE,
            "max_zero_relative": self.max_zero_magnitude(),
        })
    }

    pub fn to_json_value(&self) -> Value {
        self.pattern.to_json_value(self.stats_json())
    }
}

/// Samples `trials` channels and marks `R_ij` (i < j) zero iff
/// `|R_ij| < 1e-9·‖R‖_F` in every draw.
pub fn empirical_pattern(
    code: &StbcCode,
    channel: &ChannelModel,
    trials: usize,
) -> Result<EmpiricalPattern> {
    sample_pattern(code, channel, trials, None)
}

/// As [`empirical_pattern`] but with the rows of `H_eq` permuted by
/// `row_perm` (0-based) before the QR step.
pub fn empirical_pattern_row_permuted(
    code: &StbcCode,
    channel: &ChannelModel,
    trials: usize,
    row_perm: &[usize],
) -> Result<EmpiricalPattern> {
    let rows = 2 * channel.n_r * code.t();
    let mut seen = vec![false; rows];
    if row_perm.len() != rows
        || row_perm
            .iter()
            .any(|&p| p >= rows || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidPermutation(format!(
            "row permutation must be a bijection on 0..{rows}"
        )));
    }
    sample_pattern(code, channel, trials, Some(row_perm))
}

fn sample_pattern(
    code: &StbcCode,
    channel: &ChannelModel,
    trials: usize,
    row_perm: Option<&[usize]>,
) -> Result<EmpiricalPattern> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if channel.n_r == 0 {
        return Err(Error::InvalidArgument("n_r must be at least 1".into()));
    }
    ensure_determined(code, channel.n_r)?;
    let results: Vec<Result<(RMatrix, usize)>> = pool().install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| trial_r(code, channel, t, row_perm))
            .collect()
    });
    let dim = code.dim();
    let mut pattern = ZeroPattern::dense(dim);
    let mut max_relative = vec![0.0f64; dim * dim];
    let mut samples = Vec::with_capacity(trials);
    let mut redraws = 0;
    for r in results {
        let (r, extra) = r?;
        redraws += extra;
        let scale = r.frobenius_norm();
        for i in 0..dim {
            for j in i..dim {
                let rel = r[(i, j)].abs() / scale;
                let slot = &mut max_relative[i * dim + j];
                *slot = (*slot).max(rel);
            }
        }
        samples.push(r);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            pattern.set_zero(i, j, max_relative[i * dim + j] < EMPIRICAL_ZERO_TOLERANCE);
        }
    }
    Ok(EmpiricalPattern {
        pattern,
        max_relative,
        samples,
        channel: *channel,
        trials,
        redraws,
    })
}
