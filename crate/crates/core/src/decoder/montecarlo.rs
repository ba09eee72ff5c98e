use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::constellation::Constellation;
use super::sphere::{ml_oracle, SphereDecoder, ORACLE_LIMIT_BITS};
use crate::code::StbcCode;
use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use crate::parallel::{pool, task_rng};
use crate::structure::channel::ensure_determined;
use crate::structure::{equivalent_channel, ChannelModel, ZeroPattern, MAX_REDRAWS};

/// Simulation settings shared by all SNR points.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub n_r: usize,
    pub constellation: Constellation,
    /// Compare every decision with the exhaustive oracle.
    pub oracle_check: bool,
}

/// One SNR point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub snr_db: f64,
    pub ber: f64,
    pub ser: f64,
    pub mean_nodes: f64,
    pub p95_nodes: u64,
    pub mean_leaves: f64,
    pub max_leaves: u64,
    pub trials: usize,
    /// Instances where the decision differed from the oracle.
    pub oracle_mismatches: Option<usize>,
    /// Fraction of instances matching the oracle.
    pub oracle_agreement: Option<f64>,
}

struct Trial {
    bit_errors: u64,
    symbol_errors: u64,
    nodes: u64,
    leaves: u64,
    oracle_mismatch: Option<bool>,
}

/// Per-symbol scaling so that `E‖X‖² = n_t·T` with unit-energy symbols.
pub fn power_scale(code: &StbcCode) -> f64 {
    let energy = 0.5 * code.energy_per_unit_symbol_variance();
    ((code.n_t() * code.t()) as f64 / energy).sqrt()
}

/// Noise variance per real dimension at `snr_db` (receive SNR per antenna).
pub fn noise_variance(code: &StbcCode, snr_db: f64) -> f64 {
    let snr = 10f64.powf(snr_db / 10.0);
    code.n_t() as f64 / (2.0 * snr)
}

/// BER/SER and search effort of the sphere decoder over `config.snr_db`.
///
/// Trial `t` draws its channel, symbols and noise shape from stream `t`, so
/// every SNR point sees the same instances. With `pattern` the decoder uses
/// the structured plan; without it the search is unstructured.
pub fn monte_carlo(
    code: &StbcCode,
    config: &SimConfig,
    pattern: Option<&ZeroPattern>,
) -> Result<Vec<SimRow>> {
    ensure_determined(code, config.n_r)?;
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if config.oracle_check {
        let bits = config.constellation.bits_per_dimension() * code.dim() as u32;
        if bits > ORACLE_LIMIT_BITS {
            return Err(Error::CodebookTooLarge {
                bits,
                limit: ORACLE_LIMIT_BITS,
            });
        }
    }
    let scale = power_scale(code);
    config
        .snr_db
        .iter()
        .map(|&snr_db| {
            let sigma = noise_variance(code, snr_db).sqrt();
            let trials: Vec<Trial> = pool().install(|| {
                (0..config.trials)
                    .into_par_iter()
                    .map(|t| run_trial(code, config, pattern, scale, sigma, t))
                    .collect::<Result<_>>()
            })?;
            Ok(summarize(code, config, snr_db, &trials))
        })
        .collect()
}

fn run_trial(
    code: &StbcCode,
    config: &SimConfig,
    pattern: Option<&ZeroPattern>,
    scale: f64,
    sigma: f64,
    t: usize,
) -> Result<Trial> {
    let mut rng = task_rng(config.seed, t as u64);
    let channel = ChannelModel::new(config.n_r, config.seed);
    let c = &config.constellation;
    let mut attempt = 0;
    let (h_eq, decoder) = loop {
        let h = channel.draw(code.n_t(), &mut rng);
        let h_eq: RMatrix = equivalent_channel(code, &h)?.scale(scale);
        match SphereDecoder::new(&h_eq, c, pattern) {
            Ok(d) => break (h_eq, d),
            Err(Error::RankDeficient { .. }) if attempt < MAX_REDRAWS => attempt += 1,
            Err(Error::RankDeficient { .. }) => return Err(Error::TooManyRedraws(attempt + 1)),
            Err(e) => return Err(e),
        }
    };
    let sent: Vec<usize> = (0..code.dim()).map(|_| c.random_index(&mut rng)).collect();
    let s: Vec<f64> = sent.iter().map(|&k| c.level(k)).collect();
    let mut y = h_eq.mul_vec(&s);
    for v in &mut y {
        let n: f64 = StandardNormal.sample(&mut rng);
        *v += sigma * n;
    }
    let result = decoder.decode(&y)?;
    let oracle_mismatch = if config.oracle_check {
        let ml = ml_oracle(&y, &h_eq, c)?;
        Some(ml.indices != result.indices && result.metric > ml.metric * (1.0 + 1e-9) + 1e-12)
    } else {
        None
    };
    let mut bit_errors = 0u64;
    let mut wrong = vec![false; code.dim()];
    for (l, (&a, &b)) in sent.iter().zip(&result.indices).enumerate() {
        if a != b {
            bit_errors += u64::from(c.bit_errors(a, b));
            wrong[code.complex_symbol_of(l)] = true;
        }
    }
    Ok(Trial {
        bit_errors,
        symbol_errors: wrong.iter().filter(|&&w| w).count() as u64,
        nodes: result.nodes_visited,
        leaves: result.leaves,
        oracle_mismatch,
    })
}

fn summarize(code: &StbcCode, config: &SimConfig, snr_db: f64, trials: &[Trial]) -> SimRow {
    let n = trials.len() as f64;
    let bits = (code.dim() as u32 * config.constellation.bits_per_dimension()) as f64;
    let symbols = code.kappa() as f64;
    let mut nodes: Vec<u64> = trials.iter().map(|t| t.nodes).collect();
    nodes.sort_unstable();
    let rank = ((0.95 * n).ceil() as usize).clamp(1, nodes.len());
    let mismatches = config.oracle_check.then(|| {
        trials
            .iter()
            .filter(|t| t.oracle_mismatch == Some(true))
            .count()
    });
    SimRow {
        snr_db,
        ber: trials.iter().map(|t| t.bit_errors).sum::<u64>() as f64 / (n * bits),
        ser: trials.iter().map(|t| t.symbol_errors).sum::<u64>() as f64 / (n * symbols),
        mean_nodes: nodes.iter().sum::<u64>() as f64 / n,
        p95_nodes: nodes[rank - 1],
        mean_leaves: trials.iter().map(|t| t.leaves).sum::<u64>() as f64 / n,
        max_leaves: trials.iter().map(|t| t.leaves).max().unwrap_or(0),
        trials: trials.len(),
        oracle_mismatches: mismatches,
        oracle_agreement: mismatches.map(|m| 1.0 - m as f64 / n),
    }
}

/// Writes rows as CSV with a header line.
pub fn write_csv(rows: &[SimRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}
