//! Command-line front end: argument parsing, orchestration and rendering.
//!
//! Exit codes: 0 success, 1 other failure, 2 bad input (usage, unknown code,
//! code-file schema), 3 under-determined system, 4 ordering search overflow.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{builtin, load_code, StbcCode, BUILTIN_NAMES};
use crate::criteria::{hrqf_matrix, VerdictTable};
use crate::decoder::{monte_carlo, write_csv, Constellation, SimConfig, SimRow, ORACLE_LIMIT_BITS};
use crate::error::Error;
use crate::structure::{
    classify, empirical_pattern, hrqf_predicted_pattern, ordering_search, predicted_pattern,
    ChannelModel, ClassificationReport, SearchConfig, SearchMode, ZeroPattern, DEFAULT_Q,
    DEFAULT_SEED, DEFAULT_TRIALS,
};

#[derive(Debug, Parser)]
#[command(
    name = "stbc-fsd",
    version,
    about = "Zero-structure analysis and fast sphere decoding for linear space-time block codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise conditions, predicted and measured patterns, classification
    Analyze(CommonArgs),
    /// Render the measured zero pattern of R
    Pattern {
        #[command(flatten)]
        common: CommonArgs,
        /// Also render the predicted and HRQF patterns
        #[arg(long)]
        predicted: bool,
    },
    /// Search symbol orderings for the lowest decoding complexity
    OrderSearch {
        #[command(flatten)]
        common: CommonArgs,
        /// Greedy swap search instead of exhaustive enumeration
        #[arg(long)]
        heuristic: bool,
    },
    /// Monte Carlo BER/SER and search effort of the sphere decoder
    DecodeSim {
        #[command(flatten)]
        common: CommonArgs,
        /// SNR grid in dB, `start:step:stop` or a single value
        #[arg(long, default_value = "0:5:20")]
        snr: SnrGrid,
        /// Compare every decision with exhaustive ML
        #[arg(long)]
        oracle_check: bool,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Built-in name (abba, silver, golden, golden-canonical) or JSON file
    #[arg(long)]
    pub code: String,
    /// Receive antennas [default: n_t]
    #[arg(long, value_parser = parse_positive)]
    pub nr: Option<usize>,
    /// Channel draws (analysis) or instances per SNR point (simulation)
    #[arg(long, default_value_t = DEFAULT_TRIALS, value_parser = parse_positive)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Bits per complex symbol of the square QAM
    #[arg(long, default_value_t = DEFAULT_Q)]
    pub q: u32,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    pub format: Format,
    /// Also write the output here (CSV rows for decode-sim)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Json,
}

/// SNR points in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        if parts.iter().any(|v| !v.is_finite()) {
            return Err("SNR values must be finite".into());
        }
        match parts[..] {
            [a] => Ok(SnrGrid(vec![a])),
            [a, step, b] => {
                if step <= 0.0 || b < a {
                    return Err("expected start:step:stop with step > 0 and stop >= start".into());
                }
                let n = ((b - a) / step + 1e-9).floor() as usize + 1;
                Ok(SnrGrid((0..n).map(|k| a + k as f64 * step).collect()))
            }
            _ => Err("expected start:step:stop or a single value".into()),
        }
    }
}

/// Where the code comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    Builtin(String),
    File(PathBuf),
}

impl CodeSource {
    pub fn parse(arg: &str) -> Self {
        if BUILTIN_NAMES.contains(&arg.to_ascii_lowercase().as_str()) {
            CodeSource::Builtin(arg.to_ascii_lowercase())
        } else {
            CodeSource::File(PathBuf::from(arg))
        }
    }

    pub fn load(&self) -> crate::Result<StbcCode> {
        match self {
            CodeSource::Builtin(name) => builtin(name),
            CodeSource::File(path) if !path.exists() => {
                Err(Error::UnknownCode(path.display().to_string()))
            }
            CodeSource::File(path) => load_code(path),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Pattern,
    OrderSearch,
    DecodeSim,
}

impl CommandKind {
    fn as_str(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Pattern => "pattern",
            CommandKind::OrderSearch => "order-search",
            CommandKind::DecodeSim => "decode-sim",
        }
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub code: CodeSource,
    /// `None` means `n_t` of the loaded code.
    pub n_r: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub snr_db: Vec<f64>,
    pub q: u32,
    pub ordering: SearchMode,
    pub format: Format,
    pub predicted: bool,
    pub oracle_check: bool,
    pub out: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (command, common, predicted, heuristic, snr, oracle_check) = match cli.command {
            Command::Analyze(c) => (CommandKind::Analyze, c, false, false, None, false),
            Command::Pattern { common, predicted } => {
                (CommandKind::Pattern, common, predicted, false, None, false)
            }
            Command::OrderSearch { common, heuristic } => (
                CommandKind::OrderSearch,
                common,
                false,
                heuristic,
                None,
                false,
            ),
            Command::DecodeSim {
                common,
                snr,
                oracle_check,
            } => (
                CommandKind::DecodeSim,
                common,
                false,
                false,
                Some(snr),
                oracle_check,
            ),
        };
        RunConfig {
            command,
            code: CodeSource::parse(&common.code),
            n_r: common.nr,
            trials: common.trials,
            seed: common.seed,
            snr_db: snr.map(|s| s.0).unwrap_or_default(),
            q: common.q,
            ordering: if heuristic {
                SearchMode::Heuristic
            } else {
                SearchMode::Exhaustive
            },
            format: common.format,
            predicted,
            oracle_check,
            out: common.out,
        }
    }
}

/// A failed run with its process exit code.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct Failure {
    pub exit_code: i32,
    pub error: Error,
}

impl Failure {
    fn input(error: Error) -> Self {
        Self {
            exit_code: 2,
            error,
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let exit_code = match error {
            Error::Schema(_)
            | Error::Json(_)
            | Error::UnknownCode(_)
            | Error::InvalidArgument(_)
            | Error::OddConstellation(_) => 2,
            Error::UnderDetermined { .. } => 3,
            Error::SearchOverflow { .. } => 4,
            _ => 1,
        };
        Self { exit_code, error }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

/// Runs one command, writing the main output to `out` and warnings to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let code = config.code.load().map_err(Failure::input)?;
    if let Some(w) = code.rank_warning() {
        writeln!(err, "warning: {w}")?;
    }
    if config.q == 0 || !config.q.is_multiple_of(2) {
        return Err(Error::OddConstellation(config.q).into());
    }
    let n_r = config.n_r.unwrap_or(code.n_t());
    let text = match config.command {
        CommandKind::Analyze => analyze(config, &code, n_r)?,
        CommandKind::Pattern => pattern(config, &code, n_r)?,
        CommandKind::OrderSearch => order_search(config, &code, n_r)?,
        CommandKind::DecodeSim => decode_sim(config, &code, n_r, err)?,
    };
    out.write_all(text.as_bytes())?;
    if let (Some(path), false) = (&config.out, config.command == CommandKind::DecodeSim) {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

/// Parses `std::env::args`, runs, and returns the exit code.
pub fn main_with_args() -> i32 {
    let config = RunConfig::from(Cli::parse());
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    match run(&config, &mut stdout, &mut stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.error);
            f.exit_code
        }
    }
}

fn header(config: &RunConfig, code: &StbcCode, n_r: usize) -> String {
    let mut h = format!(
        "# stbc-fsd {} code={} n_t={} T={} kappa={} n_r={} trials={} seed={} q={}",
        config.command.as_str(),
        code.name(),
        code.n_t(),
        code.t(),
        code.kappa(),
        n_r,
        config.trials,
        config.seed,
        config.q
    );
    if config.command == CommandKind::DecodeSim {
        let grid: Vec<String> = config.snr_db.iter().map(|v| format!("{v}")).collect();
        let _ = write!(h, " snr_db={}", grid.join(","));
    }
    h.push('\n');
    h
}

fn config_json(config: &RunConfig, code: &StbcCode, n_r: usize) -> Value {
    json!({
        "command": config.command.as_str(),
        "code": code.name(),
        "n_t": code.n_t(),
        "T": code.t(),
        "kappa": code.kappa(),
        "n_r": n_r,
        "trials": config.trials,
        "seed": config.seed,
        "q": config.q,
    })
}

fn to_pretty(value: &Value) -> crate::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn pairs(list: &[(usize, usize)]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    list.iter()
        .map(|(i, j)| format!("({},{})", i + 1, j + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn groups_text(groups: &[Vec<usize>]) -> String {
    groups
        .iter()
        .map(|g| {
            let items: Vec<String> = g.iter().map(|v| v.to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn hrqf_zeros(code: &StbcCode) -> Vec<(usize, usize)> {
    let u = hrqf_matrix(code);
    let scale = (0..code.dim()).map(|i| u[(i, i)]).fold(0.0, f64::max);
    let dim = code.dim();
    (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .filter(|&(i, j)| u[(i, j)] <= 1e-12 * scale)
        .collect()
}

fn report_text(report: &ClassificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "family: {}", report.family);
    let _ = writeln!(
        s,
        "groups (g = {}): {}",
        report.groups.g(),
        groups_text(&report.groups.groups_one_based())
    );
    for (k, fast) in report.group_fast.iter().enumerate() {
        if let Some(w) = fast {
            let tail: Vec<usize> = w.tail_range().map(|i| i + 1).collect();
            let _ = writeln!(
                s,
                "fast split in group {}: head {} (L = {}), tail {}",
                k + 1,
                groups_text(&w.head.groups_one_based()),
                w.l(),
                groups_text(&[tail])
            );
        }
    }
    if let Some(bo) = &report.bo {
        let p = bo.params;
        let _ = writeln!(
            s,
            "block-orthogonal: Gamma = {}, k = {}, gamma = {} ({} implied zeros, conditions hold: {})",
            p.super_blocks,
            p.k,
            p.block_size,
            bo.implied_zeros,
            bo.evidence.holds()
        );
    }
    let f = report.fsd;
    let _ = writeln!(
        s,
        "complexity (q = {}): {} metric evaluations, exponent {:.4} (exhaustive {})",
        f.q, f.count, f.exponent, f.exhaustive_exponent
    );
    s
}

fn analyze(config: &RunConfig, code: &StbcCode, n_r: usize) -> Result<String, Failure> {
    let channel = ChannelModel::new(n_r, config.seed);
    let empirical = empirical_pattern(code, &channel, config.trials)?;
    let report = classify(code, &empirical).with_constellation_bits(config.q);
    let verdicts = VerdictTable::new(code);
    let hrqf = hrqf_predicted_pattern(code);
    let predicted = predicted_pattern(code);
    let u_zeros = hrqf_zeros(code);
    if config.format == Format::Json {
        let zeros: Vec<[usize; 2]> = u_zeros.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
        return Ok(to_pretty(&json!({
            "config": config_json(config, code, n_r),
            "rank_warning": code.rank_warning(),
            "verdicts": serde_json::to_value(&verdicts.verdicts).map_err(Error::from)?,
            "hrqf_zeros": zeros,
            "patterns": {
                "hrqf": hrqf.to_json_value(Value::Null),
                "predicted": predicted.to_json_value(Value::Null),
                "empirical": empirical.to_json_value(),
            },
            "report": serde_json::to_value(&report).map_err(Error::from)?,
        }))?);
    }
    let mut s = header(config, code, n_r);
    let _ = writeln!(
        s,
        "code {}: n_t = {}, T = {}, kappa = {}, rate = {}",
        code.name(),
        code.n_t(),
        code.t(),
        code.kappa(),
        code.rate()
    );
    let _ = writeln!(s, "\n[pairwise conditions]\n{}", verdicts.to_ascii());
    let _ = writeln!(s, "[HRQF zeros U_ij = 0]\n{}\n", pairs(&u_zeros));
    let _ = writeln!(s, "[HRQF pattern]\n{}", hrqf.to_ascii());
    let _ = writeln!(s, "[predicted pattern]\n{}", predicted.to_ascii());
    let _ = writeln!(
        s,
        "[measured pattern: {} draws, max |R_ij|/||R|| on zeros {:.2e}]\n{}",
        empirical.trials,
        empirical.max_zero_magnitude(),
        empirical.pattern.to_ascii()
    );
    let _ = writeln!(s, "[classification]\n{}", report_text(&report));
    let _ = writeln!(s, "[HRQF mismatches]");
    if report.hrqf_mismatches.is_empty() {
        let _ = writeln!(s, "none");
    }
    for m in &report.hrqf_mismatches {
        let dir = match m.direction {
            crate::structure::MismatchDirection::Unsound => "unsound   ",
            crate::structure::MismatchDirection::Incomplete => "incomplete",
        };
        let _ = writeln!(s, "{dir} ({},{})  U = {:.3e}", m.i, m.j, m.u_value);
    }
    Ok(s)
}

fn side_by_side(titles: &[&str], patterns: &[&ZeroPattern]) -> String {
    let grids: Vec<Vec<String>> = patterns
        .iter()
        .map(|p| p.to_ascii().lines().map(str::to_string).collect())
        .collect();
    let width = grids[0][0]
        .len()
        .max(titles.iter().map(|t| t.len()).max().unwrap_or(0));
    let mut s = String::new();
    let line: Vec<String> = titles.iter().map(|t| format!("{t:<width$}")).collect();
    let _ = writeln!(s, "{}", line.join("   ").trim_end());
    for r in 0..grids[0].len() {
        let line: Vec<String> = grids.iter().map(|g| format!("{:<width$}", g[r])).collect();
        let _ = writeln!(s, "{}", line.join("   ").trim_end());
    }
    s
}

fn pattern(config: &RunConfig, code: &StbcCode, n_r: usize) -> Result<String, Failure> {
    let channel = ChannelModel::new(n_r, config.seed);
    let empirical = empirical_pattern(code, &channel, config.trials)?;
    let predicted = config.predicted.then(|| predicted_pattern(code));
    let hrqf = config.predicted.then(|| hrqf_predicted_pattern(code));
    if config.format == Format::Json {
        let mut v = json!({
            "config": config_json(config, code, n_r),
            "empirical": empirical.to_json_value(),
        });
        if let (Some(p), Some(h)) = (&predicted, &hrqf) {
            let zeros1 = |list: Vec<(usize, usize)>| -> Vec<[usize; 2]> {
                list.iter().map(|&(i, j)| [i + 1, j + 1]).collect()
            };
            v["predicted"] = p.to_json_value(Value::Null);
            v["hrqf"] = h.to_json_value(Value::Null);
            v["diff"] = json!({
                "predicted_missing": zeros1(empirical.pattern.difference(p)),
                "predicted_extra": zeros1(p.difference(&empirical.pattern)),
                "hrqf_missing": zeros1(empirical.pattern.difference(h)),
                "hrqf_extra": zeros1(h.difference(&empirical.pattern)),
            });
        }
        return Ok(to_pretty(&v)?);
    }
    let mut s = header(config, code, n_r);
    match (&predicted, &hrqf) {
        (Some(p), Some(h)) => {
            s.push_str(&side_by_side(
                &["measured", "predicted", "HRQF"],
                &[&empirical.pattern, p, h],
            ));
            let e = &empirical.pattern;
            let _ = writeln!(
                s,
                "\nzeros: measured {}, predicted {}, HRQF {}",
                e.zero_count(),
                p.zero_count(),
                h.zero_count()
            );
            let _ = writeln!(
                s,
                "predicted vs measured: missing {}, extra {}",
                pairs(&e.difference(p)),
                pairs(&p.difference(e))
            );
            let _ = writeln!(
                s,
                "HRQF vs measured: missing {}, extra {}",
                pairs(&e.difference(h)),
                pairs(&h.difference(e))
            );
        }
        _ => s.push_str(&empirical.pattern.to_ascii()),
    }
    Ok(s)
}

fn order_search(config: &RunConfig, code: &StbcCode, n_r: usize) -> Result<String, Failure> {
    let mut search =
        SearchConfig::new(ChannelModel::new(n_r, config.seed), config.trials, config.q);
    if config.ordering == SearchMode::Heuristic {
        search = search.heuristic();
    }
    let outcome = ordering_search(code, &search)?;
    if config.format == Format::Json {
        return Ok(to_pretty(&json!({
            "config": config_json(config, code, n_r),
            "outcome": serde_json::to_value(&outcome).map_err(Error::from)?,
            "pattern": outcome.pattern.to_json_value(Value::Null),
        }))?);
    }
    let mut s = header(config, code, n_r);
    let order: Vec<String> = outcome
        .ordering
        .to_one_based()
        .iter()
        .map(|v| v.to_string())
        .collect();
    let mode = match outcome.mode {
        SearchMode::Exhaustive => "exhaustive",
        SearchMode::Heuristic => "heuristic",
    };
    let _ = writeln!(
        s,
        "mode: {mode}, candidates screened: {}",
        outcome.candidates_screened
    );
    let _ = writeln!(s, "best ordering: [{}]", order.join(", "));
    let _ = writeln!(
        s,
        "complexity exponent: {:.4} -> {:.4}",
        outcome.baseline_exponent, outcome.best_exponent
    );
    let trace: Vec<String> = outcome.trace.iter().map(|v| format!("{v:.4}")).collect();
    let _ = writeln!(s, "objective trace: {}", trace.join(" "));
    let _ = writeln!(s, "\n[resulting pattern]\n{}", outcome.pattern.to_ascii());
    let _ = write!(s, "[classification]\n{}", report_text(&outcome.report));
    Ok(s)
}

fn decode_sim(
    config: &RunConfig,
    code: &StbcCode,
    n_r: usize,
    err: &mut dyn Write,
) -> Result<String, Failure> {
    let constellation = Constellation::new(config.q)?;
    let mut oracle_check = config.oracle_check;
    let bits = constellation.bits_per_dimension() * code.dim() as u32;
    if oracle_check && bits > ORACLE_LIMIT_BITS {
        writeln!(
            err,
            "warning: oracle check skipped, codebook has 2^{bits} hypotheses (limit 2^{ORACLE_LIMIT_BITS})"
        )?;
        oracle_check = false;
    }
    let channel = ChannelModel::new(n_r, config.seed);
    let pattern = empirical_pattern(code, &channel, DEFAULT_TRIALS)?.pattern;
    let sim = SimConfig {
        snr_db: config.snr_db.clone(),
        trials: config.trials,
        seed: config.seed,
        n_r,
        constellation,
        oracle_check,
    };
    let rows = monte_carlo(code, &sim, Some(&pattern))?;
    if let Some(path) = &config.out {
        write_csv(&rows, path)?;
    }
    if config.format == Format::Json {
        return Ok(to_pretty(&json!({
            "config": config_json(config, code, n_r),
            "rows": serde_json::to_value(&rows).map_err(Error::from)?,
        }))?);
    }
    let mut s = header(config, code, n_r);
    s.push_str(&rows_table(&rows));
    Ok(s)
}

fn rows_table(rows: &[SimRow]) -> String {
    let mut s = format!(
        "{:>8} {:>12} {:>12} {:>12} {:>10} {:>12} {:>10}\n",
        "snr_db", "ber", "ser", "mean_nodes", "p95_nodes", "max_leaves", "oracle"
    );
    for r in rows {
        let oracle = r
            .oracle_agreement
            .map_or("-".to_string(), |a| format!("{:.2}%", 100.0 * a));
        let _ = writeln!(
            s,
            "{:>8.2} {:>12.4e} {:>12.4e} {:>12.2} {:>10} {:>12} {:>10}",
            r.snr_db, r.ber, r.ser, r.mean_nodes, r.p95_nodes, r.max_leaves, oracle
        );
    }
    s
}
