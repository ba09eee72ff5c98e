use thiserror::Error;

/// Errors raised by the analysis and decoding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is rank deficient: column {column} has residual norm {residual:e}")]
    RankDeficient { column: usize, residual: f64 },

    #[error("invalid symbol indices ({i}, {j}) for a code with {dim} real symbols")]
    InvalidPair { i: usize, j: usize, dim: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown built-in code `{0}` (expected abba, silver, golden or golden-canonical)")]
    UnknownCode(String),

    #[error("code schema violation: {0}")]
    Schema(String),

    #[error(
        "under-determined system: 2*n_r*T = {rows} < 2*kappa = {cols}; \
         QR needs n_r >= kappa/T"
    )]
    UnderDetermined { rows: usize, cols: usize },

    #[error("too many redraws: {0} consecutive rank-deficient channel draws")]
    TooManyRedraws(usize),

    #[error("codebook too large for exhaustive search: 2^{bits} hypotheses (limit 2^{limit})")]
    CodebookTooLarge { bits: u32, limit: u32 },

    #[error("constellation must use an even number of bits per symbol, got {0}")]
    OddConstellation(u32),

    #[error("ordering search space overflow: {candidates} candidates exceeds limit {limit}")]
    SearchOverflow { candidates: u128, limit: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
