//! Zero structure of the `R` factor: measurement over random channels,
//! channel-free prediction, classification into decodability families,
//! complexity accounting and symbol-ordering search.

mod bo;
pub(crate) mod channel;
mod classify;
mod pattern;
mod predict;
mod search;

pub use bo::{bo_candidates, bo_evidence, BoEvidence, BoParams, ETE_TOLERANCE};
pub use channel::{
    complex_gaussian, empirical_pattern, empirical_pattern_row_permuted, equivalent_channel,
    ChannelModel, EmpiricalPattern, DEFAULT_SEED, DEFAULT_TRIALS, EMPIRICAL_ZERO_TOLERANCE,
    MAX_REDRAWS,
};
pub use classify::{
    best_fast_split, classify, classify_pattern, compare_hrqf, fsd_complexity, BoFit,
    ClassificationReport, Family, FastWitness, FsdComplexity, HrqfMismatch, MismatchDirection,
    OrderedPartition, DEFAULT_Q,
};
pub use pattern::{PatternCounts, ZeroPattern};
pub use predict::{
    channel_free_pattern, hrqf_predicted_pattern, predicted_pattern, predicted_pattern_with_probes,
    probe_receive_antennas, propagate,
};
pub use search::{
    ordering_search, SearchConfig, SearchMode, SearchOutcome, DEFAULT_CANDIDATE_LIMIT,
    EXHAUSTIVE_MAX_DIM,
};
