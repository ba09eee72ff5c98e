//! Zero-structure analysis and fast sphere decoding for linear
//! space-time block codes.
//!
//! A code is a list of complex weight matrices, one per real symbol. Under a
//! Rayleigh channel it induces a real equivalent channel `H_eq = QR`, and the
//! positions where `R` vanishes for every channel decide how cheaply the code
//! can be decoded.
//!
//! * [`code`] holds the code model, built-in codes and the JSON file format.
//! * [`criteria`] evaluates channel-free orthogonality conditions per pair.
//! * [`structure`] measures and predicts zero patterns, classifies them
//!   (g-group, fast-decodable, block-orthogonal), compares them with the
//!   HRQF prediction and searches symbol orderings.
//! * [`decoder`] runs a depth-first sphere decoder that follows the pattern,
//!   an exhaustive oracle, and Monte Carlo BER/SER simulation.
//! * [`cli`] backs the `stbc-fsd` binary.
//!
//! ```
//! use stbc_fsd::code::abba;
//! use stbc_fsd::structure::{classify, empirical_pattern, ChannelModel, Family};
//!
//! let code = abba();
//! let measured = empirical_pattern(&code, &ChannelModel::new(2, 42), 100).unwrap();
//! let report = classify(&code, &measured);
//! assert_eq!(report.family, Family::GGroup);
//! assert_eq!(report.groups.groups_one_based(), vec![vec![1, 2], vec![3, 4]]);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod code;
pub mod criteria;
pub mod decoder;
pub mod error;
pub mod linalg;
pub mod parallel;
pub mod structure;

pub use error::{Error, Result};
