use std::cmp::Reverse;
use std::ops::Range;

use serde::{Serialize, Serializer};

use super::bo::{bo_candidates, bo_evidence, pattern_matches, BoEvidence, BoParams};
use super::channel::EmpiricalPattern;
use super::pattern::ZeroPattern;
use super::predict::hrqf_predicted_pattern;
use crate::code::StbcCode;
use crate::criteria::{hrqf_matrix, orthogonality_graph};
use crate::error::{Error, Result};

/// Constellation bits assumed when a report is built without an explicit `q`.
pub const DEFAULT_Q: u32 = 4;

/// Decodability families, most specific last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Unstructured,
    GGroup,
    FastDecodable,
    FastGroupDecodable,
    BlockOrthogonal,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Unstructured => "unstructured",
            Family::GGroup => "g_group",
            Family::FastDecodable => "fast_decodable",
            Family::FastGroupDecodable => "fast_group_decodable",
            Family::BlockOrthogonal => "block_orthogonal",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Contiguous groups `{offset+1..offset+K_1}, {…+K_2}, …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    offset: usize,
    sizes: Vec<usize>,
}

impl OrderedPartition {
    pub fn new(offset: usize, sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "ordered partition needs nonempty groups, got {sizes:?}"
            )));
        }
        Ok(Self { offset, sizes })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of groups `g`.
    pub fn g(&self) -> usize {
        self.sizes.len()
    }

    /// Number of covered symbols.
    pub fn len(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn end(&self) -> usize {
        self.offset + self.len()
    }

    /// 0-based index ranges.
    pub fn groups(&self) -> Vec<Range<usize>> {
        let mut start = self.offset;
        self.sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect()
    }

    /// 1-based index lists.
    pub fn groups_one_based(&self) -> Vec<Vec<usize>> {
        self.groups()
            .into_iter()
            .map(|r| (r.start + 1..=r.end).collect())
            .collect()
    }
}

impl Serialize for OrderedPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OrderedPartition", 2)?;
        st.serialize_field("groups", &self.groups_one_based())?;
        st.serialize_field("sizes", &self.sizes)?;
        st.end()
    }
}

/// Fast-decodable split of a range: a block-diagonal head `Δ` followed by a
/// tail that is searched jointly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FastWitness {
    /// Partition of the head `Δ`; its length is `L`.
    pub head: OrderedPartition,
    /// Number of tail symbols searched before the head groups.
    pub tail: usize,
}

impl FastWitness {
    pub fn l(&self) -> usize {
        self.head.len()
    }

    pub fn range(&self) -> Range<usize> {
        self.head.offset()..self.head.end() + self.tail
    }

    pub fn tail_range(&self) -> Range<usize> {
        self.head.end()..self.head.end() + self.tail
    }
}

/// Best fast split of a range whose pattern is a single block: minimizes
/// `tail + max K_i`, ties to longer heads and then more groups.
pub fn best_fast_split(pattern: &ZeroPattern, range: Range<usize>) -> Option<FastWitness> {
    let len = range.len();
    (2..len)
        .map(|l| {
            (
                l,
                pattern.finest_block_partition(range.start..range.start + l),
            )
        })
        .filter(|(_, sizes)| sizes.len() >= 2)
        .min_by_key(|(l, sizes)| {
            let cost = (len - l) + sizes.iter().copied().max().unwrap_or(0);
            (cost, Reverse(*l), Reverse(sizes.len()))
        })
        .map(|(l, sizes)| FastWitness {
            head: OrderedPartition::new(range.start, sizes).expect("nonempty groups"),
            tail: len - l,
        })
}

/// Fitted block-orthogonal structure with the evidence for each condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoFit {
    pub params: BoParams,
    pub evidence: BoEvidence,
    pub implied_zeros: usize,
}

/// Where the HRQF prediction and the measured pattern disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchDirection {
    /// HRQF predicts a zero that is measured nonzero.
    Unsound,
    /// Measured zero that HRQF does not predict.
    Incomplete,
}

/// One disagreement, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HrqfMismatch {
    pub i: usize,
    pub j: usize,
    pub direction: MismatchDirection,
    /// `U_ij` for the pair.
    pub u_value: f64,
}

/// Lists entries where the HRQF-predicted pattern and `empirical` differ.
pub fn compare_hrqf(code: &StbcCode, empirical: &ZeroPattern) -> Vec<HrqfMismatch> {
    let hrqf = hrqf_predicted_pattern(code);
    let u = hrqf_matrix(code);
    let unsound = hrqf
        .difference(empirical)
        .into_iter()
        .map(|(i, j)| HrqfMismatch {
            i: i + 1,
            j: j + 1,
            direction: MismatchDirection::Unsound,
            u_value: u[(i, j)],
        });
    let incomplete = empirical
        .difference(&hrqf)
        .into_iter()
        .map(|(i, j)| HrqfMismatch {
            i: i + 1,
            j: j + 1,
            direction: MismatchDirection::Incomplete,
            u_value: u[(i, j)],
        });
    unsound.chain(incomplete).collect()
}

/// Worst-case metric-evaluation count for `M = 2^{q/2}` levels per real
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FsdComplexity {
    pub q: u32,
    pub count: f64,
    pub exponent: f64,
    pub exhaustive_exponent: f64,
}

/// Classification of a measured zero pattern with its witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub family: Family,
    pub dim: usize,
    /// Finest block-diagonal partition of all symbols (`g = 1` if none).
    pub groups: OrderedPartition,
    /// Fast split inside each group, when one exists.
    pub group_fast: Vec<Option<FastWitness>>,
    pub bo: Option<BoFit>,
    pub fsd: FsdComplexity,
    pub hrqf_mismatches: Vec<HrqfMismatch>,
}

impl ClassificationReport {
    /// Fast witness of a single-group code.
    pub fn fast(&self) -> Option<&FastWitness> {
        match self.groups.g() {
            1 => self.group_fast[0].as_ref(),
            _ => None,
        }
    }

    pub fn bo_params(&self) -> Option<BoParams> {
        self.bo.as_ref().map(|b| b.params)
    }

    /// Recomputes the complexity for another constellation size.
    pub fn with_constellation_bits(mut self, q: u32) -> Self {
        self.fsd = fsd_complexity(&self, q);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Structural classification of a pattern, without block-orthogonal fitting
/// or HRQF comparison (both need the code).
pub fn classify_pattern(pattern: &ZeroPattern) -> ClassificationReport {
    let dim = pattern.dim();
    let groups =
        OrderedPartition::new(0, pattern.finest_block_partition(0..dim)).expect("dim >= 1");
    let group_fast: Vec<Option<FastWitness>> = groups
        .groups()
        .into_iter()
        .map(|r| best_fast_split(pattern, r))
        .collect();
    let any_fast = group_fast.iter().any(Option::is_some);
    let family = match (groups.g() > 1, any_fast) {
        (true, true) => Family::FastGroupDecodable,
        (true, false) => Family::GGroup,
        (false, true) => Family::FastDecodable,
        (false, false) => Family::Unstructured,
    };
    let mut report = ClassificationReport {
        family,
        dim,
        groups,
        group_fast,
        bo: None,
        fsd: FsdComplexity {
            q: DEFAULT_Q,
            count: 0.0,
            exponent: 0.0,
            exhaustive_exponent: 0.0,
        },
        hrqf_mismatches: Vec::new(),
    };
    report.fsd = fsd_complexity(&report, DEFAULT_Q);
    report
}

/// Classifies a code from its measured pattern. Block-orthogonal parameters
/// are fitted on the sampled `R` factors; among valid fits the one implying
/// the most zeros wins (ties: larger `Γ`, then larger `k`).
pub fn classify(code: &StbcCode, empirical: &EmpiricalPattern) -> ClassificationReport {
    let mut report = classify_pattern(&empirical.pattern);
    if report.family == Family::FastDecodable {
        let graph = orthogonality_graph(code);
        report.bo = bo_candidates(code.dim())
            .into_iter()
            .filter(|&p| pattern_matches(&empirical.pattern, p))
            .map(|p| bo_evidence(&graph, &empirical.samples, p))
            .filter(BoEvidence::holds)
            .map(|evidence| {
                let p = evidence.params;
                BoFit {
                    params: p,
                    evidence,
                    implied_zeros: p.implied_zeros().len(),
                }
            })
            .max_by_key(|f| (f.implied_zeros, f.params.super_blocks, f.params.k));
        if report.bo.is_some() {
            report.family = Family::BlockOrthogonal;
        }
    }
    report.hrqf_mismatches = compare_hrqf(code, &empirical.pattern);
    report
}

/// Worst-case count: exhaustive `M^{2κ}`, g-group `Σ M^{K_i}`, fast
/// `M^{2κ−L}·M^{max K_i}`; fast-group sums the per-group counts and
/// block-orthogonal codes use their fast witness.
pub fn fsd_complexity(report: &ClassificationReport, q: u32) -> FsdComplexity {
    let m = 2f64.powf(q as f64 / 2.0);
    let count: f64 = report
        .groups
        .groups()
        .iter()
        .zip(&report.group_fast)
        .map(|(r, fast)| match fast {
            Some(w) => m.powi(w.tail as i32) * m.powi(w.head.max_size() as i32),
            None => m.powi(r.len() as i32),
        })
        .sum();
    FsdComplexity {
        q,
        count,
        exponent: count.log2(),
        exhaustive_exponent: report.dim as f64 * (q as f64 / 2.0),
    }
}
