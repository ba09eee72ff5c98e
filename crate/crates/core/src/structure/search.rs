//! Search over real-symbol orderings for the lowest decoding complexity.
//!
//! Only column orderings matter: permuting the rows of `H_eq` leaves `R`
//! unchanged. Candidates are screened with the channel-free prediction and
//! the best few are confirmed on measured patterns.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use serde::Serialize;

use super::channel::{empirical_pattern, ChannelModel, EmpiricalPattern};
use super::classify::{classify, classify_pattern, fsd_complexity, ClassificationReport};
use super::pattern::ZeroPattern;
use super::predict::propagate;
use crate::code::{StbcCode, SymbolOrdering};
use crate::criteria::orthogonality_graph;
use crate::error::{Error, Result};

/// Largest `2κ` searched exhaustively.
pub const EXHAUSTIVE_MAX_DIM: usize = 12;

/// Default cap on screened candidates in exhaustive mode.
pub const DEFAULT_CANDIDATE_LIMIT: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Heuristic,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub channel: ChannelModel,
    pub trials: usize,
    pub q: u32,
    pub mode: SearchMode,
    pub candidate_limit: u128,
    /// Screened candidates confirmed on measured patterns.
    pub confirm_top: usize,
}

impl SearchConfig {
    pub fn new(channel: ChannelModel, trials: usize, q: u32) -> Self {
        Self {
            channel,
            trials,
            q,
            mode: SearchMode::Exhaustive,
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            confirm_top: 4,
        }
    }

    pub fn heuristic(mut self) -> Self {
        self.mode = SearchMode::Heuristic;
        self
    }
}

/// Result of an ordering search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub mode: SearchMode,
    /// Best ordering, as indices into the input code's symbols.
    #[serde(serialize_with = "one_based")]
    pub ordering: SymbolOrdering,
    pub baseline_exponent: f64,
    pub best_exponent: f64,
    pub candidates_screened: u64,
    /// Objective after each accepted step (heuristic mode), or the baseline
    /// and final values (exhaustive mode). Never increases.
    pub trace: Vec<f64>,
    pub report: ClassificationReport,
    #[serde(skip)]
    pub pattern: ZeroPattern,
}

fn one_based<S: serde::Serializer>(
    o: &SymbolOrdering,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    o.to_one_based().serialize(s)
}

/// Objective value of one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    exponent: f64,
    zeros: usize,
}

impl Score {
    fn better_than(&self, other: &Score) -> bool {
        self.cmp_key(other) == Ordering::Less
    }

    fn cmp_key(&self, other: &Score) -> Ordering {
        self.exponent
            .total_cmp(&other.exponent)
            .then(Reverse(self.zeros).cmp(&Reverse(other.zeros)))
    }
}

fn permuted_graph(graph: &[Vec<bool>], perm: &[usize]) -> Vec<Vec<bool>> {
    perm.iter()
        .map(|&a| perm.iter().map(|&b| graph[a][b]).collect())
        .collect()
}

fn screen(graph: &[Vec<bool>], perm: &[usize], q: u32) -> Score {
    let pattern = propagate(&permuted_graph(graph, perm), None);
    let report = classify_pattern(&pattern);
    Score {
        exponent: fsd_complexity(&report, q).exponent,
        zeros: pattern.zero_count(),
    }
}

/// Symbols with identical orthogonality neighbourhoods are interchangeable
/// for the channel-free prediction. Returns a class id per symbol, picking
/// whichever twin notion gives the smaller search space.
fn twin_classes(graph: &[Vec<bool>]) -> Vec<usize> {
    let dim = graph.len();
    let classes_by = |closed: bool| -> Vec<usize> {
        let mut ids: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        (0..dim)
            .map(|a| {
                let mut key = graph[a].clone();
                key[a] = closed;
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect()
    };
    let open = classes_by(false);
    let closed = classes_by(true);
    if multiset_count(&open) <= multiset_count(&closed) {
        open
    } else {
        closed
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn multiset_count(labels: &[usize]) -> u128 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1;
    }
    counts
        .values()
        .fold(factorial(labels.len()), |acc, &c| acc / factorial(c))
}

/// In-place lexicographic successor; `false` after the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Turns a sequence of class labels into a permutation, filling each class's
/// slots with its members in increasing order.
fn materialize(labels: &[usize], members: &BTreeMap<usize, Vec<usize>>) -> Vec<usize> {
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let k = next.entry(*l).or_default();
            let m = members[l][*k];
            *k += 1;
            m
        })
        .collect()
}

fn confirm(
    code: &StbcCode,
    perm: &[usize],
    config: &SearchConfig,
) -> Result<(SymbolOrdering, EmpiricalPattern, ClassificationReport)> {
    let ordering = SymbolOrdering::from_zero_based(perm.to_vec())?;
    let reordered = code.apply_ordering(&ordering)?;
    let emp = empirical_pattern(&reordered, &config.channel, config.trials)?;
    let report = classify(&reordered, &emp).with_constellation_bits(config.q);
    Ok((ordering, emp, report))
}

fn empirical_score(emp: &EmpiricalPattern, report: &ClassificationReport) -> Score {
    Score {
        exponent: report.fsd.exponent,
        zeros: emp.pattern.zero_count(),
    }
}

/// Searches symbol orderings of `code` for minimal FSD complexity; ties go
/// to more structural zeros, then to the lexicographically smallest
/// ordering.
pub fn ordering_search(code: &StbcCode, config: &SearchConfig) -> Result<SearchOutcome> {
    match config.mode {
        SearchMode::Exhaustive => exhaustive(code, config),
        SearchMode::Heuristic => heuristic(code, config),
    }
}

fn exhaustive(code: &StbcCode, config: &SearchConfig) -> Result<SearchOutcome> {
    let dim = code.dim();
    let graph = orthogonality_graph(code);
    let mut labels = twin_classes(&graph);
    let candidates = multiset_count(&labels);
    let limit = config.candidate_limit;
    if dim > EXHAUSTIVE_MAX_DIM || candidates > limit {
        return Err(Error::SearchOverflow { candidates, limit });
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, &l) in labels.iter().enumerate() {
        members.entry(l).or_default().push(a);
    }
    labels.sort_unstable();

    let keep = config.confirm_top.max(1);
    let mut top: Vec<(Score, Vec<usize>)> = Vec::with_capacity(keep + 1);
    let mut screened = 0u64;
    loop {
        let perm = materialize(&labels, &members);
        let score = screen(&graph, &perm, config.q);
        screened += 1;
        let pos = top
            .iter()
            .position(|(s, p)| score.cmp_key(s).then_with(|| perm.cmp(p)) == Ordering::Less)
            .unwrap_or(top.len());
        if pos < keep {
            top.insert(pos, (score, perm));
            top.truncate(keep);
        }
        if !next_permutation(&mut labels) {
            break;
        }
    }

    let identity: Vec<usize> = (0..dim).collect();
    let (_, base_emp, base_report) = confirm(code, &identity, config)?;
    let baseline_exponent = base_report.fsd.exponent;
    let mut best = (
        empirical_score(&base_emp, &base_report),
        identity,
        base_emp,
        base_report,
    );
    for (_, perm) in top {
        if perm == best.1 {
            continue;
        }
        let (_, emp, report) = confirm(code, &perm, config)?;
        let score = empirical_score(&emp, &report);
        let order = score.cmp_key(&best.0).then_with(|| perm.cmp(&best.1));
        if order == Ordering::Less {
            best = (score, perm, emp, report);
        }
    }
    let (score, perm, emp, report) = best;
    Ok(SearchOutcome {
        mode: SearchMode::Exhaustive,
        ordering: SymbolOrdering::from_zero_based(perm)?,
        baseline_exponent,
        best_exponent: score.exponent,
        candidates_screened: screened,
        trace: vec![baseline_exponent, score.exponent],
        report,
        pattern: emp.pattern,
    })
}

/// Groups of symbols that are not separable from each other: connected
/// components of the non-orthogonality graph.
fn inseparable_components(graph: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let dim = graph.len();
    let mut comp = vec![usize::MAX; dim];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..dim {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(a) = stack.pop() {
            members.push(a);
            for b in 0..dim {
                if b != a && !graph[a][b] && comp[b] == usize::MAX {
                    comp[b] = id;
                    stack.push(b);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out.sort_by_key(|m| (m.len(), m[0]));
    out
}

fn heuristic(code: &StbcCode, config: &SearchConfig) -> Result<SearchOutcome> {
    let dim = code.dim();
    let graph = orthogonality_graph(code);
    let mut current: Vec<usize> = (0..dim).collect();
    let mut score = screen(&graph, &current, config.q);
    let baseline_exponent = score.exponent;
    let mut trace = vec![score.exponent];
    let mut screened = 1u64;

    let greedy: Vec<usize> = inseparable_components(&graph).concat();
    let greedy_score = screen(&graph, &greedy, config.q);
    screened += 1;
    if greedy_score.better_than(&score) {
        current = greedy;
        score = greedy_score;
        trace.push(score.exponent);
    }

    const MAX_PASSES: usize = 64;
    for _ in 0..MAX_PASSES {
        let mut improved = false;
        for i in 0..dim {
            for j in i + 1..dim {
                current.swap(i, j);
                let s = screen(&graph, &current, config.q);
                screened += 1;
                if s.better_than(&score) {
                    score = s;
                    trace.push(score.exponent);
                    improved = true;
                } else {
                    current.swap(i, j);
                }
            }
        }
        if !improved {
            break;
        }
    }

    let (ordering, emp, report) = confirm(code, &current, config)?;
    Ok(SearchOutcome {
        mode: SearchMode::Heuristic,
        ordering,
        baseline_exponent,
        best_exponent: report.fsd.exponent,
        candidates_screened: screened,
        trace,
        report,
        pattern: emp.pattern,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(&[0, 0, 1, 1]), 6);
        assert_eq!(multiset_count(&[0, 1, 2, 3]), 24);
        assert_eq!(multiset_count(&[0, 0, 1, 1, 2, 2, 3, 3]), 2520);
    }

    #[test]
    fn permutation_successor() {
        let mut v = vec![0, 0, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn materialize_fills_in_order() {
        let mut members = BTreeMap::new();
        members.insert(0, vec![0, 2]);
        members.insert(1, vec![1, 3]);
        assert_eq!(materialize(&[1, 0, 0, 1], &members), vec![1, 0, 2, 3]);
    }

    #[test]
    fn components_split_abba() {
        let g = vec![
            vec![false, false, true, true],
            vec![false, false, true, true],
            vec![true, true, false, false],
            vec![true, true, false, false],
        ];
        assert_eq!(inseparable_components(&g), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(twin_classes(&g), vec![0, 0, 1, 1]);
    }
}
