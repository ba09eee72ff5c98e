//! Channel-free orthogonality predicates on pairs of weight matrices.
//!
//! Two families are evaluated side by side:
//!
//! * the component-wise trace conditions `c1`/`c2`, which decide whether
//!   columns `i` and `j` of the equivalent channel are orthogonal for every
//!   channel realization;
//! * Hurwitz-Radon (HR) mutual orthogonality `A_iA_jᴴ + A_jA_iᴴ = 0` and the
//!   HRQF matrix `U_ij = ‖A_iA_jᴴ + A_jA_iᴴ‖²_F`.
//!
//! `c1` is `2·Re` and `c2` is `-2·Im` of the upper triangle of
//! `A_iA_jᴴ + A_jA_iᴴ`, so the two families agree pair by pair. Zeros of `R`
//! that neither family predicts come from Gram-Schmidt cancellation, which is
//! handled in [`crate::structure`].
//!
//! Symbol indices are 0-based in function arguments and 1-based in reports.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::code::StbcCode;
use crate::error::{Error, Result};
use crate::linalg::{check_realify, trace_form, CMatrix, RMatrix};

/// Relative tolerance for a condition sum to count as exactly zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Outcome of one family of trace conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Largest absolute condition sum.
    pub residual: f64,
    /// Absolute threshold the residual was compared against.
    pub threshold: f64,
}

/// Column-orthogonality prediction for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnPrediction {
    pub c1: ConditionCheck,
    pub c2: ConditionCheck,
    /// `c1 && c2`: the columns are orthogonal for every channel.
    pub orthogonal: bool,
    /// `c1 || c2`, kept for diagnostics only; not sufficient on its own.
    pub either_condition: bool,
    /// Every product `a^{(i)}_{ql}·a^{(j)}_{pl}` entering the sums is zero.
    pub disjoint_support: bool,
}

/// HR mutual orthogonality evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HrCheck {
    pub orthogonal: bool,
    /// `‖A_iA_jᴴ + A_jA_iᴴ‖_F`.
    pub frobenius: f64,
    /// Verdict from the real route `V = Ǎ_i Ǎ_jᵗ + Ǎ_j Ǎ_iᵗ = 0`.
    pub component_route: bool,
}

impl HrCheck {
    pub fn routes_agree(&self) -> bool {
        self.orthogonal == self.component_route
    }
}

/// All verdicts for one unordered pair, 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub cond_c1: bool,
    pub cond_c2: bool,
    pub hr_orthogonal: bool,
    pub hrqf_value: f64,
    pub predicted_column_orthogonality: bool,
    pub either_condition: bool,
    pub c1_residual: f64,
    pub c2_residual: f64,
}

fn validate_pair(code: &StbcCode, i: usize, j: usize) -> Result<()> {
    let dim = code.dim();
    if i == j || i >= dim || j >= dim {
        return Err(Error::InvalidPair {
            i: i + 1,
            j: j + 1,
            dim,
        });
    }
    Ok(())
}

fn pair_scale(a: &CMatrix, b: &CMatrix) -> f64 {
    ZERO_TOLERANCE * a.frobenius_norm() * b.frobenius_norm()
}

fn finish(sums: impl Iterator<Item = f64>, threshold: f64) -> ConditionCheck {
    let residual = sums.map(f64::abs).fold(0.0, f64::max);
    ConditionCheck {
        holds: residual <= threshold,
        residual,
        threshold,
    }
}

/// `Σ_l Tr(a^{(i)}_{ql} a^{(j)*}_{pl} + a^{(i)}_{pl} a^{(j)*}_{ql}) = 0` for
/// all `q ≤ p`.
pub fn check_c1(code: &StbcCode, i: usize, j: usize) -> Result<ConditionCheck> {
    validate_pair(code, i, j)?;
    let (a, b) = (code.weight(i), code.weight(j));
    let n_t = code.n_t();
    let sums = (0..n_t)
        .flat_map(|q| (q..n_t).map(move |p| (q, p)))
        .map(|(q, p)| {
            (0..code.t())
                .map(|l| trace_form(a[(q, l)] * b[(p, l)].conj() + a[(p, l)] * b[(q, l)].conj()))
                .sum::<f64>()
        });
    Ok(finish(sums, pair_scale(a, b)))
}

/// `Σ_l Tr(i·[a^{(i)}_{ql} a^{(j)*}_{pl} − a^{(i)}_{pl} a^{(j)*}_{ql}]) = 0`
/// for all `q < p`.
pub fn check_c2(code: &StbcCode, i: usize, j: usize) -> Result<ConditionCheck> {
    validate_pair(code, i, j)?;
    let (a, b) = (code.weight(i), code.weight(j));
    let n_t = code.n_t();
    let iu = Complex64::i();
    let sums = (0..n_t)
        .flat_map(|q| (q + 1..n_t).map(move |p| (q, p)))
        .map(|(q, p)| {
            (0..code.t())
                .map(|l| {
                    trace_form(iu * (a[(q, l)] * b[(p, l)].conj() - a[(p, l)] * b[(q, l)].conj()))
                })
                .sum::<f64>()
        });
    Ok(finish(sums, pair_scale(a, b)))
}

fn disjoint_support(a: &CMatrix, b: &CMatrix) -> bool {
    let n_t = a.rows();
    (0..n_t).all(|q| {
        (q..n_t).all(|p| {
            (0..a.cols()).all(|l| {
                (a[(q, l)] * b[(p, l)]).norm() == 0.0 && (a[(p, l)] * b[(q, l)]).norm() == 0.0
            })
        })
    })
}

/// Predicts whether columns `i` and `j` of `H_eq` are orthogonal for all
/// channels.
pub fn predict_column_orthogonality(
    code: &StbcCode,
    i: usize,
    j: usize,
) -> Result<ColumnPrediction> {
    let c1 = check_c1(code, i, j)?;
    let c2 = check_c2(code, i, j)?;
    Ok(ColumnPrediction {
        c1,
        c2,
        orthogonal: c1.holds && c2.holds,
        either_condition: c1.holds || c2.holds,
        disjoint_support: disjoint_support(code.weight(i), code.weight(j)),
    })
}

/// `A_iA_jᴴ + A_jA_iᴴ`.
pub fn hr_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    (a * &b.conj_transpose()).add(&(b * &a.conj_transpose()))
}

/// HR mutual orthogonality via the complex identity, cross-checked through
/// the real matrix `V`.
pub fn hr_mutual_orthogonality(code: &StbcCode, i: usize, j: usize) -> Result<HrCheck> {
    validate_pair(code, i, j)?;
    let (a, b) = (code.weight(i), code.weight(j));
    let threshold = 2.0 * pair_scale(a, b);
    let frobenius = hr_sum(a, b).frobenius_norm();
    let (ra, rb) = (check_realify(a), check_realify(b));
    let v = add_real(&(&ra * &rb.transpose()), &(&rb * &ra.transpose()));
    // ‖V‖_F = √2 ‖S‖_F for the realification used here.
    let component_route = v.frobenius_norm() <= threshold * std::f64::consts::SQRT_2;
    Ok(HrCheck {
        orthogonal: frobenius <= threshold,
        frobenius,
        component_route,
    })
}

fn add_real(a: &RMatrix, b: &RMatrix) -> RMatrix {
    a.sub(&b.scale(-1.0))
}

/// HRQF matrix `U_ij = ‖A_iA_jᴴ + A_jA_iᴴ‖²_F`, including the diagonal
/// `‖2A_iA_iᴴ‖²_F`.
pub fn hrqf_matrix(code: &StbcCode) -> RMatrix {
    let dim = code.dim();
    let mut u = RMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = hr_sum(code.weight(i), code.weight(j))
                .frobenius_norm()
                .powi(2);
            u[(i, j)] = v;
            u[(j, i)] = v;
        }
    }
    u
}

/// Pairwise HR-orthogonality graph (diagonal false).
pub fn hr_graph(code: &StbcCode) -> Vec<Vec<bool>> {
    pair_graph(code, |i, j| {
        hr_mutual_orthogonality(code, i, j)
            .expect("indices in range")
            .orthogonal
    })
}

/// Pairwise `c1 && c2` graph (diagonal false).
pub fn orthogonality_graph(code: &StbcCode) -> Vec<Vec<bool>> {
    pair_graph(code, |i, j| {
        predict_column_orthogonality(code, i, j)
            .expect("indices in range")
            .orthogonal
    })
}

fn pair_graph(code: &StbcCode, f: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    let dim = code.dim();
    let mut g = vec![vec![false; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let v = f(i, j);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    g
}

/// Verdicts for every pair `i < j` of a code.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictTable {
    pub code: String,
    pub dim: usize,
    pub verdicts: Vec<PairVerdict>,
}

impl VerdictTable {
    pub fn new(code: &StbcCode) -> Self {
        let u = hrqf_matrix(code);
        let dim = code.dim();
        let mut verdicts = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for i in 0..dim {
            for j in i + 1..dim {
                let pred = predict_column_orthogonality(code, i, j).expect("indices in range");
                let hr = hr_mutual_orthogonality(code, i, j).expect("indices in range");
                verdicts.push(PairVerdict {
                    i: i + 1,
                    j: j + 1,
                    cond_c1: pred.c1.holds,
                    cond_c2: pred.c2.holds,
                    hr_orthogonal: hr.orthogonal,
                    hrqf_value: if hr.orthogonal { 0.0 } else { u[(i, j)] },
                    predicted_column_orthogonality: pred.orthogonal,
                    either_condition: pred.either_condition,
                    c1_residual: pred.c1.residual,
                    c2_residual: pred.c2.residual,
                });
            }
        }
        Self {
            code: code.name().to_string(),
            dim,
            verdicts,
        }
    }

    /// Verdict for a 0-based pair in either order.
    pub fn get(&self, i: usize, j: usize) -> Option<&PairVerdict> {
        let (a, b) = (i.min(j) + 1, i.max(j) + 1);
        self.verdicts.iter().find(|v| v.i == a && v.j == b)
    }

    /// Condition map: `B` both conditions, `1` c1 only, `2` c2 only,
    /// `.` neither, `#` diagonal.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "condition map for {} (B = c1&c2, 1 = c1 only, 2 = c2 only, . = neither)",
            self.code
        );
        out.push_str("    ");
        for j in 1..=self.dim {
            let _ = write!(out, "{j:>3}");
        }
        out.push('\n');
        for i in 0..self.dim {
            let _ = write!(out, "{:>3} ", i + 1);
            for j in 0..self.dim {
                let ch = if i == j {
                    '#'
                } else {
                    let v = self.get(i, j).expect("all pairs present");
                    match (v.cond_c1, v.cond_c2) {
                        (true, true) => 'B',
                        (true, false) => '1',
                        (false, true) => '2',
                        (false, false) => '.',
                    }
                };
                let _ = write!(out, "{ch:>3}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One failing entry of the one-sided audit, 1-based row/column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneSidedViolation {
    pub p: usize,
    pub q: usize,
    pub real_sum: f64,
    pub imaginary_sum: f64,
}

/// Evaluates the one-sided sums `Σ_l Tr(a^{(i)}_{pl} a^{(j)*}_{ql})` and
/// `Σ_l Tr(i·a^{(i)}_{pl} a^{(j)*}_{ql})` for `q ≥ p`.
///
/// These sums are stricter than HR orthogonality off the diagonal: a pair can
/// be HR orthogonal while failing them. Returned entries are the `(p, q)`
/// positions where either sum is nonzero.
pub fn one_sided_trace_audit(
    code: &StbcCode,
    i: usize,
    j: usize,
) -> Result<Vec<OneSidedViolation>> {
    validate_pair(code, i, j)?;
    let (a, b) = (code.weight(i), code.weight(j));
    let threshold = pair_scale(a, b);
    let n_t = code.n_t();
    let mut out = Vec::new();
    for p in 0..n_t {
        for q in p..n_t {
            let z: Complex64 = (0..code.t()).map(|l| a[(p, l)] * b[(q, l)].conj()).sum();
            let real_sum = trace_form(z);
            let imaginary_sum = trace_form(Complex64::i() * z);
            if real_sum.abs() > threshold || imaginary_sum.abs() > threshold {
                out.push(OneSidedViolation {
                    p: p + 1,
                    q: q + 1,
                    real_sum,
                    imaginary_sum,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{abba, golden_canonical, silver};

    #[test]
    fn abba_cross_pair_conditions() {
        let code = abba();
        assert!(check_c1(&code, 0, 2).unwrap().holds);
        let p = predict_column_orthogonality(&code, 0, 2).unwrap();
        assert!(p.orthogonal);
        assert!(hr_mutual_orthogonality(&code, 0, 2).unwrap().orthogonal);
    }

    #[test]
    fn abba_same_group_not_predicted() {
        let p = predict_column_orthogonality(&abba(), 0, 1).unwrap();
        assert!(!p.orthogonal);
        assert!(!p.c1.holds);
        assert!(p.c2.holds);
        assert!(p.either_condition);
    }

    #[test]
    fn diagonal_pair_rejected() {
        assert!(matches!(
            check_c1(&abba(), 1, 1),
            Err(Error::InvalidPair { i: 2, j: 2, dim: 4 })
        ));
        assert!(check_c2(&abba(), 0, 4).is_err());
    }

    #[test]
    fn silver_first_block() {
        let code = silver();
        assert!(check_c1(&code, 0, 1).unwrap().holds);
        assert!(check_c2(&code, 0, 2).unwrap().holds);
        assert!(check_c2(&code, 4, 6).unwrap().holds);
    }

    #[test]
    fn golden_first_pair_c2() {
        assert!(check_c2(&golden_canonical(), 0, 1).unwrap().holds);
    }

    #[test]
    fn zero_weight_is_hr_orthogonal() {
        let a = CMatrix::identity(2);
        let z = CMatrix::zeros(2, 2);
        let code = StbcCode::new("z", 2, 2, vec![a, z], vec!["a".into(), "b".into()]).unwrap();
        let hr = hr_mutual_orthogonality(&code, 0, 1).unwrap();
        assert!(hr.orthogonal && hr.component_route);
        assert!(
            predict_column_orthogonality(&code, 0, 1)
                .unwrap()
                .disjoint_support
        );
    }

    #[test]
    fn hrqf_symmetric_and_zero_pattern() {
        let code = abba();
        let u = hrqf_matrix(&code);
        assert!(u.max_abs_diff(&u.transpose()) == 0.0);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(u[(i, j)] < 1e-24);
        }
        assert!(u[(0, 1)] > 1.0);
        // diagonal: ‖2 I‖² = 8
        assert!((u[(0, 0)] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn routes_agree_on_builtins() {
        for code in [abba(), silver(), golden_canonical()] {
            for i in 0..code.dim() {
                for j in i + 1..code.dim() {
                    let hr = hr_mutual_orthogonality(&code, i, j).unwrap();
                    assert!(hr.routes_agree());
                    let p = predict_column_orthogonality(&code, i, j).unwrap();
                    assert_eq!(p.orthogonal, hr.orthogonal, "{} ({i},{j})", code.name());
                }
            }
        }
    }

    #[test]
    fn one_sided_audit_on_silver_5_7() {
        let v = one_sided_trace_audit(&silver(), 4, 6).unwrap();
        let entry = v.iter().find(|e| e.p == 1 && e.q == 2).unwrap();
        assert!((entry.real_sum - 6.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn ascii_map_shape() {
        let table = VerdictTable::new(&abba());
        let text = table.to_ascii();
        assert_eq!(text.lines().count(), 6);
        assert!(text.lines().nth(2).unwrap().ends_with("#  2  B  B"));
        assert!(table.to_json().unwrap().contains("\"hr_orthogonal\""));
    }
}
