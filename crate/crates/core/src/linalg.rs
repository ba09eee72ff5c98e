//! Dense complex/real matrices and the complex-to-real transforms used to
//! turn the MIMO model into a real-valued lattice problem.
//!
//! Indices are 0-based here. Documentation that mentions `M_{2i-1,2j}` style
//! entries uses the usual 1-based pair notation, which maps to
//! `(2i, 2j + 1)` in code.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative norm below which a Gram-Schmidt residual counts as zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Row-major dense real matrix.
#[derive(Clone, PartialEq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("real matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in columns.iter().enumerate() {
            m.set_column(j, col);
        }
        if m.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("real matrix"));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `Aᵗ v` without forming the transpose.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows, "vector length must match row count");
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, perm.len());
        for (j, &src) in perm.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, j)] = self[(i, src)];
            }
        }
        out
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn select_rows(&self, perm: &[usize]) -> Self {
        let mut data = Vec::with_capacity(perm.len() * self.cols);
        for &src in perm {
            data.extend_from_slice(self.row(src));
        }
        Self {
            rows: perm.len(),
            cols: self.cols,
            data,
        }
    }

    /// `I_t ⊗ self`.
    pub fn kron_identity(&self, t: usize) -> Self {
        let mut out = Self::zeros(self.rows * t, self.cols * t);
        for b in 0..t {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out[(b * self.rows + i, b * self.cols + j)] = self[(i, j)];
                }
            }
        }
        out
    }

    /// Numerical rank via Gram-Schmidt with column pivoting on the residual norms.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let mut residuals: Vec<Vec<f64>> = (0..self.cols).map(|j| self.column(j)).collect();
        let scale = residuals.iter().map(|c| norm(c)).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        let mut rank = 0;
        while !residuals.is_empty() {
            let (best, best_norm) = residuals
                .iter()
                .enumerate()
                .map(|(k, c)| (k, norm(c)))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best_norm <= rel_tol * scale {
                break;
            }
            let q: Vec<f64> = residuals
                .swap_remove(best)
                .iter()
                .map(|x| x / best_norm)
                .collect();
            for c in &mut residuals {
                let p = dot(&q, c);
                for (ci, qi) in c.iter_mut().zip(&q) {
                    *ci -= p * qi;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RMatrix {
    type Output = RMatrix;
    fn mul(self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = RMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>10.4}")).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("complex matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Column-wise stacking, `vec(A)`.
    pub fn vec(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:>8.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn finite(x: Complex64) -> Result<Complex64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}

/// `x ↦ [Re x, Im x]`.
pub fn tilde(x: Complex64) -> Result<[f64; 2]> {
    let x = finite(x)?;
    Ok([x.re, x.im])
}

/// Interleaved realification `[Re x_1, Im x_1, …, Re x_n, Im x_n]`.
pub fn tilde_vec(x: &[Complex64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * x.len());
    for &z in x {
        out.extend_from_slice(&tilde(z)?);
    }
    Ok(out)
}

/// Inverse of [`tilde_vec`].
pub fn untilde_vec(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

/// `x ↦ [-Im x, Re x]`, the realification of `i·x`.
pub fn barbar(x: Complex64) -> Result<[f64; 2]> {
    let x = finite(x)?;
    Ok([-x.im, x.re])
}

/// The 2×2 real block `[[Re, -Im], [Im, Re]]` representing multiplication by `x`.
pub fn check(x: Complex64) -> [[f64; 2]; 2] {
    [[x.re, -x.im], [x.im, x.re]]
}

/// Replaces every entry of `a` by its [`check`] block.
pub fn check_realify(a: &CMatrix) -> RMatrix {
    let mut out = RMatrix::zeros(2 * a.rows, 2 * a.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let b = check(a[(i, j)]);
            out[(2 * i, 2 * j)] = b[0][0];
            out[(2 * i, 2 * j + 1)] = b[0][1];
            out[(2 * i + 1, 2 * j)] = b[1][0];
            out[(2 * i + 1, 2 * j + 1)] = b[1][1];
        }
    }
    out
}

/// Trace of `x` over ℚ(i)/ℚ, i.e. `2·Re(x)`.
pub fn trace_form(x: Complex64) -> f64 {
    2.0 * x.re
}

/// Thin QR factors with orthonormal `q` columns and upper-triangular `r`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: RMatrix,
    pub r: RMatrix,
}

/// Gram-Schmidt QR of a tall full-column-rank matrix.
///
/// Uses the modified (re-projecting) variant. The diagonal of `r` holds the
/// residual norms and is therefore strictly positive, which makes the
/// factorization unique and reproducible.
pub fn gram_schmidt_qr(h: &RMatrix) -> Result<QrFactors> {
    let (m, n) = (h.rows(), h.cols());
    if m < n {
        return Err(Error::DimensionMismatch(format!(
            "QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut qcols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut r = RMatrix::zeros(n, n);
    for j in 0..n {
        let h_j = h.column(j);
        let h_norm = norm(&h_j);
        let mut v = h_j;
        for (i, q_i) in qcols.iter().enumerate() {
            let r_ij = dot(q_i, &v);
            r[(i, j)] = r_ij;
            for (vk, qk) in v.iter_mut().zip(q_i) {
                *vk -= r_ij * qk;
            }
        }
        let residual = norm(&v);
        if residual.is_nan() || residual <= RANK_TOLERANCE * h_norm {
            return Err(Error::RankDeficient {
                column: j,
                residual,
            });
        }
        r[(j, j)] = residual;
        qcols.push(v.into_iter().map(|x| x / residual).collect());
    }
    let q = RMatrix::from_columns(&qcols)?;
    Ok(QrFactors { q, r })
}

/// `M = check(H)ᵗ check(H)` assembled entry by entry from trace forms.
///
/// With `g_ij = Σ_n h_{n,i} conj(h_{n,j})` the entries are
/// `M_{2i,2j} = M_{2i+1,2j+1} = Tr(g_ij)/2` and
/// `M_{2i,2j+1} = -M_{2i+1,2j} = -Tr(i·g_ij)/2` (0-based). Computing them
/// this way makes the structurally equal entries identical and the
/// `M_{2i,2i+1}` entries exact zeros.
pub fn gram_matrix_m(h: &CMatrix) -> RMatrix {
    let n_t = h.cols();
    let mut m = RMatrix::zeros(2 * n_t, 2 * n_t);
    let i_unit = Complex64::new(0.0, 1.0);
    for i in 0..n_t {
        for j in 0..n_t {
            let g: Complex64 = (0..h.rows()).map(|n| h[(n, i)] * h[(n, j)].conj()).sum();
            let sym = 0.5 * trace_form(g);
            let skew = -0.5 * trace_form(i_unit * g);
            m[(2 * i, 2 * j)] = sym;
            m[(2 * i + 1, 2 * j + 1)] = sym;
            m[(2 * i, 2 * j + 1)] = skew;
            m[(2 * i + 1, 2 * j)] = -skew;
        }
    }
    m
}

/// Largest violation of each of the four structural identities of `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSymmetryResiduals {
    /// `|M_{2i-1,2i-1} - M_{2i,2i}|`
    pub diagonal_pairs_equal: f64,
    /// `|M_{2i-1,2i}|`
    pub diagonal_pair_zero: f64,
    /// `|M_{2i-1,2j-1} - M_{2i,2j}|`, `j > i`
    pub off_diagonal_equal: f64,
    /// `|M_{2i,2j-1} + M_{2i-1,2j}|`, `j > i`
    pub off_diagonal_antisymmetric: f64,
}

impl GramSymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.diagonal_pairs_equal
            .max(self.diagonal_pair_zero)
            .max(self.off_diagonal_equal)
            .max(self.off_diagonal_antisymmetric)
    }
}

pub fn gram_symmetry_residuals(m: &RMatrix) -> GramSymmetryResiduals {
    let n_t = m.rows() / 2;
    let mut res = GramSymmetryResiduals {
        diagonal_pairs_equal: 0.0,
        diagonal_pair_zero: 0.0,
        off_diagonal_equal: 0.0,
        off_diagonal_antisymmetric: 0.0,
    };
    for i in 0..n_t {
        let (a, b) = (2 * i, 2 * i + 1);
        res.diagonal_pairs_equal = res.diagonal_pairs_equal.max((m[(a, a)] - m[(b, b)]).abs());
        res.diagonal_pair_zero = res.diagonal_pair_zero.max(m[(a, b)].abs());
        for j in i + 1..n_t {
            let (c, d) = (2 * j, 2 * j + 1);
            res.off_diagonal_equal = res.off_diagonal_equal.max((m[(a, c)] - m[(b, d)]).abs());
            res.off_diagonal_antisymmetric = res
                .off_diagonal_antisymmetric
                .max((m[(b, c)] + m[(a, d)]).abs());
        }
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lcg_matrix(rows: usize, cols: usize, seed: u64) -> RMatrix {
        let mut s = seed;
        let data = (0..rows * cols)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect();
        RMatrix::new(rows, cols, data).unwrap()
    }

    #[test]
    fn tilde_and_barbar_examples() {
        assert_eq!(tilde(c(3.0, 4.0)).unwrap(), [3.0, 4.0]);
        assert_eq!(tilde(c(0.0, 0.0)).unwrap(), [0.0, 0.0]);
        assert_eq!(
            tilde_vec(&[c(1.0, 1.0), c(2.0, -1.0)]).unwrap(),
            vec![1.0, 1.0, 2.0, -1.0]
        );
        assert_eq!(barbar(c(0.0, 1.0)).unwrap(), [-1.0, 0.0]);
        assert_eq!(barbar(c(1.0, 0.0)).unwrap(), [0.0, 1.0]);
        assert_eq!(barbar(c(3.0, 4.0)).unwrap(), [-4.0, 3.0]);
    }

    #[test]
    fn non_finite_scalars_rejected() {
        assert!(matches!(tilde(c(f64::NAN, 0.0)), Err(Error::NonFinite(_))));
        assert!(matches!(
            barbar(c(0.0, f64::INFINITY)),
            Err(Error::NonFinite(_))
        ));
        assert!(tilde_vec(&[c(1.0, 0.0), c(f64::NAN, 1.0)]).is_err());
        assert!(CMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn check_of_i_and_identity() {
        let i_mat = CMatrix::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        let ci = check_realify(&i_mat);
        assert_eq!(ci.as_slice(), &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(check_realify(&CMatrix::identity(2)), RMatrix::identity(4));
    }

    #[test]
    fn trace_form_examples() {
        assert_eq!(trace_form(c(1.0, 2.0)), 2.0);
        assert_eq!(trace_form(c(0.0, 1.0)), 0.0);
        assert_eq!(trace_form(c(-3.0, 0.0)), -6.0);
    }

    #[test]
    fn qr_of_identity_is_identity() {
        let f = gram_schmidt_qr(&RMatrix::identity(4)).unwrap();
        assert_eq!(f.q, RMatrix::identity(4));
        assert_eq!(f.r, RMatrix::identity(4));
    }

    #[test]
    fn qr_reconstructs_random_square() {
        let h = lcg_matrix(8, 8, 7);
        let f = gram_schmidt_qr(&h).unwrap();
        let recon = &f.q * &f.r;
        assert!(h.sub(&recon).frobenius_norm() / h.frobenius_norm() < 1e-10);
        let qtq = &f.q.transpose() * &f.q;
        assert!(qtq.sub(&RMatrix::identity(8)).frobenius_norm() < 1e-10);
        for i in 0..8 {
            assert!(f.r[(i, i)] > 0.0);
            for j in 0..i {
                assert_eq!(f.r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn qr_is_bit_reproducible() {
        let h = lcg_matrix(6, 4, 99);
        let a = gram_schmidt_qr(&h).unwrap();
        let b = gram_schmidt_qr(&h).unwrap();
        assert_eq!(a.q, b.q);
        assert_eq!(a.r, b.r);
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let mut h = lcg_matrix(5, 3, 3);
        let c0 = h.column(0);
        h.set_column(2, &c0);
        match gram_schmidt_qr(&h) {
            Err(Error::RankDeficient { column, .. }) => assert_eq!(column, 2),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn wide_matrix_rejected() {
        assert!(matches!(
            gram_schmidt_qr(&RMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn gram_matrix_of_identity() {
        assert_eq!(gram_matrix_m(&CMatrix::identity(2)), RMatrix::identity(4));
    }

    #[test]
    fn gram_matrix_matches_direct_product() {
        let h = CMatrix::from_rows(&[
            vec![c(0.3, -1.2), c(0.7, 0.1), c(-0.4, 0.9)],
            vec![c(1.1, 0.5), c(-0.2, -0.8), c(0.6, 0.6)],
        ])
        .unwrap();
        let hc = check_realify(&h);
        let direct = &hc.transpose() * &hc;
        let m = gram_matrix_m(&h);
        assert!(m.max_abs_diff(&direct) < 1e-12);
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m[(0, 0)], m[(1, 1)]);
        assert_eq!(gram_symmetry_residuals(&m).max(), 0.0);
    }

    #[test]
    fn rank_detects_dependence() {
        let mut h = lcg_matrix(6, 4, 11);
        assert_eq!(h.rank(1e-10), 4);
        let sum: Vec<f64> = h
            .column(0)
            .iter()
            .zip(h.column(1))
            .map(|(a, b)| a + 2.0 * b)
            .collect();
        h.set_column(3, &sum);
        assert_eq!(h.rank(1e-10), 3);
    }

    #[test]
    fn kron_identity_is_block_diagonal() {
        let a = RMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let k = a.kron_identity(2);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(2, 2)], 1.0);
        assert_eq!(k[(3, 3)], 4.0);
        assert_eq!(k[(0, 2)], 0.0);
    }
}
