//! Linear dispersion codes: weight matrices, codewords, the real generator
//! matrix, and symbol orderings.

mod builtins;
mod file;

pub use builtins::{abba, builtin, golden, golden_canonical, silver, BUILTIN_NAMES};
pub use file::{load_code, save_code, CodeFile};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tilde_vec, CMatrix, RMatrix};

/// Singular-value style tolerance for the linear-independence check on `G`.
pub const INDEPENDENCE_TOLERANCE: f64 = 1e-10;

/// A linear STBC `X = Σ_l x_l A_l` over `2κ` real symbols.
///
/// The weight list order *is* the real-symbol order; reordering symbols
/// reorders the weights (see [`StbcCode::apply_ordering`]).
#[derive(Debug, Clone, PartialEq)]
pub struct StbcCode {
    name: String,
    n_t: usize,
    t: usize,
    weights: Vec<CMatrix>,
    symbol_labels: Vec<String>,
}

impl StbcCode {
    pub fn new(
        name: impl Into<String>,
        n_t: usize,
        t: usize,
        weights: Vec<CMatrix>,
        symbol_labels: Vec<String>,
    ) -> Result<Self> {
        if n_t == 0 || t == 0 {
            return Err(Error::Schema("n_t and T must be positive".into()));
        }
        if weights.is_empty() || !weights.len().is_multiple_of(2) {
            return Err(Error::Schema(format!(
                "expected 2*kappa weight matrices, got {}",
                weights.len()
            )));
        }
        if symbol_labels.len() != weights.len() {
            return Err(Error::Schema(format!(
                "{} symbol labels for {} weight matrices",
                symbol_labels.len(),
                weights.len()
            )));
        }
        for (l, w) in weights.iter().enumerate() {
            if w.rows() != n_t || w.cols() != t {
                return Err(Error::Schema(format!(
                    "weight matrix {} is {}x{}, expected {n_t}x{t}",
                    l + 1,
                    w.rows(),
                    w.cols()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            n_t,
            t,
            weights,
            symbol_labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of channel uses `T`.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of complex information symbols `κ`.
    pub fn kappa(&self) -> usize {
        self.weights.len() / 2
    }

    /// Number of real symbols `2κ`.
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[CMatrix] {
        &self.weights
    }

    pub fn weight(&self, l: usize) -> &CMatrix {
        &self.weights[l]
    }

    pub fn symbol_labels(&self) -> &[String] {
        &self.symbol_labels
    }

    /// Complex symbols per channel use, `κ/T`.
    pub fn rate(&self) -> f64 {
        self.kappa() as f64 / self.t as f64
    }

    pub fn is_full_rate(&self) -> bool {
        self.kappa() == self.n_t * self.t
    }

    /// `X = Σ_i Re(s_i) A_{2i-1} + Im(s_i) A_{2i}`.
    pub fn assemble_codeword(&self, s: &[Complex64]) -> Result<CMatrix> {
        if s.len() != self.kappa() {
            return Err(Error::DimensionMismatch(format!(
                "{} symbols for a code with kappa = {}",
                s.len(),
                self.kappa()
            )));
        }
        self.assemble_real(&tilde_vec(s)?)
    }

    /// `X = Σ_l x_l A_l` for a real symbol vector in this code's order.
    pub fn assemble_real(&self, x: &[f64]) -> Result<CMatrix> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} real symbols for a code with 2*kappa = {}",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("symbol vector"));
        }
        let mut out = CMatrix::zeros(self.n_t, self.t);
        for (w, &c) in self.weights.iter().zip(x) {
            if c != 0.0 {
                out = out.add(&w.scale(Complex64::new(c, 0.0)));
            }
        }
        Ok(out)
    }

    /// `G = [ṽec(A_1) | … | ṽec(A_2κ)]`, of size `2 n_t T × 2κ`.
    pub fn generator_matrix(&self) -> RMatrix {
        let columns: Vec<Vec<f64>> = self
            .weights
            .iter()
            .map(|w| tilde_vec(&w.vec()).expect("weights are finite by construction"))
            .collect();
        RMatrix::from_columns(&columns).expect("generator columns share a length")
    }

    /// Numerical rank of `G`.
    pub fn generator_rank(&self) -> usize {
        self.generator_matrix().rank(INDEPENDENCE_TOLERANCE)
    }

    /// A human-readable warning when the weight matrices are not linearly
    /// independent over the reals.
    pub fn rank_warning(&self) -> Option<String> {
        let rank = self.generator_rank();
        (rank < self.dim()).then(|| {
            format!(
                "weight matrices are linearly dependent: rank(G) = {rank} < 2*kappa = {}",
                self.dim()
            )
        })
    }

    /// Average codeword energy `E‖X‖²_F` for i.i.d. zero-mean real symbols of
    /// unit variance.
    pub fn energy_per_unit_symbol_variance(&self) -> f64 {
        self.weights
            .iter()
            .map(|w| w.frobenius_norm().powi(2))
            .sum()
    }

    /// Reorders the real symbols; weight `k` of the result is weight
    /// `ordering[k]` of `self`.
    pub fn apply_ordering(&self, ordering: &SymbolOrdering) -> Result<Self> {
        if ordering.len() != self.dim() {
            return Err(Error::InvalidPermutation(format!(
                "ordering has {} entries, code has {} real symbols",
                ordering.len(),
                self.dim()
            )));
        }
        let perm = ordering.as_zero_based();
        Ok(Self {
            name: self.name.clone(),
            n_t: self.n_t,
            t: self.t,
            weights: perm.iter().map(|&p| self.weights[p].clone()).collect(),
            symbol_labels: perm
                .iter()
                .map(|&p| self.symbol_labels[p].clone())
                .collect(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Index of the complex symbol that real symbol `l` belongs to, parsed
    /// from labels of the form `Re(sK)` / `Im(sK)`; falls back to `l / 2`.
    pub fn complex_symbol_of(&self, l: usize) -> usize {
        parse_symbol_index(&self.symbol_labels[l]).unwrap_or(l / 2)
    }
}

fn parse_symbol_index(label: &str) -> Option<usize> {
    let rest = label
        .strip_prefix("Re(s")
        .or_else(|| label.strip_prefix("Im(s"))?;
    let digits = rest.strip_suffix(')')?;
    digits.parse::<usize>().ok()?.checked_sub(1)
}

/// A permutation of the real symbols; entry `k` names the weight matrix that
/// occupies position `k` after reordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolOrdering {
    perm: Vec<usize>,
}

impl SymbolOrdering {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn from_zero_based(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{perm:?} is not a bijection on 0..{n}"
                )));
            }
        }
        Ok(Self { perm })
    }

    pub fn from_one_based(perm: &[usize]) -> Result<Self> {
        let zero: Option<Vec<usize>> = perm.iter().map(|p| p.checked_sub(1)).collect();
        match zero {
            Some(z) => Self::from_zero_based(z),
            None => Err(Error::InvalidPermutation(format!(
                "{perm:?} contains 0; one-based permutations start at 1"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_zero_based(&self) -> &[usize] {
        &self.perm
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.perm.iter().map(|p| p + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        Self { perm: inv }
    }

    /// Ordering equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &SymbolOrdering) -> Self {
        Self {
            perm: next.perm.iter().map(|&p| self.perm[p]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn abba_unit_symbol_gives_identity() {
        let code = abba();
        let x = code.assemble_codeword(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(x, CMatrix::identity(2));
    }

    #[test]
    fn zero_symbols_give_zero_codeword() {
        for name in BUILTIN_NAMES {
            let code = builtin(name).unwrap();
            let x = code
                .assemble_codeword(&vec![c(0.0, 0.0); code.kappa()])
                .unwrap();
            assert!(x.is_zero());
        }
    }

    #[test]
    fn codeword_length_mismatch() {
        assert!(matches!(
            abba().assemble_codeword(&[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn abba_generator_first_column() {
        let g = abba().generator_matrix();
        assert_eq!((g.rows(), g.cols()), (8, 4));
        assert_eq!(g.column(0), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(abba().generator_rank(), 4);
        assert!(abba().rank_warning().is_none());
    }

    #[test]
    fn identity_ordering_is_noop() {
        let code = silver();
        let same = code.apply_ordering(&SymbolOrdering::identity(8)).unwrap();
        assert_eq!(same, code);
    }

    #[test]
    fn abba_block_swap_ordering() {
        let code = abba();
        let ord = SymbolOrdering::from_one_based(&[3, 4, 1, 2]).unwrap();
        let swapped = code.apply_ordering(&ord).unwrap();
        assert_eq!(swapped.weight(0), code.weight(2));
        assert_eq!(swapped.weight(1), code.weight(3));
        assert_eq!(swapped.weight(2), code.weight(0));
        assert_eq!(swapped.weight(3), code.weight(1));
        let g = code.generator_matrix();
        assert_eq!(
            swapped.generator_matrix(),
            g.select_columns(ord.as_zero_based())
        );
    }

    #[test]
    fn golden_standard_order_from_canonical() {
        let ord = SymbolOrdering::from_one_based(&[1, 3, 2, 4, 5, 7, 6, 8]).unwrap();
        let reordered = golden_canonical().apply_ordering(&ord).unwrap();
        assert_eq!(reordered.weights(), golden().weights());
        assert_eq!(reordered.symbol_labels(), golden().symbol_labels());
    }

    #[test]
    fn invalid_permutations_rejected() {
        assert!(SymbolOrdering::from_one_based(&[1, 1, 2]).is_err());
        assert!(SymbolOrdering::from_one_based(&[0, 1]).is_err());
        assert!(SymbolOrdering::from_zero_based(vec![0, 3]).is_err());
        let ord = SymbolOrdering::identity(3);
        assert!(matches!(
            abba().apply_ordering(&ord),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn ordering_inverse_and_composition() {
        let a = SymbolOrdering::from_one_based(&[2, 3, 1, 4]).unwrap();
        assert!(a.then(&a.inverse()).is_identity());
        let code = abba();
        let b = SymbolOrdering::from_one_based(&[4, 1, 3, 2]).unwrap();
        let twice = code.apply_ordering(&a).unwrap().apply_ordering(&b).unwrap();
        assert_eq!(twice, code.apply_ordering(&a.then(&b)).unwrap());
    }

    #[test]
    fn dependent_weights_warn() {
        let a = CMatrix::identity(2);
        let b = a.scale(c(2.0, 0.0));
        let code = StbcCode::new("dep", 2, 2, vec![a, b], vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(code.generator_rank(), 1);
        assert!(code.rank_warning().unwrap().contains("rank(G) = 1"));
    }

    #[test]
    fn constructor_validates_shapes() {
        let a = CMatrix::identity(2);
        assert!(StbcCode::new("odd", 2, 2, vec![a.clone()], vec!["a".into()]).is_err());
        assert!(StbcCode::new(
            "shape",
            2,
            3,
            vec![a.clone(), a.clone()],
            vec!["a".into(), "b".into()]
        )
        .is_err());
        assert!(StbcCode::new("labels", 2, 2, vec![a.clone(), a], vec!["a".into()]).is_err());
    }

    #[test]
    fn complex_symbol_labels() {
        let g = golden();
        let groups: Vec<usize> = (0..8).map(|l| g.complex_symbol_of(l)).collect();
        assert_eq!(groups, vec![0, 1, 0, 1, 2, 3, 2, 3]);
        assert_eq!(parse_symbol_index("x3"), None);
    }
}
