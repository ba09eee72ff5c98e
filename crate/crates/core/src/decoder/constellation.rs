use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Square `2^q`-QAM seen per real dimension as `2^{q/2}`-PAM with odd
/// integer levels `±1, ±3, …`, scaled to unit average complex-symbol energy
/// and Gray labelled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constellation {
    q: u32,
    levels: Vec<f64>,
}

impl Constellation {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 || !q.is_multiple_of(2) || q > 16 {
            return Err(Error::OddConstellation(q));
        }
        let m = 1usize << (q / 2);
        let scale = (3.0 / (2.0 * ((m * m) as f64 - 1.0))).sqrt();
        let levels = (0..m)
            .map(|k| (2.0 * k as f64 - (m as f64 - 1.0)) * scale)
            .collect();
        Ok(Self { q, levels })
    }

    /// Bits per complex symbol.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Levels per real dimension, `M = 2^{q/2}`.
    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn bits_per_dimension(&self) -> u32 {
        self.q / 2
    }

    /// Ascending PAM levels.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> f64 {
        self.levels[index]
    }

    /// Index of the level nearest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        self.levels
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(k, _)| k)
            .expect("at least two levels")
    }

    /// Gray label of a level index.
    pub fn gray(&self, index: usize) -> u32 {
        let i = index as u32;
        i ^ (i >> 1)
    }

    /// Differing Gray bits between two level indices.
    pub fn bit_errors(&self, a: usize, b: usize) -> u32 {
        (self.gray(a) ^ self.gray(b)).count_ones()
    }

    pub fn random_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.m())
    }

    /// Average energy of a complex symbol built from two real levels.
    pub fn average_symbol_energy(&self) -> f64 {
        2.0 * self.levels.iter().map(|v| v * v).sum::<f64>() / self.m() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpsk_levels() {
        let c = Constellation::new(2).unwrap();
        let v = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(c.m(), 2);
        assert!((c.level(0) + v).abs() < 1e-15 && (c.level(1) - v).abs() < 1e-15);
    }

    #[test]
    fn unit_energy_and_symmetry() {
        for q in [2, 4, 6, 8] {
            let c = Constellation::new(q).unwrap();
            assert!((c.average_symbol_energy() - 1.0).abs() < 1e-12);
            assert_eq!(c.m(), 1 << (q / 2));
            for k in 0..c.m() {
                assert!((c.level(k) + c.level(c.m() - 1 - k)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn odd_q_rejected() {
        assert!(matches!(
            Constellation::new(3),
            Err(Error::OddConstellation(3))
        ));
        assert!(Constellation::new(0).is_err());
    }

    #[test]
    fn gray_neighbours_differ_by_one_bit() {
        let c = Constellation::new(6).unwrap();
        for k in 1..c.m() {
            assert_eq!(c.bit_errors(k - 1, k), 1);
        }
        assert_eq!(c.nearest(c.level(5) + 1e-3), 5);
    }
}
