//! Maximum-likelihood detection over `y = H_eq s + n` with real PAM symbols.
//!
//! [`SphereDecoder`] runs a Schnorr-Euchner depth-first search on the
//! triangular system `Qᵗy ≈ R s`. Given a zero pattern it splits the search:
//! independent blocks separately, and within a fast-decodable block the tail
//! jointly with each head group solved on its own per tail candidate. The
//! result is still the exact ML decision. [`ml_oracle`] is a brute-force
//! reference for small codebooks.

mod constellation;
mod montecarlo;
mod sphere;

pub use constellation::Constellation;
pub use montecarlo::{monte_carlo, noise_variance, power_scale, write_csv, SimConfig, SimRow};
pub use sphere::{
    ml_oracle, sphere_decode, DecodeResult, DecodingPlan, SphereDecoder, ORACLE_LIMIT_BITS,
};

#[cfg(test)]
mod tests {
    use rand_distr::{Distribution, StandardNormal};

    use super::*;
    use crate::code::{abba, builtin, golden, silver, StbcCode};
    use crate::linalg::RMatrix;
    use crate::parallel::task_rng;
    use crate::structure::{equivalent_channel, predicted_pattern, ChannelModel};

    fn instance(
        code: &StbcCode,
        c: &Constellation,
        n_r: usize,
        sigma: f64,
        task: u64,
    ) -> (RMatrix, Vec<usize>, Vec<f64>) {
        let mut rng = task_rng(7, task);
        let h = ChannelModel::new(n_r, 7).draw(code.n_t(), &mut rng);
        let h_eq = equivalent_channel(code, &h).unwrap();
        let sent: Vec<usize> = (0..code.dim()).map(|_| c.random_index(&mut rng)).collect();
        let mut y = h_eq.mul_vec(&sent.iter().map(|&k| c.level(k)).collect::<Vec<_>>());
        for v in &mut y {
            let n: f64 = StandardNormal.sample(&mut rng);
            *v += sigma * n;
        }
        (h_eq, sent, y)
    }

    #[test]
    fn plans_follow_classification() {
        let p = predicted_pattern(&abba());
        assert_eq!(
            DecodingPlan::from_pattern(&p),
            DecodingPlan::Blocks(vec![DecodingPlan::Dense(0..2), DecodingPlan::Dense(2..4)])
        );
        let p = predicted_pattern(&silver());
        assert_eq!(
            DecodingPlan::from_pattern(&p),
            DecodingPlan::Fast {
                head: vec![0..1, 1..2, 2..3, 3..4],
                tail: 4..8
            }
        );
    }

    #[test]
    fn structured_and_plain_match_oracle() {
        for name in ["abba", "silver", "golden", "golden-canonical"] {
            let code = builtin(name).unwrap();
            let pattern = predicted_pattern(&code);
            for q in [2, 4] {
                let c = Constellation::new(q).unwrap();
                let trials = if q == 4 && code.dim() == 8 { 3 } else { 20 };
                for task in 0..trials {
                    let (h_eq, _, y) = instance(&code, &c, 2, 0.6, task);
                    let ml = ml_oracle(&y, &h_eq, &c).unwrap();
                    let plain = sphere_decode(&y, &h_eq, &c, None).unwrap();
                    let fast = sphere_decode(&y, &h_eq, &c, Some(&pattern)).unwrap();
                    assert_eq!(plain.indices, ml.indices, "{name} q={q} plain");
                    assert_eq!(fast.indices, ml.indices, "{name} q={q} structured");
                    assert!((fast.metric - ml.metric).abs() < 1e-9 * (1.0 + ml.metric));
                }
            }
        }
    }

    #[test]
    fn noiseless_recovers_symbols_and_leaves_bounded() {
        let code = silver();
        let pattern = predicted_pattern(&code);
        let c = Constellation::new(4).unwrap();
        for task in 0..10 {
            let (h_eq, sent, y) = instance(&code, &c, 2, 0.0, task);
            let r = sphere_decode(&y, &h_eq, &c, Some(&pattern)).unwrap();
            assert_eq!(r.indices, sent);
            assert!(r.metric < 1e-18);
            assert!(r.leaves <= 4u64.pow(5));
        }
    }

    #[test]
    fn wrong_pattern_rejected() {
        let code = golden();
        let c = Constellation::new(2).unwrap();
        let (h_eq, _, _) = instance(&code, &c, 2, 0.0, 0);
        let wrong = predicted_pattern(&abba());
        assert!(SphereDecoder::new(&h_eq, &c, Some(&wrong)).is_err());
        let first_row: Vec<(usize, usize)> = (1..8).map(|j| (0, j)).collect();
        let bogus = crate::structure::ZeroPattern::from_zeros(8, &first_row).unwrap();
        assert!(SphereDecoder::new(&h_eq, &c, Some(&bogus)).is_err());
    }

    #[test]
    fn oracle_guard() {
        let code = golden();
        let c = Constellation::new(6).unwrap();
        let (h_eq, _, y) = instance(&code, &Constellation::new(2).unwrap(), 2, 0.1, 0);
        assert!(matches!(
            ml_oracle(&y, &h_eq, &c),
            Err(crate::Error::CodebookTooLarge {
                bits: 24,
                limit: 20
            })
        ));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_monotone() {
        let code = abba();
        let pattern = predicted_pattern(&code);
        let config = SimConfig {
            snr_db: vec![0.0, 10.0, 20.0],
            trials: 300,
            seed: 42,
            n_r: 1,
            constellation: Constellation::new(2).unwrap(),
            oracle_check: true,
        };
        let a = monte_carlo(&code, &config, Some(&pattern)).unwrap();
        let b = monte_carlo(&code, &config, Some(&pattern)).unwrap();
        assert_eq!(a, b);
        assert!(a[0].ber > a[1].ber && a[1].ber >= a[2].ber);
        assert!(a.iter().all(|r| r.oracle_mismatches == Some(0)));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        write_csv(&a, &path).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with("snr_db,ber,ser,mean_nodes,p95_nodes"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn power_normalisation() {
        for code in [abba(), silver(), golden()] {
            let s = power_scale(&code);
            let e = 0.5 * code.energy_per_unit_symbol_variance() * s * s;
            assert!((e - (code.n_t() * code.t()) as f64).abs() < 1e-9);
        }
    }
}
