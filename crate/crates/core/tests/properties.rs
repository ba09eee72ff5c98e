mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use stbc_fsd::code::SymbolOrdering;
use stbc_fsd::decoder::{ml_oracle, sphere_decode, Constellation};
use stbc_fsd::linalg::{
    check, check_realify, gram_matrix_m, gram_symmetry_residuals, tilde, CMatrix,
};
use stbc_fsd::parallel::task_rng;
use stbc_fsd::structure::ZeroPattern;

fn upper_pairs(dim: usize) -> Vec<(usize, usize)> {
    (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect()
}

fn pattern_strategy() -> impl Strategy<Value = ZeroPattern> {
    (2usize..10).prop_flat_map(|dim| {
        let pairs = upper_pairs(dim);
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let zeros: Vec<_> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &z)| z)
                .map(|(&p, _)| p)
                .collect();
            ZeroPattern::from_zeros(dim, &zeros).unwrap()
        })
    })
}

fn ordering_strategy(n: usize) -> impl Strategy<Value = SymbolOrdering> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|p| SymbolOrdering::from_zero_based(p).unwrap())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn pattern_ascii_round_trip(p in pattern_strategy()) {
        prop_assert_eq!(ZeroPattern::from_ascii(&p.to_ascii()).unwrap(), p);
    }

    #[test]
    fn pattern_json_round_trip(p in pattern_strategy()) {
        let v = p.to_json_value(serde_json::Value::Null);
        prop_assert_eq!(ZeroPattern::from_json_value(&v).unwrap(), p);
    }

    #[test]
    fn ordering_inverse_and_composition(
        (a, b) in (1usize..5).prop_flat_map(|k| (ordering_strategy(2 * k), ordering_strategy(2 * k)))
    ) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(SymbolOrdering::from_one_based(&a.to_one_based()).unwrap(), a.clone());
        let code = common::random_code(a.len(), 2, 2, 5);
        let twice = code.apply_ordering(&a).unwrap().apply_ordering(&b).unwrap();
        let once = code.apply_ordering(&a.then(&b)).unwrap();
        prop_assert_eq!(twice.weights(), once.weights());
        let back = code.apply_ordering(&a).unwrap().apply_ordering(&a.inverse()).unwrap();
        prop_assert_eq!(back.weights(), code.weights());
    }

    #[test]
    fn check_is_a_ring_homomorphism(x in complex(), y in complex()) {
        let m = check(x);
        let ty = tilde(y).unwrap();
        let prod = tilde(x * y).unwrap();
        for r in 0..2 {
            let lhs = m[r][0] * ty[0] + m[r][1] * ty[1];
            prop_assert!((lhs - prod[r]).abs() <= 1e-9 * (1.0 + prod[r].abs()));
        }
    }

    #[test]
    fn check_realify_respects_products(seed in any::<u64>()) {
        let mut rng = task_rng(seed, 0);
        let a = common::random_complex(&mut rng, 3, 2);
        let b = common::random_complex(&mut rng, 2, 4);
        let lhs = check_realify(&(&a * &b));
        let rhs = &check_realify(&a) * &check_realify(&b);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn gram_matrix_has_exact_pair_symmetry(seed in any::<u64>(), n_r in 1usize..5, n_t in 1usize..5) {
        let mut rng = task_rng(seed, 1);
        let h: CMatrix = common::random_complex(&mut rng, n_r, n_t);
        prop_assert_eq!(gram_symmetry_residuals(&gram_matrix_m(&h)).max(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_decoder_matches_oracle(
        seed in any::<u64>(),
        dim in 2usize..7,
        q in prop::sample::select(vec![2u32, 4]),
        noise in 0.0f64..2.0,
    ) {
        use rand::Rng;
        let mut rng = task_rng(seed, 2);
        let c = Constellation::new(q).unwrap();
        let real: Vec<Vec<f64>> = (0..dim + 2)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let h = stbc_fsd::linalg::RMatrix::from_rows(&real).unwrap();
        let s: Vec<f64> = (0..dim).map(|_| c.level(c.random_index(&mut rng))).collect();
        let y: Vec<f64> = h
            .mul_vec(&s)
            .into_iter()
            .map(|v| v + noise * rng.random_range(-1.0..1.0))
            .collect();
        let Ok(sd) = sphere_decode(&y, &h, &c, None) else {
            return Ok(());
        };
        let ml = ml_oracle(&y, &h, &c).unwrap();
        prop_assert!(sd.metric <= ml.metric * (1.0 + 1e-9) + 1e-12);
    }
}
