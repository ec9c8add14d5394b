mod common;

use proptest::prelude::*;
use qeccov_core::linalg::{
    frobenius_norm, max_abs, numerical_rank, partial_trace, psd_sqrt, trace, trace_distance_fidelity_gap,
    trace_norm,
};
use qeccov_core::random::{ginibre, random_density};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), d in 1usize..=6, rank in 1usize..=6) {
        let mut rng = common::rng(seed);
        let rho = random_density(d, rank, &mut rng);
        let s = psd_sqrt(&rho).unwrap();
        prop_assert!(max_abs(&(&s * &s - rho.matrix())) < 1e-9);
    }

    #[test]
    fn schatten_norm_relations(seed in any::<u64>(), r in 1usize..=6, c in 1usize..=6, k in 1usize..=6) {
        let mut rng = common::rng(seed);
        let m = ginibre(r, k, &mut rng) * ginibre(k, c, &mut rng);
        let one = trace_norm(&m);
        let two = frobenius_norm(&m);
        let rank = numerical_rank(&m) as f64;
        prop_assert!(one >= two - 1e-12);
        prop_assert!(one <= rank.sqrt() * two + 1e-10);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=3, c in 1usize..=3) {
        let mut rng = common::rng(seed);
        let m = ginibre(a * b * c, a * b * c, &mut rng);
        let total = trace(&m);
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![]] {
            let reduced = partial_trace(&m, &[a, b, c], &keep).unwrap();
            prop_assert!((trace(&reduced) - total).norm() < 1e-12 * (1.0 + total.norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fidelity_trace_distance_chain(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = common::rng(seed);
        let r1 = 1 + (seed % d as u64) as usize;
        let r2 = 1 + ((seed >> 8) % d as u64) as usize;
        let rho = random_density(d, r1, &mut rng);
        let sigma = random_density(d, r2, &mut rng);
        let gap = trace_distance_fidelity_gap(&rho, &sigma).unwrap();
        prop_assert!(gap.chain_ok, "{:?}", gap);
    }
}
