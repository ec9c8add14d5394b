mod common;

use proptest::prelude::*;
use qeccov_core::linalg::{c, ComplexMatrix, DensityMatrix, HermitianOperator};
use qeccov_core::random::{
    ginibre, random_density, random_hermitian, random_orthonormal_hermitians, random_pure,
};
use qeccov_core::skew::{
    asymmetry_measure, skew_information, sum_uncertainty_check, variance, LieAlgebraBasis,
};
use rand::Rng;

fn orthonormal_hermitians(rng: &mut rand_chacha::ChaCha20Rng, d: usize, k: usize) -> Vec<ComplexMatrix> {
    random_orthonormal_hermitians(d, k, rng)
        .into_iter()
        .map(HermitianOperator::into_matrix)
        .collect()
}

fn basis_from(gens: Vec<ComplexMatrix>) -> LieAlgebraBasis {
    let ops = gens
        .into_iter()
        .map(|g| HermitianOperator::new(g).unwrap())
        .collect();
    LieAlgebraBasis::new("random", ops).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sum_uncertainty_relation(seed in any::<u64>(), d in 2usize..=5, count in 1usize..=5) {
        let mut rng = common::rng(seed);
        let rho = random_density(d, rng.random_range(1..=d), &mut rng);
        let ks: Vec<ComplexMatrix> = (0..count).map(|_| ginibre(d, d, &mut rng)).collect();
        let chk = sum_uncertainty_check(&rho, &ks).unwrap();
        prop_assert!(chk.lhs - chk.rhs >= -1e-10, "{:?}", chk);
        prop_assert!(chk.ok);
    }

    #[test]
    fn asymmetry_is_convex(seed in any::<u64>(), d in 2usize..=4, parts in 2usize..=4) {
        let mut rng = common::rng(seed);
        let basis = basis_from(orthonormal_hermitians(&mut rng, d, 2));
        let states: Vec<DensityMatrix> = (0..parts).map(|_| random_density(d, d, &mut rng)).collect();
        let raw: Vec<f64> = (0..parts).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mix = DensityMatrix::mixture(&weights, &states).unwrap();
        let lhs = asymmetry_measure(&mix, &basis).unwrap();
        let rhs: f64 = weights.iter().zip(&states).map(|(w, s)| w * asymmetry_measure(s, &basis).unwrap()).sum();
        prop_assert!(lhs <= rhs + 1e-9, "{} > {}", lhs, rhs);
    }

    #[test]
    fn asymmetry_is_basis_independent(seed in any::<u64>(), d in 2usize..=4, k in 2usize..=4) {
        let mut rng = common::rng(seed);
        let gens = orthonormal_hermitians(&mut rng, d, k);
        let o = common::random_orthogonal(&mut rng, k);
        let rotated: Vec<ComplexMatrix> = (0..k)
            .map(|p| (0..k).fold(ComplexMatrix::zeros(d, d), |acc, q| acc + &gens[q] * c(o[(p, q)], 0.0)))
            .collect();
        let rho = random_density(d, d, &mut rng);
        let a = asymmetry_measure(&rho, &basis_from(gens)).unwrap();
        let b = asymmetry_measure(&rho, &basis_from(rotated)).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn skew_at_most_variance(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = common::rng(seed);
        let rho = random_density(d, rng.random_range(1..=d), &mut rng);
        let h = random_hermitian(d, &mut rng);
        prop_assert!(skew_information(&rho, &h).unwrap() <= variance(&rho, &h).unwrap() + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pure_state_skew_equals_variance(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = common::rng(seed);
        let psi = random_pure(d, &mut rng).density();
        let h = random_hermitian(d, &mut rng);
        let s = skew_information(&psi, &h).unwrap();
        let v = variance(&psi, &h).unwrap();
        prop_assert!((s - v).abs() < 1e-9);
    }
}
