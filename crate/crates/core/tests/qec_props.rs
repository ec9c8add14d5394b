mod common;

use proptest::prelude::*;
use qeccov_core::gallery::{repetition_bit_flips, repetition_code};
use qeccov_core::linalg::{identity, max_abs, ComplexMatrix};
use qeccov_core::qec::{infidelity, isometric_infidelity_via_skew, knill_laflamme, CodeNoisePair};
use qeccov_core::random::{random_channel, random_isometry};
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_matches_complementary_oracle(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let pair = common::random_pair(&mut rng);
        let rep = infidelity(&pair).unwrap();
        prop_assert!(rep.oracle_relative_error() < 1e-9, "eps {} oracle {}", rep.epsilon, rep.oracle_2norm);
        prop_assert!(rep.chain.holds(), "{:?}", rep.chain);
        let d_l = pair.d_l();
        let mixed = identity(d_l) / qeccov_core::linalg::c(d_l as f64, 0.0);
        prop_assert!(max_abs(&(rep.complementary.rho_r.matrix() - mixed)) < 1e-12);
        prop_assert!(1.0 - rep.complementary.fid_product <= rep.epsilon + 1e-9);
    }

    #[test]
    fn infidelity_as_skew_information(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d_l = rng.random_range(2..=3);
        let d_s = d_l * rng.random_range(1..=2);
        let w = random_isometry(d_l, d_s, &mut rng);
        let noise = random_channel(d_s, d_s, rng.random_range(1..=4), &mut rng);
        let id = isometric_infidelity_via_skew(&w, &noise).unwrap();
        prop_assert!((id.lhs - id.rhs).abs() < 1e-9, "{:?}", id);
    }
}

#[test]
fn knill_laflamme_implies_zero_infidelity() {
    let w = repetition_code();
    let noise = repetition_bit_flips();
    assert!(knill_laflamme(&w.projector(), &noise, 1e-8).unwrap().ok);
    let rep = infidelity(&CodeNoisePair::isometric(&w, noise).unwrap()).unwrap();
    assert!(rep.epsilon < 1e-9);
}

#[test]
fn remixed_noise_kraus_is_reported_only() {
    // Not a claimed invariant: prints how ε moves under A_i → Σ_j u_ij A_j.
    let mut rng = common::rng(5);
    let pair = common::random_pair(&mut rng);
    let n = pair.n();
    let u = qeccov_core::haar::haar_unitary(n, &mut rng);
    let remixed: Vec<ComplexMatrix> = (0..n)
        .map(|i| {
            (0..n).fold(ComplexMatrix::zeros(pair.d_s(), pair.d_s()), |acc, j| {
                acc + &pair.noise().kraus()[j] * u[(i, j)]
            })
        })
        .collect();
    let other = CodeNoisePair::new(
        pair.encoding().clone(),
        qeccov_core::channel::KrausChannel::new(remixed).unwrap(),
    )
    .unwrap();
    let a = infidelity(&pair).unwrap().epsilon;
    let b = infidelity(&other).unwrap().epsilon;
    println!("epsilon {a:.12} remixed {b:.12} deviation {:.3e}", (a - b).abs());
}
