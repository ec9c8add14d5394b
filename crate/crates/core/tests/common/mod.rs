#![allow(dead_code)]

use qeccov_core::channel::KrausChannel;
use qeccov_core::linalg::{ComplexMatrix, HermitianOperator};
use qeccov_core::qec::CodeNoisePair;
use qeccov_core::random::{random_code_noise_pair, random_hermitian};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn random_pair(rng: &mut ChaCha20Rng) -> CodeNoisePair {
    random_code_noise_pair(rng)
}

pub fn random_builtin_noise(rng: &mut ChaCha20Rng, n_qubits: usize) -> KrausChannel {
    qeccov_core::random::random_builtin_noise(n_qubits, rng)
}

pub fn random_u1_pair(
    rng: &mut ChaCha20Rng,
    d_l: usize,
    d_s: usize,
) -> (HermitianOperator, HermitianOperator) {
    (random_hermitian(d_l, rng), random_hermitian(d_s, rng))
}

pub fn evolution(h: &HermitianOperator, theta: f64) -> ComplexMatrix {
    qeccov_core::linalg::evolution(h, theta)
}

pub fn random_orthogonal(rng: &mut ChaCha20Rng, d: usize) -> nalgebra::DMatrix<f64> {
    qeccov_core::random::random_orthogonal(d, rng)
}
