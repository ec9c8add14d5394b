//! Random matrices, states and channels for property tests and the verify suite.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{Builtin, Isometry, KrausChannel};
use crate::covariance::{covariant_isometry, U1Spec};
use crate::gallery::on_every_qubit;
use crate::haar::haar_unitary;
use crate::linalg::{
    c, hermitian_eigen, hermitian_part, trace, ComplexMatrix, DensityMatrix, HermitianOperator, PureState,
};
use crate::qec::CodeNoisePair;

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::new(hermitian_part(&ginibre(d, d, rng))).expect("hermitian part is hermitian")
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    let v = ginibre(d, 1, rng).column(0).into_owned();
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// `G G^† / tr(G G^†)` with `G` of shape `d × rank`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    DensityMatrix::from_trusted(m / c(t, 0.0))
}

/// First `d_in` columns of a Haar unitary on `d_out`.
pub fn random_isometry<R: Rng + ?Sized>(d_in: usize, d_out: usize, rng: &mut R) -> Isometry {
    assert!(d_in <= d_out, "isometry needs d_in <= d_out");
    let u = haar_unitary(d_out, rng);
    Isometry::from_trusted(u.columns(0, d_in).into_owned())
}

/// CPTP channel with `n_kraus` Kraus operators, read off a Haar isometry
/// `V: d_in → d_out ⊗ n_kraus` as `K_a[s, l] = V[s·n + a, l]`.
pub fn random_channel<R: Rng + ?Sized>(
    d_in: usize,
    d_out: usize,
    n_kraus: usize,
    rng: &mut R,
) -> KrausChannel {
    let n = n_kraus.max(1);
    assert!(d_in <= d_out * n, "dilation too small for an isometry");
    let v = random_isometry(d_in, d_out * n, rng);
    let kraus = (0..n)
        .map(|a| ComplexMatrix::from_fn(d_out, d_in, |s, l| v.matrix()[(s * n + a, l)]))
        .collect();
    KrausChannel::from_trusted(d_in, d_out, kraus)
}

/// Random encoding (`m ≤ 3` Kraus operators) and noise (`n ≤ 4`) with
/// `d_L ∈ {2, 3}` and `d_A ∈ {1, 2}`.
pub fn random_code_noise_pair<R: Rng + ?Sized>(rng: &mut R) -> CodeNoisePair {
    let d_l = rng.random_range(2..=3);
    let d_a = rng.random_range(1..=2);
    let d_s = d_l * d_a;
    let m = rng.random_range(1..=3);
    let n = rng.random_range(1..=4);
    let encoding = random_channel(d_l, d_s, m, rng);
    let noise = random_channel(d_s, d_s, n, rng);
    CodeNoisePair::new(encoding, noise).expect("random channels have matching dimensions")
}

/// One of the single-qubit builtins with a uniform parameter, applied either
/// to every qubit or to one random site.
pub fn random_builtin_noise<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> KrausChannel {
    let p: f64 = rng.random_range(0.0..1.0);
    let inner = match rng.random_range(0..4) {
        0 => Builtin::Dephasing { p },
        1 => Builtin::BitFlip { p },
        2 => Builtin::Depolarizing { p },
        _ => Builtin::AmplitudeDamping { gamma: p },
    };
    let channel = if rng.random_bool(0.5) {
        on_every_qubit(&inner, n_qubits)
    } else {
        let site = rng.random_range(0..n_qubits);
        Builtin::SingleSite {
            inner: Box::new(inner),
            site,
            n_qubits,
        }
        .channel()
    };
    channel.expect("builtin parameters are in range")
}

/// Real orthogonal matrix: `Q` of a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    g.qr().q()
}

/// `k` Hermitian matrices with `tr(H_p H_q) = δ_pq`, by Gram-Schmidt on
/// random Hermitian draws. Requires `k ≤ d²`.
pub fn random_orthonormal_hermitians<R: Rng + ?Sized>(
    d: usize,
    k: usize,
    rng: &mut R,
) -> Vec<HermitianOperator> {
    assert!(k <= d * d, "at most d^2 orthonormal Hermitian matrices exist");
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(k);
    while out.len() < k {
        let mut h = random_hermitian(d, rng).into_matrix();
        for g in &out {
            let overlap = trace(&(g * &h)).re;
            h -= g * c(overlap, 0.0);
        }
        let norm = trace(&(&h * &h)).re.sqrt();
        if norm > 1e-6 {
            out.push(hermitian_part(&(h / c(norm, 0.0))));
        }
    }
    out.into_iter()
        .map(|h| HermitianOperator::new(h).expect("Gram-Schmidt keeps matrices Hermitian"))
        .collect()
}

/// Random U(1) symmetry together with a code covariant under it: `H_S` is a
/// Haar rotation of a spectrum containing `eig(H_L^T) + λ`, and `W` maps each
/// logical eigenvector onto the matching physical one.
pub fn random_covariant_code<R: Rng + ?Sized>(d_l: usize, d_s: usize, rng: &mut R) -> (U1Spec, Isometry) {
    assert!(d_l <= d_s, "covariant code needs d_L <= d_S");
    let h_l = random_hermitian(d_l, rng);
    let lambda: f64 = rng.random_range(-1.0..1.0);
    let logical = hermitian_eigen(&h_l.transpose()).values;
    let mut spectrum: Vec<f64> = logical.iter().map(|e| e + lambda).collect();
    while spectrum.len() < d_s {
        spectrum.push(rng.random_range(-3.0..3.0));
    }
    let v = haar_unitary(d_s, rng);
    let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d_s,
        spectrum.iter().map(|&x| c(x, 0.0)),
    ));
    let h_s = HermitianOperator::new(hermitian_part(&(&v * diag * v.adjoint())))
        .expect("hermitian by construction");
    let physical = hermitian_eigen(&h_s).values;
    let mut taken = vec![false; d_s];
    let assignment: Vec<(usize, usize)> = logical
        .iter()
        .enumerate()
        .map(|(a, e)| {
            let target = e + lambda;
            let b = (0..d_s)
                .filter(|&b| !taken[b])
                .min_by(|&x, &y| {
                    (physical[x] - target)
                        .abs()
                        .total_cmp(&(physical[y] - target).abs())
                })
                .expect("d_S >= d_L leaves a free eigenvector");
            taken[b] = true;
            (a, b)
        })
        .collect();
    let w = covariant_isometry(&h_l, &h_s, &assignment, lambda)
        .expect("spectrum contains the shifted logical one");
    (U1Spec::new(h_l, h_s).expect("dimensions agree"), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let rho = random_density(4, 2, &mut rng);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        let ch = random_channel(2, 3, 4, &mut rng);
        assert!(KrausChannel::new(ch.kraus().to_vec()).is_ok());
        let w = random_isometry(2, 5, &mut rng);
        assert!(max_abs(&(w.matrix().adjoint() * w.matrix() - identity(2))) < 1e-12);
        assert!((random_pure(5, &mut rng).amplitudes().norm() - 1.0).abs() < 1e-14);
    }
}
