//! Channel covariance: the Choi-state noncovariance measure, its U(1)
//! specialization, the HKS span condition, the infidelity/noncovariance
//! trade-off, and covariant isometries.

use nalgebra::{DMatrix, DVector};

use crate::channel::{choi_of, Isometry, KrausChannel};
use crate::error::{ensure_dim, ensure_shape, Error, Result};
use crate::linalg::{
    checked_svd, commutator, frobenius_norm, hermitian_eigen, identity, kron, psd_sqrt, ComplexMatrix,
    HermitianOperator, C64,
};
use crate::qec::{code_error_operators, epsilon_closed_form, CodeNoisePair};
use crate::skew::{asymmetry_measure, skew_with_sqrt, LieAlgebraBasis, Normalization};
use crate::tol;

/// Generators `G_L^p ⊗ 1_S + 1_L ⊗ G_S^p` of a product representation on `L ⊗ S`.
#[derive(Debug, Clone)]
pub struct ProductRepBasis {
    d_l: usize,
    d_s: usize,
    pairs: Vec<(HermitianOperator, HermitianOperator)>,
    combined: LieAlgebraBasis,
}

impl ProductRepBasis {
    /// The pair entries are the generators of the representation acting on
    /// the Choi state, used as supplied. The combined set is validated for
    /// orthonormality when possible and otherwise kept as a raw set.
    pub fn new(label: impl Into<String>, pairs: Vec<(HermitianOperator, HermitianOperator)>) -> Result<Self> {
        let label = label.into();
        let (first_l, first_s) = pairs
            .first()
            .ok_or_else(|| Error::Empty("generator pairs".into()))?;
        let (d_l, d_s) = (first_l.dim(), first_s.dim());
        let mut combined = Vec::with_capacity(pairs.len());
        for (p, (gl, gs)) in pairs.iter().enumerate() {
            ensure_dim(&format!("logical generator {p}"), d_l, gl.dim())?;
            ensure_dim(&format!("physical generator {p}"), d_s, gs.dim())?;
            let g = kron(gl.matrix(), &identity(d_s)) + kron(&identity(d_l), gs.matrix());
            combined.push(HermitianOperator::new(g)?);
        }
        let combined = match LieAlgebraBasis::new(label.clone(), combined.clone()) {
            Ok(basis) => basis,
            Err(_) => LieAlgebraBasis::raw(label, combined)?,
        };
        Ok(Self {
            d_l,
            d_s,
            pairs,
            combined,
        })
    }

    /// Generators given directly on `L ⊗ S`, without a product decomposition.
    pub fn from_generators(
        label: impl Into<String>,
        d_l: usize,
        d_s: usize,
        generators: Vec<HermitianOperator>,
    ) -> Result<Self> {
        let label = label.into();
        if generators.is_empty() {
            return Err(Error::Empty("generators".into()));
        }
        for (p, g) in generators.iter().enumerate() {
            ensure_dim(&format!("generator {p} (d_L·d_S)"), d_l * d_s, g.dim())?;
        }
        let combined = match LieAlgebraBasis::new(label.clone(), generators.clone()) {
            Ok(basis) => basis,
            Err(_) => LieAlgebraBasis::raw(label, generators)?,
        };
        Ok(Self {
            d_l,
            d_s,
            pairs: Vec::new(),
            combined,
        })
    }

    pub fn d_l(&self) -> usize {
        self.d_l
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    /// Empty when built with [`ProductRepBasis::from_generators`].
    pub fn pairs(&self) -> &[(HermitianOperator, HermitianOperator)] {
        &self.pairs
    }

    pub fn combined(&self) -> &LieAlgebraBasis {
        &self.combined
    }

    /// `d_G`.
    pub fn len(&self) -> usize {
        self.combined.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combined.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.combined.normalization() == Normalization::Orthonormal
    }
}

/// U(1) symmetry with `U_L(g) = exp(−i H_L^* g)` and `U_S(g) = exp(−i H_S g)`.
/// The Choi state then carries `U_L^* ⊗ U_S`, generated by
/// `H = 1_L ⊗ H_S − H_L ⊗ 1_S`.
#[derive(Debug, Clone)]
pub struct U1Spec {
    h_l: HermitianOperator,
    h_s: HermitianOperator,
    h_combined: HermitianOperator,
    basis: ProductRepBasis,
}

impl U1Spec {
    pub fn new(h_l: HermitianOperator, h_s: HermitianOperator) -> Result<Self> {
        let negated = h_l.scaled(-1.0);
        let basis = ProductRepBasis::new("u1", vec![(negated, h_s.clone())])?;
        let h_combined = basis.combined().generators()[0].clone();
        Ok(Self {
            h_l,
            h_s,
            h_combined,
            basis,
        })
    }

    pub fn h_l(&self) -> &HermitianOperator {
        &self.h_l
    }

    pub fn h_s(&self) -> &HermitianOperator {
        &self.h_s
    }

    pub fn h_combined(&self) -> &HermitianOperator {
        &self.h_combined
    }

    pub fn basis(&self) -> &ProductRepBasis {
        &self.basis
    }
}

impl AsRef<ProductRepBasis> for ProductRepBasis {
    fn as_ref(&self) -> &ProductRepBasis {
        self
    }
}

impl AsRef<ProductRepBasis> for U1Spec {
    fn as_ref(&self) -> &ProductRepBasis {
        &self.basis
    }
}

fn check_channel_dims(channel: &KrausChannel, basis: &ProductRepBasis) -> Result<()> {
    ensure_shape(
        "channel (d_in, d_out) vs generator dims (d_L, d_S)",
        (basis.d_l, basis.d_s),
        (channel.d_in(), channel.d_out()),
    )
}

/// `N_G(E) = Σ_p I(Φ_E, G_p)` on the normalized Choi state.
pub fn noncovariance(channel: &KrausChannel, basis: impl AsRef<ProductRepBasis>) -> Result<f64> {
    let basis = basis.as_ref();
    check_channel_dims(channel, basis)?;
    asymmetry_measure(choi_of(channel).state(), basis.combined())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceCheck {
    pub covariant: bool,
    /// `max_p ‖[Φ_E, G_p]‖₂`.
    pub max_commutator: f64,
}

/// Covariance via symmetry of the Choi state: `[Φ_E, G_p] = 0` for every generator.
pub fn covariance_check(
    channel: &KrausChannel,
    basis: impl AsRef<ProductRepBasis>,
    tolerance: f64,
) -> Result<CovarianceCheck> {
    let basis = basis.as_ref();
    check_channel_dims(channel, basis)?;
    let choi = choi_of(channel);
    let mut worst: f64 = 0.0;
    for g in basis.combined().generators() {
        worst = worst.max(frobenius_norm(&commutator(choi.state().matrix(), g.matrix())?));
    }
    Ok(CovarianceCheck {
        covariant: worst < tolerance,
        max_commutator: worst,
    })
}

#[derive(Debug, Clone)]
pub struct HksCheck {
    pub ok: bool,
    pub residual: f64,
    /// `α_ij` with `H_S ≈ Σ α_ij A_i^† A_j` (least-squares, minimum norm).
    pub alpha: ComplexMatrix,
}

/// Least-squares test of `H_S ∈ span{A_i^† A_j}`.
pub fn hks_check(noise: &KrausChannel, h_s: &HermitianOperator, tolerance: f64) -> Result<HksCheck> {
    ensure_dim("hks_check (noise vs H_S)", noise.d_in(), h_s.dim())?;
    ensure_dim("hks_check (noise must act on S)", noise.d_in(), noise.d_out())?;
    let a = noise.kraus();
    let n = a.len();
    let d = h_s.dim();
    let mut design = DMatrix::<C64>::zeros(d * d, n * n);
    for i in 0..n {
        for j in 0..n {
            let b = a[i].adjoint() * &a[j];
            for r in 0..d {
                for col in 0..d {
                    design[(r * d + col, i * n + j)] = b[(r, col)];
                }
            }
        }
    }
    let target = DVector::<C64>::from_fn(d * d, |idx, _| h_s.matrix()[(idx / d, idx % d)]);
    let svd = checked_svd(&design)?;
    let cutoff = svd.singular_values.max() * 1e-12;
    let x = svd
        .solve(&target, cutoff)
        .map_err(|e| Error::InvariantViolation {
            what: format!("least-squares solve ({e})"),
            deviation: f64::NAN,
            tolerance: 0.0,
        })?;
    let fitted = &design * &x;
    let residual = (fitted - target).norm();
    let alpha = ComplexMatrix::from_fn(n, n, |i, j| x[i * n + j]);
    Ok(HksCheck {
        ok: residual < tolerance,
        residual,
        alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tradeoff {
    /// `4ε²/n + N_G(E)`.
    pub lhs: f64,
    /// `I(|ψ̃⟩⟨ψ̃|, K) / (n² + d_G)`.
    pub rhs: f64,
    pub slack: f64,
    pub epsilon: f64,
    pub noncovariance: f64,
}

/// Infidelity/noncovariance trade-off for an isometric code, with
/// `K = Σ_ij 1_L ⊗ K_ij + Σ_p G_p` and the generators used as supplied.
pub fn tradeoff(w: &Isometry, noise: &KrausChannel, basis: impl AsRef<ProductRepBasis>) -> Result<Tradeoff> {
    let basis = basis.as_ref();
    ensure_shape(
        "tradeoff (code dims vs generator dims)",
        (basis.d_l, basis.d_s),
        (w.d_l(), w.d_s()),
    )?;
    let pair = CodeNoisePair::isometric(w, noise.clone())?;
    let eps = epsilon_closed_form(&pair)?;
    let n = noise.len();
    let psi = w.encoded_entangled_state().density();
    let sqrt_psi = psd_sqrt(&psi)?;
    let mut noncov = 0.0;
    let d = w.d_l() * w.d_s();
    let mut k_total = ComplexMatrix::zeros(d, d);
    for g in basis.combined().generators() {
        noncov += skew_with_sqrt(&sqrt_psi, g.matrix())?;
        k_total += g.matrix();
    }
    let id_l = identity(w.d_l());
    for k in code_error_operators(w, noise)? {
        k_total += kron(&id_l, &k);
    }
    let lhs = 4.0 * eps.epsilon_sq / n as f64 + noncov;
    let rhs = skew_with_sqrt(&sqrt_psi, &k_total)? / (n * n + basis.len()) as f64;
    Ok(Tradeoff {
        lhs,
        rhs,
        slack: lhs - rhs,
        epsilon: eps.epsilon,
        noncovariance: noncov,
    })
}

/// Isometry `W = Σ_a |v_{σ(a)}⟩⟨u_a|` mapping eigenvectors `u_a` of `H_L^T` to
/// eigenvectors `v_b` of `H_S` with `eig_S(σ(a)) = eig_L(a) + λ`.
///
/// `assignment` lists `(logical eigenindex, physical eigenindex)` pairs, both
/// counted in ascending eigenvalue order; every logical eigenindex appears once.
/// Then `H_S W = W (H_L^T + λ)`, so `(1 ⊗ H_S − H_L ⊗ 1)(1 ⊗ W)|ψ⟩ = λ (1 ⊗ W)|ψ⟩`.
pub fn covariant_isometry(
    h_l: &HermitianOperator,
    h_s: &HermitianOperator,
    assignment: &[(usize, usize)],
    lambda: f64,
) -> Result<Isometry> {
    let (d_l, d_s) = (h_l.dim(), h_s.dim());
    if assignment.len() != d_l {
        return Err(Error::InvalidAssignment(format!(
            "expected {d_l} pairs (one per logical eigenindex), found {}",
            assignment.len()
        )));
    }
    let mut seen_source = vec![false; d_l];
    let mut seen_target = vec![false; d_s];
    for &(src, dst) in assignment {
        if src >= d_l || dst >= d_s {
            return Err(Error::InvalidAssignment(format!(
                "pair ({src}, {dst}) out of range"
            )));
        }
        if seen_source[src] {
            return Err(Error::InvalidAssignment(format!(
                "logical eigenindex {src} assigned twice"
            )));
        }
        if seen_target[dst] {
            return Err(Error::InvalidAssignment(format!(
                "physical eigenindex {dst} used twice (assignment must be injective)"
            )));
        }
        seen_source[src] = true;
        seen_target[dst] = true;
    }
    let logical = hermitian_eigen(&h_l.transpose());
    let physical = hermitian_eigen(h_s);
    let mut w = ComplexMatrix::zeros(d_s, d_l);
    for &(src, dst) in assignment {
        let expected = logical.values[src] + lambda;
        let found = physical.values[dst];
        if (found - expected).abs() > tol::EIGEN_MATCH {
            return Err(Error::EigenvalueMismatch {
                source_index: src,
                target_index: dst,
                expected,
                found,
            });
        }
        w += physical.vectors.column(dst) * logical.vectors.column(src).adjoint();
    }
    Isometry::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Builtin;
    use crate::linalg::{c, max_abs, pauli_x, pauli_z, real_matrix};

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn u1_combined_generator_sign() {
        let spec = U1Spec::new(herm(pauli_z()), herm(pauli_x())).unwrap();
        let expected = kron(&identity(2), &pauli_x()) - kron(&pauli_z(), &identity(2));
        assert!(max_abs(&(spec.h_combined().matrix() - expected)) < 1e-15);
    }

    #[test]
    fn identity_encoding_with_transposed_generators_is_covariant() {
        let h_l = herm(real_matrix(2, 2, &[0.3, 0.7, 0.7, -1.0]) + pauli_y_scaled(0.4));
        let spec = U1Spec::new(h_l.clone(), h_l.transpose()).unwrap();
        let id = KrausChannel::identity(2);
        assert!(noncovariance(&id, &spec).unwrap() < 1e-12);
        assert!(covariance_check(&id, &spec, 1e-9).unwrap().covariant);
    }

    fn pauli_y_scaled(s: f64) -> ComplexMatrix {
        crate::linalg::pauli_y() * c(s, 0.0)
    }

    #[test]
    fn identity_encoding_with_physical_z_only() {
        let spec = U1Spec::new(HermitianOperator::zero(2), herm(pauli_z())).unwrap();
        let id = KrausChannel::identity(2);
        assert!((noncovariance(&id, &spec).unwrap() - 1.0).abs() < 1e-12);
        let check = covariance_check(&id, &spec, 1e-9).unwrap();
        assert!(!check.covariant && check.max_commutator > 0.1);
    }

    #[test]
    fn noncovariance_rejects_wrong_dims() {
        let spec = U1Spec::new(herm(pauli_z()), herm(pauli_z())).unwrap();
        assert!(noncovariance(&KrausChannel::identity(3), &spec).is_err());
    }

    #[test]
    fn hks_examples() {
        let z = herm(pauli_z());
        let p: f64 = 0.3;
        let deph = KrausChannel::new(vec![
            identity(2) * c((1.0 - p).sqrt(), 0.0),
            pauli_z() * c(p.sqrt(), 0.0),
        ])
        .unwrap();
        let h = hks_check(&deph, &z, 1e-8).unwrap();
        assert!(h.ok && h.residual < 1e-12);
        let rebuilt = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .fold(ComplexMatrix::zeros(2, 2), |acc, (i, j)| {
                acc + deph.kraus()[i].adjoint() * &deph.kraus()[j] * h.alpha[(i, j)]
            });
        assert!(max_abs(&(rebuilt - pauli_z())) < 1e-12);

        let id = hks_check(&KrausChannel::identity(2), &z, 1e-8).unwrap();
        assert!(!id.ok && (id.residual - 2f64.sqrt()).abs() < 1e-12);

        let ad = hks_check(
            &Builtin::AmplitudeDamping { gamma: 0.2 }.channel().unwrap(),
            &z,
            1e-8,
        )
        .unwrap();
        assert!(ad.ok);
    }

    #[test]
    fn covariant_isometry_example() {
        let h_l = herm(pauli_z());
        let h_s = herm(kron(&pauli_z(), &identity(2)));
        // Ascending: Z^T has (−1: |1⟩, +1: |0⟩); Z⊗1 has (−1: |10⟩, |11⟩, +1: |00⟩, |01⟩).
        let w = covariant_isometry(&h_l, &h_s, &[(0, 0), (1, 2)], 0.0).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 2);
        expected[(0, 0)] = c(1.0, 0.0);
        expected[(2, 1)] = c(1.0, 0.0);
        assert!(max_abs(&(w.matrix() - expected)) < 1e-15);
        let spec = U1Spec::new(h_l, h_s).unwrap();
        assert!(noncovariance(&KrausChannel::from_isometry(&w), &spec).unwrap() < 1e-9);
    }

    #[test]
    fn covariant_isometry_trivial_logical_space() {
        let h_l = herm(real_matrix(1, 1, &[0.25]));
        let h_s = herm(real_matrix(3, 3, &[1.0, 0.5, 0.0, 0.5, -1.0, 0.0, 0.0, 0.0, 2.0]));
        let values = hermitian_eigen(&h_s).values;
        for (target, value) in values.iter().enumerate() {
            let w = covariant_isometry(&h_l, &h_s, &[(0, target)], value - 0.25).unwrap();
            let spec = U1Spec::new(h_l.clone(), h_s.clone()).unwrap();
            assert!(noncovariance(&KrausChannel::from_isometry(&w), &spec).unwrap() < 1e-9);
        }
    }

    #[test]
    fn covariant_isometry_errors() {
        let h_l = herm(pauli_z());
        let h_s = herm(kron(&pauli_z(), &identity(2)));
        assert!(matches!(
            covariant_isometry(&h_l, &h_s, &[(0, 0), (1, 1)], 0.0),
            Err(Error::EigenvalueMismatch { .. })
        ));
        assert!(matches!(
            covariant_isometry(&h_l, &h_s, &[(0, 0), (1, 0)], 0.0),
            Err(Error::InvalidAssignment(_))
        ));
        assert!(matches!(
            covariant_isometry(&h_l, &h_s, &[(0, 0)], 0.0),
            Err(Error::InvalidAssignment(_))
        ));
    }

    #[test]
    fn tradeoff_identity_noise_covariant_code() {
        let h_l = herm(pauli_z());
        let h_s = herm(kron(&pauli_z(), &identity(2)));
        let w = covariant_isometry(&h_l, &h_s, &[(0, 0), (1, 2)], 0.0).unwrap();
        let spec = U1Spec::new(h_l, h_s).unwrap();
        let t = tradeoff(&w, &KrausChannel::identity(4), &spec).unwrap();
        assert!(
            t.lhs.abs() < 1e-12 && t.rhs.abs() < 1e-12 && t.slack >= -1e-9,
            "{t:?}"
        );
    }

    #[test]
    fn tradeoff_dephasing_covariant_code() {
        let h_l = herm(pauli_z());
        let h_s = herm(kron(&pauli_z(), &identity(2)));
        let w = covariant_isometry(&h_l, &h_s, &[(0, 0), (1, 2)], 0.0).unwrap();
        let spec = U1Spec::new(h_l, h_s.clone()).unwrap();
        let noise = Builtin::SingleSite {
            inner: Box::new(Builtin::Dephasing { p: 0.4 }),
            site: 0,
            n_qubits: 2,
        }
        .channel()
        .unwrap();
        assert!(hks_check(&noise, &h_s, 1e-8).unwrap().ok);
        let t = tradeoff(&w, &noise, &spec).unwrap();
        assert!(t.noncovariance < 1e-9);
        assert!(t.lhs > 1e-6 && t.slack >= -1e-9, "{t:?}");
    }
}
