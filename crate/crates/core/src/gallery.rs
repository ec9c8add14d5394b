//! Named codes and noise models used by examples, the verify suite and tests.

use serde::Serialize;

use crate::channel::{compose, Builtin, Isometry, KrausChannel};
use crate::covariance::{covariant_isometry, hks_check, noncovariance, U1Spec};
use crate::error::Result;
use crate::linalg::{c, identity, ket_bra, kron, pauli_x, pauli_z, trace, ComplexMatrix, HermitianOperator};
use crate::qec::{epsilon_closed_form, CodeNoisePair};
use crate::tol;

/// `W = 1_d`.
pub fn trivial_code(d: usize) -> Isometry {
    Isometry::from_trusted(identity(d))
}

/// `|0⟩ ↦ |000⟩`, `|1⟩ ↦ |111⟩`.
pub fn repetition_code() -> Isometry {
    let mut w = ComplexMatrix::zeros(8, 2);
    w[(0, 0)] = c(1.0, 0.0);
    w[(7, 1)] = c(1.0, 0.0);
    Isometry::from_trusted(w)
}

/// `{1, X_0, X_1, X_2} / 2` on three qubits.
pub fn repetition_bit_flips() -> KrausChannel {
    let i2 = identity(2);
    let x = pauli_x();
    let half = c(0.5, 0.0);
    KrausChannel::from_trusted(
        8,
        8,
        vec![
            identity(8) * half,
            kron(&kron(&x, &i2), &i2) * half,
            kron(&kron(&i2, &x), &i2) * half,
            kron(&kron(&i2, &i2), &x) * half,
        ],
    )
}

/// Projective dephasing `{|0⟩⟨0|, |1⟩⟨1|}` on a qubit.
pub fn projective_dephasing() -> KrausChannel {
    KrausChannel::from_trusted(2, 2, vec![ket_bra(2, 0, 0), ket_bra(2, 1, 1)])
}

/// The same single-qubit builtin on every qubit of an `n`-qubit register.
pub fn on_every_qubit(inner: &Builtin, n_qubits: usize) -> Result<KrausChannel> {
    let mut acc = KrausChannel::identity(1 << n_qubits);
    for site in 0..n_qubits {
        let local = Builtin::SingleSite {
            inner: Box::new(inner.clone()),
            site,
            n_qubits,
        }
        .channel()?;
        acc = compose(&local, &acc)?;
    }
    Ok(acc)
}

/// `Σ_k Z_k` on `n` qubits.
pub fn total_z(n_qubits: usize) -> ComplexMatrix {
    let d = 1 << n_qubits;
    let mut h = ComplexMatrix::zeros(d, d);
    for site in 0..n_qubits {
        let left = identity(1 << site);
        let right = identity(1 << (n_qubits - site - 1));
        h += kron(&kron(&left, &pauli_z()), &right);
    }
    h
}

/// Covariant code, HKS noise and a nontrivial logical Hamiltonian.
#[derive(Debug, Clone)]
pub struct NoGoCase {
    pub name: String,
    pub encoding: Isometry,
    pub noise: KrausChannel,
    pub symmetry: U1Spec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoGoOutcome {
    pub name: String,
    pub epsilon: f64,
    pub noncovariance: f64,
    pub hks_residual: f64,
    /// `‖H_L − tr(H_L)/d_L‖₂`.
    pub logical_spread: f64,
    pub passed: bool,
}

fn herm(m: ComplexMatrix) -> HermitianOperator {
    HermitianOperator::new(m).expect("fixture Hamiltonians are Hermitian")
}

/// Fixture combinations: each code is built with [`covariant_isometry`] and
/// each noise model satisfies the HKS condition for the physical Hamiltonian.
pub fn no_go_cases() -> Result<Vec<NoGoCase>> {
    let mut cases = Vec::new();
    let mut push = |name: String,
                    h_l: ComplexMatrix,
                    h_s: ComplexMatrix,
                    assign: &[(usize, usize)],
                    lambda: f64,
                    noise: KrausChannel|
     -> Result<()> {
        let (h_l, h_s) = (herm(h_l), herm(h_s));
        let encoding = covariant_isometry(&h_l, &h_s, assign, lambda)?;
        cases.push(NoGoCase {
            name,
            encoding,
            noise,
            symmetry: U1Spec::new(h_l, h_s)?,
        });
        Ok(())
    };

    // Logical qubit stored in qubit 0 of two, H_S = Z ⊗ 1.
    let z0 = kron(&pauli_z(), &identity(2));
    let first_qubit: [(&str, Builtin); 6] = [
        ("dephasing", Builtin::Dephasing { p: 0.1 }),
        ("dephasing", Builtin::Dephasing { p: 0.5 }),
        ("depolarizing", Builtin::Depolarizing { p: 0.1 }),
        ("depolarizing", Builtin::Depolarizing { p: 0.5 }),
        ("amplitude_damping", Builtin::AmplitudeDamping { gamma: 0.1 }),
        ("amplitude_damping", Builtin::AmplitudeDamping { gamma: 0.5 }),
    ];
    for (label, b) in first_qubit {
        let param = match &b {
            Builtin::AmplitudeDamping { gamma } => *gamma,
            Builtin::Dephasing { p } | Builtin::Depolarizing { p } => *p,
            _ => unreachable!(),
        };
        let noise = Builtin::SingleSite {
            inner: Box::new(b),
            site: 0,
            n_qubits: 2,
        }
        .channel()?;
        push(
            format!("z0-code/{label}({param})@q0"),
            pauli_z(),
            z0.clone(),
            &[(0, 0), (1, 2)],
            0.0,
            noise,
        )?;
    }

    // H_S = Z_0 + Z_1 with an energy shift; noise on both qubits.
    let zz = total_z(2);
    let shifted: [(&str, Builtin); 3] = [
        ("dephasing", Builtin::Dephasing { p: 0.2 }),
        ("amplitude_damping", Builtin::AmplitudeDamping { gamma: 0.2 }),
        ("depolarizing", Builtin::Depolarizing { p: 0.2 }),
    ];
    for (label, b) in shifted {
        push(
            format!("total-z-code(+1)/{label}@all"),
            pauli_z(),
            zz.clone(),
            &[(0, 1), (1, 3)],
            1.0,
            on_every_qubit(&b, 2)?,
        )?;
    }
    push(
        "total-z-code(-1)/dephasing@all".into(),
        pauli_z(),
        zz,
        &[(0, 0), (1, 2)],
        -1.0,
        on_every_qubit(&Builtin::Dephasing { p: 0.2 }, 2)?,
    )?;

    // Three-qubit repetition code with H_L = 3Z and H_S = Σ Z_k.
    let z3 = total_z(3);
    for (label, b) in [
        ("dephasing", Builtin::Dephasing { p: 0.1 }),
        ("dephasing", Builtin::Dephasing { p: 0.3 }),
        ("amplitude_damping", Builtin::AmplitudeDamping { gamma: 0.2 }),
    ] {
        push(
            format!("repetition/{label}@all"),
            pauli_z() * c(3.0, 0.0),
            z3.clone(),
            &[(0, 0), (1, 7)],
            0.0,
            on_every_qubit(&b, 3)?,
        )?;
    }
    Ok(cases)
}

/// Checks one case: `ε > 1e-6`, noncovariance below 1e-9, HKS satisfied and
/// `H_L` not proportional to the identity.
pub fn no_go_outcome(case: &NoGoCase) -> Result<NoGoOutcome> {
    let eps = epsilon_closed_form(&CodeNoisePair::isometric(&case.encoding, case.noise.clone())?)?.epsilon;
    let noncov = noncovariance(&KrausChannel::from_isometry(&case.encoding), &case.symmetry)?;
    let hks = hks_check(&case.noise, case.symmetry.h_s(), tol::HKS)?;
    let h_l = case.symmetry.h_l().matrix();
    let d_l = h_l.nrows();
    let spread = (h_l - identity(d_l) * (trace(h_l) / d_l as f64)).norm();
    Ok(NoGoOutcome {
        name: case.name.clone(),
        epsilon: eps,
        noncovariance: noncov,
        hks_residual: hks.residual,
        logical_spread: spread,
        passed: eps > 1e-6 && noncov < 1e-9 && hks.ok && spread > 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_no_go_case_passes() {
        let cases = no_go_cases().unwrap();
        assert!(cases.len() >= 10);
        for case in &cases {
            let out = no_go_outcome(case).unwrap();
            assert!(out.passed, "{out:?}");
        }
    }

    #[test]
    fn bit_flip_on_logical_qubit_fails_hks() {
        let noise = Builtin::SingleSite {
            inner: Box::new(Builtin::BitFlip { p: 0.2 }),
            site: 0,
            n_qubits: 2,
        }
        .channel()
        .unwrap();
        let h_s = herm(kron(&pauli_z(), &identity(2)));
        assert!(!hks_check(&noise, &h_s, tol::HKS).unwrap().ok);
    }

    #[test]
    fn every_qubit_noise_is_trace_preserving() {
        let ch = on_every_qubit(&Builtin::Depolarizing { p: 0.3 }, 2).unwrap();
        assert_eq!(ch.len(), 16);
        assert!(KrausChannel::new(ch.kraus().to_vec()).is_ok());
    }
}
