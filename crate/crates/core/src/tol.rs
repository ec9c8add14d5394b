//! Numerical tolerances. Every threshold used by the library lives here.

use serde::{Deserialize, Serialize};

/// Max-abs deviation of `M - M^dagger` accepted for Hermitian operators.
pub const HERMITIAN: f64 = 1e-10;
/// Trace deviation accepted for density matrices.
pub const TRACE: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are float noise and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Norm deviation accepted for pure states.
pub const PURE_NORM: f64 = 1e-12;
/// Max-abs deviation of `sum K^dagger K` from the identity.
pub const COMPLETENESS: f64 = 1e-9;
/// Max-abs deviation of `W^dagger W` from the identity.
pub const ISOMETRY: f64 = 1e-9;
/// Projector checks (`P^2 = P`, `P = P^dagger`).
pub const PROJECTOR: f64 = 1e-9;
/// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
pub const CHOI_CUTOFF: f64 = 1e-10;
/// Reduced Choi state on the input must be maximally mixed to this accuracy.
pub const CHOI_MARGINAL: f64 = 1e-9;
pub const KNILL_LAFLAMME: f64 = 1e-8;
pub const HKS: f64 = 1e-8;
/// Commutator 2-norm below which a channel counts as covariant.
pub const COVARIANCE: f64 = 1e-9;
/// Negative infidelity radicands down to `-RADICAND_CLAMP` are cancellation noise.
pub const RADICAND_CLAMP: f64 = 1e-10;
/// Max-abs commutator entry below which a state commutes with a generator.
pub const COMMUTE: f64 = 1e-9;
/// Hilbert-Schmidt orthogonality / equal-norm check for generator sets.
pub const ORTHONORMAL: f64 = 1e-8;
/// Singular values above this count towards the rank.
pub const RANK_CUTOFF: f64 = 1e-10;
/// Eigenvalue agreement when building covariant isometries.
pub const EIGEN_MATCH: f64 = 1e-8;
/// Variances and skew informations above `-VARIANCE_CLAMP` are clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

/// Runtime-overridable copy of the constants above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub psd_clamp: f64,
    pub pure_norm: f64,
    pub completeness: f64,
    pub isometry: f64,
    pub projector: f64,
    pub knill_laflamme: f64,
    pub hks: f64,
    pub covariance: f64,
    pub radicand_clamp: f64,
    pub commute: f64,
    pub orthonormal: f64,
    pub eigen_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            trace: TRACE,
            psd_clamp: PSD_CLAMP,
            pure_norm: PURE_NORM,
            completeness: COMPLETENESS,
            isometry: ISOMETRY,
            projector: PROJECTOR,
            knill_laflamme: KNILL_LAFLAMME,
            hks: HKS,
            covariance: COVARIANCE,
            radicand_clamp: RADICAND_CLAMP,
            commute: COMMUTE,
            orthonormal: ORTHONORMAL,
            eigen_match: EIGEN_MATCH,
        }
    }
}

impl Tolerances {
    /// Multiplies every tolerance by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            hermitian: self.hermitian * factor,
            trace: self.trace * factor,
            psd_clamp: self.psd_clamp * factor,
            pure_norm: self.pure_norm * factor,
            completeness: self.completeness * factor,
            isometry: self.isometry * factor,
            projector: self.projector * factor,
            knill_laflamme: self.knill_laflamme * factor,
            hks: self.hks * factor,
            covariance: self.covariance * factor,
            radicand_clamp: self.radicand_clamp * factor,
            commute: self.commute * factor,
            orthonormal: self.orthonormal * factor,
            eigen_match: self.eigen_match * factor,
        }
    }
}
