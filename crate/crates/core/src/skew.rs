//! Variance, Wigner-Yanase skew information and the skew-information
//! asymmetry measure.

use log::warn;

use crate::error::{ensure_dim, ensure_shape, Error, Result};
use crate::linalg::{
    commutator, frobenius_norm, max_abs, psd_sqrt, trace, ComplexMatrix, DensityMatrix, HermitianOperator,
};
use crate::tol;

/// How the generators of a [`LieAlgebraBasis`] are normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// `tr(H_p H_q) = δ_pq`.
    Orthonormal,
    /// Pairwise orthogonal with common `tr(H_p²) = scale ≠ 1`.
    Uniform { scale: f64 },
    /// Not checked.
    Raw,
}

/// Generator set `{H_p}` of a Lie algebra representation.
#[derive(Debug, Clone)]
pub struct LieAlgebraBasis {
    generators: Vec<HermitianOperator>,
    label: String,
    normalization: Normalization,
}

impl LieAlgebraBasis {
    /// Validates pairwise Hilbert-Schmidt orthogonality and equal norms.
    /// A uniform scale other than one is accepted with a warning.
    pub fn new(label: impl Into<String>, generators: Vec<HermitianOperator>) -> Result<Self> {
        let label = label.into();
        common_dim(&generators)?;
        let gram = |p: usize, q: usize| trace(&(generators[p].matrix() * generators[q].matrix())).re;
        let scale = gram(0, 0);
        for p in 0..generators.len() {
            let norm_dev = (gram(p, p) - scale).abs();
            if norm_dev > tol::ORTHONORMAL {
                return Err(Error::InvariantViolation {
                    what: format!("equal Hilbert-Schmidt norms in generator set `{label}` (generator {p})"),
                    deviation: norm_dev,
                    tolerance: tol::ORTHONORMAL,
                });
            }
            for q in 0..p {
                let overlap = gram(p, q).abs();
                if overlap > tol::ORTHONORMAL {
                    return Err(Error::InvariantViolation {
                        what: format!("orthogonality of generators {q} and {p} in `{label}`"),
                        deviation: overlap,
                        tolerance: tol::ORTHONORMAL,
                    });
                }
            }
        }
        let normalization = if (scale - 1.0).abs() <= tol::ORTHONORMAL {
            Normalization::Orthonormal
        } else {
            warn!("generator set `{label}` is orthogonal but tr(H_p^2) = {scale}; values scale with it");
            Normalization::Uniform { scale }
        };
        Ok(Self {
            generators,
            label,
            normalization,
        })
    }

    /// Accepts the generators without any orthonormality check.
    pub fn raw(label: impl Into<String>, generators: Vec<HermitianOperator>) -> Result<Self> {
        common_dim(&generators)?;
        Ok(Self {
            generators,
            label: label.into(),
            normalization: Normalization::Raw,
        })
    }

    /// Single-generator basis `{h}` (U(1)), used exactly as supplied.
    pub fn u1(h: HermitianOperator) -> Self {
        let scale = trace(&(h.matrix() * h.matrix())).re;
        let normalization = if (scale - 1.0).abs() <= tol::ORTHONORMAL {
            Normalization::Orthonormal
        } else {
            Normalization::Uniform { scale }
        };
        Self {
            generators: vec![h],
            label: "u1".into(),
            normalization,
        }
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Lie algebra dimension `d_G`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn common_dim(generators: &[HermitianOperator]) -> Result<usize> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Empty("generator set".into()))?;
    let d = first.dim();
    for (p, g) in generators.iter().enumerate() {
        ensure_dim(&format!("generator {p}"), d, g.dim())?;
    }
    Ok(d)
}

/// `V(ρ, H) = tr(ρH²) − (tr ρH)²`.
pub fn variance(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    ensure_dim("variance", rho.dim(), h.dim())?;
    let rh = rho.matrix() * h.matrix();
    let mean = trace(&rh).re;
    let second = trace(&(rh * h.matrix())).re;
    Ok(clamp_small(second - mean * mean))
}

fn clamp_small(v: f64) -> f64 {
    if (-tol::VARIANCE_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `½ ‖[√ρ, K]‖₂²` given `√ρ`.
pub(crate) fn skew_with_sqrt(sqrt_rho: &ComplexMatrix, k: &ComplexMatrix) -> Result<f64> {
    ensure_shape("skew information operator", sqrt_rho.shape(), k.shape())?;
    let n = frobenius_norm(&commutator(sqrt_rho, k)?);
    Ok(0.5 * n * n)
}

/// Wigner-Yanase skew information `I(ρ, H) = −½ tr[√ρ, H]²`.
pub fn skew_information(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    ensure_dim("skew_information", rho.dim(), h.dim())?;
    skew_with_sqrt(&psd_sqrt(rho)?, h.matrix())
}

/// `I(ρ, K) = ½ ‖[√ρ, K]‖₂²` for arbitrary square `K`.
pub fn generalized_skew_information(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch {
            context: "generalized_skew_information (K must be square)".into(),
            expected: format!("{0}x{0}", k.nrows()),
            found: format!("{}x{}", k.nrows(), k.ncols()),
        });
    }
    ensure_dim("generalized_skew_information", rho.dim(), k.nrows())?;
    skew_with_sqrt(&psd_sqrt(rho)?, k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumUncertainty {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `Σ_j I(ρ, K_j) ≥ I(ρ, Σ_j K_j) / N`.
pub fn sum_uncertainty_check(rho: &DensityMatrix, ks: &[ComplexMatrix]) -> Result<SumUncertainty> {
    if ks.is_empty() {
        return Err(Error::Empty("operator list".into()));
    }
    let d = rho.dim();
    let sqrt_rho = psd_sqrt(rho)?;
    let mut total = ComplexMatrix::zeros(d, d);
    let mut lhs = 0.0;
    for (j, k) in ks.iter().enumerate() {
        ensure_shape(&format!("sum_uncertainty_check operator {j}"), (d, d), k.shape())?;
        lhs += skew_with_sqrt(&sqrt_rho, k)?;
        total += k;
    }
    let rhs = skew_with_sqrt(&sqrt_rho, &total)? / ks.len() as f64;
    Ok(SumUncertainty {
        lhs,
        rhs,
        ok: lhs >= rhs - 1e-10,
    })
}

/// `N_G(ρ) = Σ_p I(ρ, H_p)`, generators taken exactly as stored in `basis`.
pub fn asymmetry_measure(rho: &DensityMatrix, basis: &LieAlgebraBasis) -> Result<f64> {
    ensure_dim("asymmetry_measure", rho.dim(), basis.dim())?;
    let sqrt_rho = psd_sqrt(rho)?;
    basis
        .generators
        .iter()
        .map(|h| skew_with_sqrt(&sqrt_rho, h.matrix()))
        .sum()
}

/// Max over generators of the max-abs entry of `[ρ, H_p]`.
pub fn max_commutator(rho: &DensityMatrix, basis: &LieAlgebraBasis) -> Result<f64> {
    ensure_dim("max_commutator", rho.dim(), basis.dim())?;
    let mut worst: f64 = 0.0;
    for h in &basis.generators {
        worst = worst.max(max_abs(&commutator(rho.matrix(), h.matrix())?));
    }
    Ok(worst)
}

/// Whether `ρ` commutes with every generator (max-abs entry below [`tol::COMMUTE`]).
pub fn is_symmetric(rho: &DensityMatrix, basis: &LieAlgebraBasis) -> Result<bool> {
    Ok(max_commutator(rho, basis)? < tol::COMMUTE)
}
