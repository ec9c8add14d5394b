//! Error-correction metrics: Knill-Laflamme residuals, the infidelity bound on
//! the optimal entanglement fidelity, and the complementary (environment)
//! quantities it is built from.

use crate::channel::{Isometry, KrausChannel};
use crate::error::{ensure_dim, ensure_shape, Error, Result};
use crate::linalg::{
    c, fidelity, frobenius_norm, hermitian_deviation, identity, kron, max_abs, partial_trace, trace,
    trace_norm, ComplexMatrix, DensityMatrix,
};
use crate::skew::skew_with_sqrt;
use crate::tol;

/// Default cap on `d_L · d_E · d_S` for [`complementary_quantities`].
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Encoding `E: L → S` followed by noise `N: S → S`.
#[derive(Debug, Clone)]
pub struct CodeNoisePair {
    encoding: KrausChannel,
    noise: KrausChannel,
}

impl CodeNoisePair {
    pub fn new(encoding: KrausChannel, noise: KrausChannel) -> Result<Self> {
        ensure_dim("noise input vs noise output", noise.d_in(), noise.d_out())?;
        ensure_dim("encoding output vs noise input", noise.d_in(), encoding.d_out())?;
        Ok(Self { encoding, noise })
    }

    pub fn isometric(w: &Isometry, noise: KrausChannel) -> Result<Self> {
        Self::new(KrausChannel::from_isometry(w), noise)
    }

    pub fn encoding(&self) -> &KrausChannel {
        &self.encoding
    }

    pub fn noise(&self) -> &KrausChannel {
        &self.noise
    }

    pub fn d_l(&self) -> usize {
        self.encoding.d_in()
    }

    pub fn d_s(&self) -> usize {
        self.noise.d_in()
    }

    /// Number of encoding Kraus operators.
    pub fn m(&self) -> usize {
        self.encoding.len()
    }

    /// Number of noise Kraus operators.
    pub fn n(&self) -> usize {
        self.noise.len()
    }

    /// Environment dimension of the composite dilation, `m · n`.
    pub fn d_e(&self) -> usize {
        self.m() * self.n()
    }
}

#[derive(Debug, Clone)]
pub struct KnillLaflamme {
    pub ok: bool,
    pub alpha: ComplexMatrix,
    pub residual: f64,
}

fn check_projector(p: &ComplexMatrix) -> Result<()> {
    crate::linalg::ensure_square("projector", p)?;
    let herm = hermitian_deviation(p);
    let idem = max_abs(&(p * p - p));
    let deviation = herm.max(idem);
    if deviation > tol::PROJECTOR {
        return Err(Error::InvariantViolation {
            what: "projector (P^2 = P = P^dagger)".into(),
            deviation,
            tolerance: tol::PROJECTOR,
        });
    }
    Ok(())
}

/// Checks `P A_i^dagger A_j P = α_ij P` with `α_ij = tr(P A_i^dagger A_j P) / tr P`.
pub fn knill_laflamme(p: &ComplexMatrix, noise: &KrausChannel, tolerance: f64) -> Result<KnillLaflamme> {
    check_projector(p)?;
    ensure_dim("knill_laflamme (projector vs noise)", noise.d_in(), p.nrows())?;
    let tr_p = trace(p).re;
    if tr_p <= 0.5 {
        return Err(Error::InvariantViolation {
            what: "nonzero projector".into(),
            deviation: tr_p,
            tolerance: 0.5,
        });
    }
    let a = noise.kraus();
    let n = a.len();
    let mut alpha = ComplexMatrix::zeros(n, n);
    let mut residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let block = p * a[i].adjoint() * &a[j] * p;
            let coeff = trace(&block) / tr_p;
            alpha[(i, j)] = coeff;
            residual = residual.max(frobenius_norm(&(block - p * coeff)));
        }
    }
    Ok(KnillLaflamme {
        ok: residual < tolerance,
        alpha,
        residual,
    })
}

/// The two sums entering the closed-form infidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonTerms {
    /// `Σ_ij tr(A_i^† A_j O A_j^† A_i O)` with `O = Σ_s E_s E_s^†`.
    pub term_o: f64,
    /// `Σ_ij Σ_st |tr(A_i^† A_j E_t E_s^†)|²`.
    pub term_cross: f64,
    /// `term_o − term_cross / d_L`, after clamping.
    pub radicand: f64,
    /// `(m n / 4 d_L) · radicand`.
    pub epsilon_sq: f64,
    pub epsilon: f64,
}

/// Closed-form infidelity `ε = √(mn / 4d_L) · (term_o − term_cross / d_L)^{1/2}`.
pub fn epsilon_closed_form(pair: &CodeNoisePair) -> Result<EpsilonTerms> {
    let d_l = pair.d_l();
    let a = pair.noise.kraus();
    let e = pair.encoding.kraus();
    let d_s = pair.d_s();
    let mut o = ComplexMatrix::zeros(d_s, d_s);
    for es in e {
        o += es * es.adjoint();
    }
    let mut term_o = 0.0;
    let mut term_cross = 0.0;
    for ai in a {
        for aj in a {
            let b = ai.adjoint() * aj;
            term_o += trace(&(&b * &o * b.adjoint() * &o)).re;
            for es in e {
                for et in e {
                    term_cross += trace(&(&b * et * es.adjoint())).norm_sqr();
                }
            }
        }
    }
    let raw = term_o - term_cross / d_l as f64;
    // Differences below the rounding resolution of the two terms are zero.
    let resolution = 64.0 * f64::EPSILON * term_o.abs();
    let radicand = if raw <= resolution {
        let allowed = tol::RADICAND_CLAMP.max(resolution);
        if raw < -allowed {
            return Err(Error::NegativeRadicand {
                value: raw,
                tolerance: allowed,
            });
        }
        0.0
    } else {
        raw
    };
    let prefactor = (pair.m() * pair.n()) as f64 / (4.0 * d_l as f64);
    let epsilon_sq = prefactor * radicand;
    Ok(EpsilonTerms {
        term_o,
        term_cross,
        radicand,
        epsilon_sq,
        epsilon: epsilon_sq.sqrt(),
    })
}

/// Reduced states of the purified output `|Ψ⟩_{RSE}` on the reference and environment.
///
/// `rho_re` is ordered `E ⊗ R` with environment index `i·m + s` (noise index major).
#[derive(Debug, Clone)]
pub struct ComplementaryQuantities {
    pub rho_re: DensityMatrix,
    pub rho_r: DensityMatrix,
    pub rho_e: DensityMatrix,
    pub d_e: usize,
    pub diff_2norm: f64,
    pub diff_1norm: f64,
    /// `F(ρ_RE, ρ_R ⊗ ρ_E)`, itself a lower bound on the optimal entanglement fidelity.
    pub fid_product: f64,
}

impl ComplementaryQuantities {
    /// `ρ_E ⊗ ρ_R` in the same ordering as `rho_re`.
    pub fn product_state(&self) -> ComplexMatrix {
        kron(self.rho_e.matrix(), self.rho_r.matrix())
    }
}

/// `ρ_RE = (1/d_L) Σ ⟨l|E_t^† A_j^† A_i E_s|k⟩ |is⟩⟨jt|_E ⊗ |k⟩⟨l|_R`, built entrywise
/// without materializing `|Ψ⟩`.
pub fn rho_re(pair: &CodeNoisePair) -> ComplexMatrix {
    let d_l = pair.d_l();
    let d_e = pair.d_e();
    let g: Vec<ComplexMatrix> = pair
        .noise
        .kraus()
        .iter()
        .flat_map(|ai| pair.encoding.kraus().iter().map(move |es| ai * es))
        .collect();
    let scale = c(1.0 / d_l as f64, 0.0);
    let mut rho = ComplexMatrix::zeros(d_e * d_l, d_e * d_l);
    for (a, ga) in g.iter().enumerate() {
        for (b, gb) in g.iter().enumerate() {
            let overlap = gb.adjoint() * ga;
            for k in 0..d_l {
                for l in 0..d_l {
                    rho[(a * d_l + k, b * d_l + l)] = overlap[(l, k)] * scale;
                }
            }
        }
    }
    rho
}

pub fn complementary_quantities(pair: &CodeNoisePair, cap: usize) -> Result<ComplementaryQuantities> {
    let (d_l, d_e, d_s) = (pair.d_l(), pair.d_e(), pair.d_s());
    let total = d_l * d_e * d_s;
    if total > cap {
        return Err(Error::CapExceeded { total, cap });
    }
    let rho = rho_re(pair);
    let rho_r = partial_trace(&rho, &[d_e, d_l], &[1])?;
    let rho_e = partial_trace(&rho, &[d_e, d_l], &[0])?;
    let deviation = max_abs(&(&rho_r - identity(d_l) * c(1.0 / d_l as f64, 0.0)));
    if deviation > tol::CHOI_MARGINAL {
        return Err(Error::InvariantViolation {
            what: "reference marginal is maximally mixed".into(),
            deviation,
            tolerance: tol::CHOI_MARGINAL,
        });
    }
    let product = kron(&rho_e, &rho_r);
    let diff = &rho - &product;
    let rho_re = DensityMatrix::from_trusted(rho);
    let product_state = DensityMatrix::from_trusted(product);
    let fid_product = fidelity(&rho_re, &product_state)?;
    Ok(ComplementaryQuantities {
        rho_re,
        rho_r: DensityMatrix::from_trusted(rho_r),
        rho_e: DensityMatrix::from_trusted(rho_e),
        d_e,
        diff_2norm: frobenius_norm(&diff),
        diff_1norm: trace_norm(&diff),
        fid_product,
    })
}

/// `1 − F ≤ ½‖D‖₁ ≤ (√(d_L d_E)/2)‖D‖₂` for `D = ρ_RE − ρ_R ⊗ ρ_E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChain {
    pub one_minus_fid: f64,
    pub half_1norm: f64,
    pub scaled_2norm: f64,
    pub fid_le_trace: bool,
    pub trace_le_frobenius: bool,
}

impl BoundChain {
    pub fn holds(&self) -> bool {
        self.fid_le_trace && self.trace_le_frobenius
    }
}

pub fn bound_chain(cq: &ComplementaryQuantities, d_l: usize) -> BoundChain {
    let slack = 1e-9;
    let one_minus_fid = 1.0 - cq.fid_product;
    let half_1norm = 0.5 * cq.diff_1norm;
    let scaled_2norm = ((d_l * cq.d_e) as f64).sqrt() / 2.0 * cq.diff_2norm;
    BoundChain {
        one_minus_fid,
        half_1norm,
        scaled_2norm,
        fid_le_trace: one_minus_fid <= half_1norm + slack,
        trace_le_frobenius: half_1norm <= scaled_2norm + slack,
    }
}

#[derive(Debug, Clone)]
pub struct InfidelityReport {
    pub epsilon: f64,
    pub terms: EpsilonTerms,
    /// `1 − ε`, a lower bound on the optimal entanglement fidelity.
    pub lower_bound_fe: f64,
    /// `√(d_L d_E)/2 · ‖ρ_RE − ρ_R ⊗ ρ_E‖₂`, the same quantity as `epsilon` computed from the states.
    pub oracle_2norm: f64,
    pub chain: BoundChain,
    pub complementary: ComplementaryQuantities,
}

impl InfidelityReport {
    /// `|ε − oracle| / max(ε, oracle, 1e-6)`; the floor keeps exact zeros
    /// from turning rounding noise in the oracle into a relative error of 1.
    pub fn oracle_relative_error(&self) -> f64 {
        let scale = self.epsilon.max(self.oracle_2norm).max(1e-6);
        (self.epsilon - self.oracle_2norm).abs() / scale
    }
}

pub fn infidelity(pair: &CodeNoisePair) -> Result<InfidelityReport> {
    infidelity_with_cap(pair, DEFAULT_DIMENSION_CAP)
}

pub fn infidelity_with_cap(pair: &CodeNoisePair, cap: usize) -> Result<InfidelityReport> {
    let terms = epsilon_closed_form(pair)?;
    let complementary = complementary_quantities(pair, cap)?;
    let chain = bound_chain(&complementary, pair.d_l());
    Ok(InfidelityReport {
        epsilon: terms.epsilon,
        terms,
        lower_bound_fe: 1.0 - terms.epsilon,
        oracle_2norm: chain.scaled_2norm,
        chain,
        complementary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewIdentity {
    pub epsilon_sq: f64,
    /// `Σ_ij I(|ψ̃⟩⟨ψ̃|, 1_L ⊗ K_ij)` with `K_ij = P A_i^† A_j P`.
    pub skew_sum: f64,
    /// `4 d_L ε² / n`.
    pub lhs: f64,
    /// `d_L · skew_sum`.
    pub rhs: f64,
    pub matches: bool,
}

/// `K_ij = P A_i^† A_j P`, row-major in `(i, j)`.
pub fn code_error_operators(w: &Isometry, noise: &KrausChannel) -> Result<Vec<ComplexMatrix>> {
    ensure_shape(
        "noise acting on the code",
        (w.d_s(), w.d_s()),
        (noise.d_in(), noise.d_out()),
    )?;
    let p = w.projector();
    let a = noise.kraus();
    Ok(a.iter()
        .flat_map(|ai| a.iter().map(|aj| &p * ai.adjoint() * aj * &p))
        .collect())
}

/// Infidelity of an isometric code rewritten as generalized skew information.
pub fn isometric_infidelity_via_skew(w: &Isometry, noise: &KrausChannel) -> Result<SkewIdentity> {
    let pair = CodeNoisePair::isometric(w, noise.clone())?;
    let eps = epsilon_closed_form(&pair)?;
    let d_l = w.d_l();
    let psi = w.encoded_entangled_state().density();
    // a pure state is its own square root
    let sqrt_rho = psi.matrix().clone();
    let id_l = identity(d_l);
    let mut skew_sum = 0.0;
    for k in code_error_operators(w, noise)? {
        skew_sum += skew_with_sqrt(&sqrt_rho, &kron(&id_l, &k))?;
    }
    let lhs = 4.0 * d_l as f64 * eps.epsilon_sq / noise.len() as f64;
    let rhs = d_l as f64 * skew_sum;
    Ok(SkewIdentity {
        epsilon_sq: eps.epsilon_sq,
        skew_sum,
        lhs,
        rhs,
        matches: (lhs - rhs).abs() < 1e-9,
    })
}
