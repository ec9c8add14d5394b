//! Haar-random unitaries, the random-code ensemble `W = U(1_L ⊗ |0⟩_A)`,
//! second-moment Haar integrals and Monte-Carlo checks of the code averages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{Isometry, KrausChannel};
use crate::covariance::{noncovariance, U1Spec};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{
    c, identity, kron, partial_trace, swap_operator, trace, ComplexMatrix, HermitianOperator, C64,
};
use crate::qec::{epsilon_closed_form, CodeNoisePair};
use crate::random::ginibre;

/// RNG for sample `index` of a run seeded with `seed`. Each index owns its own
/// ChaCha20 stream, so results do not depend on how samples are scheduled.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix, with each column
/// of `Q` multiplied by the phase of the matching diagonal entry of `R`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "haar_unitary needs d >= 1");
    let qr = ginibre(d, d, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rkk = r[(k, k)];
        let norm = rkk.norm();
        let phase = if norm > 0.0 { rkk / norm } else { c(1.0, 0.0) };
        q.column_mut(k).scale_mut_complex(phase);
    }
    q
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<'a> ScaleComplex
    for nalgebra::Matrix<
        C64,
        nalgebra::Dyn,
        nalgebra::U1,
        nalgebra::ViewStorageMut<'a, C64, nalgebra::Dyn, nalgebra::U1, nalgebra::U1, nalgebra::Dyn>,
    >
{
    fn scale_mut_complex(&mut self, s: C64) {
        for x in self.iter_mut() {
            *x *= s;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeededEnsemble {
    pub d_l: usize,
    pub d_a: usize,
    pub d_s: usize,
    pub seed: u64,
    pub samples: usize,
}

impl SeededEnsemble {
    pub fn new(d_l: usize, d_a: usize, seed: u64, samples: usize) -> Result<Self> {
        if d_l == 0 || d_a == 0 {
            return Err(Error::DegenerateDimension {
                what: "random-code ensemble".into(),
                dim: 0,
            });
        }
        if samples == 0 {
            return Err(Error::Empty("sample count".into()));
        }
        Ok(Self {
            d_l,
            d_a,
            d_s: d_l * d_a,
            seed,
            samples,
        })
    }

    /// The Haar unitary behind sample `index`.
    pub fn unitary(&self, index: usize) -> Result<ComplexMatrix> {
        if index >= self.samples {
            return Err(Error::InvalidParameter {
                name: "index".into(),
                value: index as f64,
                reason: format!("must be below the sample count {}", self.samples),
            });
        }
        Ok(haar_unitary(self.d_s, &mut sample_rng(self.seed, index as u64)))
    }
}

/// `W = U(1_L ⊗ |0⟩_A)` for the unitary of sample `index`: the columns `k·d_A`.
pub fn random_code(ens: &SeededEnsemble, index: usize) -> Result<Isometry> {
    let u = ens.unitary(index)?;
    Ok(code_from_unitary(&u, ens.d_l, ens.d_a))
}

pub fn code_from_unitary(u: &ComplexMatrix, d_l: usize, d_a: usize) -> Isometry {
    let w = ComplexMatrix::from_fn(d_l * d_a, d_l, |r, k| u[(r, k * d_a)]);
    Isometry::from_trusted(w)
}

fn check_square(context: &str, m: &ComplexMatrix, d: usize) -> Result<()> {
    ensure_dim(context, d, m.nrows())?;
    ensure_dim(context, d, m.ncols())
}

fn second_moment_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DegenerateDimension {
            what: "second-moment Haar integral".into(),
            dim: d,
        });
    }
    Ok(())
}

/// `∫ U A U^† dμ = (tr A / d) 1`.
pub fn haar_moment_1(a: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    check_square("haar_moment_1 (A)", a, d)?;
    Ok(identity(d) * (trace(a) / d as f64))
}

/// `∫ (U_A ⊗ 1_B) X (U_A ⊗ 1_B)^† dμ = (1_A / d_A) ⊗ tr_A X`.
pub fn haar_moment_partial(x: &ComplexMatrix, d_a: usize) -> Result<ComplexMatrix> {
    if d_a == 0 || !x.nrows().is_multiple_of(d_a) {
        return Err(Error::DimensionMismatch {
            context: "haar_moment_partial (d_A must divide dim X)".into(),
            expected: format!("multiple of {d_a}"),
            found: x.nrows().to_string(),
        });
    }
    let d_b = x.nrows() / d_a;
    check_square("haar_moment_partial (X)", x, d_a * d_b)?;
    let reduced = partial_trace(x, &[d_a, d_b], &[1])?;
    Ok(kron(&(identity(d_a) / c(d_a as f64, 0.0)), &reduced))
}

/// `∫ (U ⊗ U) A (U ⊗ U)^† dμ` with `F` the swap on `C^d ⊗ C^d`.
pub fn haar_moment_uu(a: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    second_moment_dim(d)?;
    check_square("haar_moment_uu (A)", a, d * d)?;
    let f = swap_operator(d);
    let df = d as f64;
    let den = df * df - 1.0;
    let tr_a = trace(a);
    let tr_af = trace(&(a * &f));
    let coef_id = tr_a / den - tr_af / (df * den);
    let coef_f = tr_a / (df * den) - tr_af / den;
    Ok(identity(d * d) * coef_id - f * coef_f)
}

/// `∫ U A U^† X U B U^† dμ`.
pub fn haar_moment_sandwich(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    d: usize,
) -> Result<ComplexMatrix> {
    second_moment_dim(d)?;
    check_square("haar_moment_sandwich (A)", a, d)?;
    check_square("haar_moment_sandwich (B)", b, d)?;
    check_square("haar_moment_sandwich (X)", x, d)?;
    let df = d as f64;
    let den = df * (df * df - 1.0);
    let tr_ab = trace(&(a * b));
    let tr_a_tr_b = trace(a) * trace(b);
    let coef_id = (tr_ab * df - tr_a_tr_b) / den * trace(x);
    let coef_x = (tr_a_tr_b * df - tr_ab) / den;
    Ok(identity(d) * coef_id + x * coef_x)
}

fn check_average_dims(what: &str, d_l: usize, d_s: usize) -> Result<()> {
    if d_s < 2 {
        return Err(Error::DegenerateDimension {
            what: what.into(),
            dim: d_s,
        });
    }
    if d_l == 0 || !d_s.is_multiple_of(d_l) {
        return Err(Error::DimensionMismatch {
            context: format!("{what} (d_L must divide d_S)"),
            expected: format!("divisor of {d_s}"),
            found: d_l.to_string(),
        });
    }
    Ok(())
}

/// Haar average of `ε²` over the random code ensemble:
/// `n(d_L²−1)/(4 d_L (d_S²−1)) Σ_ij [tr(A_j^† A_i A_i^† A_j) − |tr(A_i^† A_j)|²/d_S]`.
pub fn avg_infidelity_analytic(noise: &KrausChannel, d_l: usize, d_s: usize) -> Result<f64> {
    check_average_dims("average infidelity", d_l, d_s)?;
    ensure_dim("average infidelity (noise input)", d_s, noise.d_in())?;
    ensure_dim("average infidelity (noise output)", d_s, noise.d_out())?;
    let a = noise.kraus();
    let n = a.len() as f64;
    let (dl, ds) = (d_l as f64, d_s as f64);
    let mut sum = 0.0;
    for ai in a {
        for aj in a {
            let b = ai.adjoint() * aj;
            sum += trace(&(b.adjoint() * &b)).re - trace(&b).norm_sqr() / ds;
        }
    }
    Ok(n * (dl * dl - 1.0) / (4.0 * dl * (ds * ds - 1.0)) * sum)
}

/// Haar average of the U(1) noncovariance of the random code.
pub fn avg_noncovariance_analytic(h_l: &HermitianOperator, h_s: &HermitianOperator) -> Result<f64> {
    let (d_l, d_s) = (h_l.dim(), h_s.dim());
    check_average_dims("average noncovariance", d_l, d_s)?;
    let (dl, ds) = (d_l as f64, d_s as f64);
    let tr_l = trace(h_l.matrix()).re;
    let tr_l2 = trace(&(h_l.matrix() * h_l.matrix())).re;
    let tr_s = trace(h_s.matrix()).re;
    let tr_s2 = trace(&(h_s.matrix() * h_s.matrix())).re;
    let logical = (dl * tr_l2 - tr_l * tr_l) / (dl * dl);
    let physical =
        ((dl * ds * ds - ds) * tr_s2 - (dl * ds - 1.0) * tr_s * tr_s) / (dl * ds * (ds * ds - 1.0));
    Ok(logical + physical)
}

/// Projective dephasing on the first qubit of `C^2 ⊗ C^{d_S/2}`:
/// Kraus set `{|0⟩⟨0| ⊗ 1, |1⟩⟨1| ⊗ 1}`.
pub fn first_factor_dephasing(d_s: usize) -> Result<KrausChannel> {
    if d_s < 2 || !d_s.is_multiple_of(2) {
        return Err(Error::InvalidParameter {
            name: "d_S".into(),
            value: d_s as f64,
            reason: "must be even and at least 2".into(),
        });
    }
    let rest = identity(d_s / 2);
    let kraus = (0..2)
        .map(|k| kron(&crate::linalg::ket_bra(2, k, k), &rest))
        .collect();
    KrausChannel::new(kraus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub analytic: f64,
    /// `(mean − analytic)/stderr`; zero when the deviation is at rounding
    /// level (`1e-12` relative), infinite when only the spread vanishes.
    pub z_score: f64,
}

impl MCEstimate {
    pub fn from_samples(values: &[f64], analytic: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("Monte-Carlo sample set".into()));
        }
        let n = values.len();
        let mean = pairwise_sum(values) / n as f64;
        let stderr = if n > 1 {
            let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            (pairwise_sum(&sq) / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        let dev = mean - analytic;
        // Constant integrands leave only rounding in both `dev` and `stderr`.
        let z_score = if dev.abs() <= 1e-12 * analytic.abs().max(1.0) {
            0.0
        } else if stderr > 0.0 {
            dev / stderr
        } else {
            dev.signum() * f64::INFINITY
        };
        Ok(Self {
            mean,
            stderr,
            samples: n,
            analytic,
            z_score,
        })
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z_score.abs() < sigmas
    }
}

/// Pairwise summation in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        values.iter().sum()
    } else {
        let (lo, hi) = values.split_at(values.len() / 2);
        pairwise_sum(lo) + pairwise_sum(hi)
    }
}

/// What to average over the random-code ensemble.
#[derive(Debug, Clone)]
pub enum Quantity {
    InfidelitySq { noise: KrausChannel },
    Noncovariance { spec: U1Spec },
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::InfidelitySq { .. } => "infidelity_sq",
            Quantity::Noncovariance { .. } => "noncovariance",
        }
    }

    pub fn analytic(&self, ens: &SeededEnsemble) -> Result<f64> {
        match self {
            Quantity::InfidelitySq { noise } => avg_infidelity_analytic(noise, ens.d_l, ens.d_s),
            Quantity::Noncovariance { spec } => {
                ensure_dim("noncovariance average (H_L)", ens.d_l, spec.h_l().dim())?;
                ensure_dim("noncovariance average (H_S)", ens.d_s, spec.h_s().dim())?;
                avg_noncovariance_analytic(spec.h_l(), spec.h_s())
            }
        }
    }

    fn evaluate(&self, w: &Isometry) -> Result<f64> {
        match self {
            Quantity::InfidelitySq { noise } => {
                Ok(epsilon_closed_form(&CodeNoisePair::isometric(w, noise.clone())?)?.epsilon_sq)
            }
            Quantity::Noncovariance { spec } => noncovariance(&KrausChannel::from_isometry(w), spec),
        }
    }
}

/// Monte-Carlo average over the ensemble, compared with the analytic value.
/// Bit-identical for a given ensemble regardless of the rayon pool size.
pub fn mc_average(quantity: &Quantity, ens: &SeededEnsemble) -> Result<MCEstimate> {
    let analytic = quantity.analytic(ens)?;
    let values = (0..ens.samples)
        .into_par_iter()
        .map(|i| quantity.evaluate(&random_code(ens, i)?))
        .collect::<Result<Vec<f64>>>()?;
    MCEstimate::from_samples(&values, analytic)
}

/// The four Haar integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentItem {
    Twirl,
    PartialTwirl,
    TensorTwirl,
    Sandwich,
}

impl MomentItem {
    pub const ALL: [MomentItem; 4] = [
        MomentItem::Twirl,
        MomentItem::PartialTwirl,
        MomentItem::TensorTwirl,
        MomentItem::Sandwich,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MomentItem::Twirl => "twirl",
            MomentItem::PartialTwirl => "partial_twirl",
            MomentItem::TensorTwirl => "tensor_twirl",
            MomentItem::Sandwich => "sandwich",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub item: MomentItem,
    pub d: usize,
    pub samples: usize,
    /// Largest `|mean − exact|/stderr` over real and imaginary parts of all entries.
    pub max_z: f64,
    pub max_abs_deviation: f64,
    pub passed: bool,
}

/// Dimension of the spectator factor `B` in the partial-twirl check.
const PARTIAL_TWIRL_SPECTATOR: usize = 2;

type SampleFn = Box<dyn Fn(&ComplexMatrix) -> ComplexMatrix + Sync>;

/// Entrywise Monte-Carlo check of one Haar integral with random `A`, `B`, `X`.
/// Passes when every real and imaginary part lies within `sigmas` standard
/// errors (plus an absolute floor of 1e-12 for entries with no spread).
pub fn moment_check(
    item: MomentItem,
    d: usize,
    samples: usize,
    seed: u64,
    sigmas: f64,
) -> Result<MomentCheck> {
    if samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            value: samples as f64,
            reason: "need at least two samples for a standard error".into(),
        });
    }
    // Inputs come from a stream no sample uses.
    let mut input_rng = sample_rng(seed, u64::MAX);
    let (exact, sample_fn): (ComplexMatrix, SampleFn) = match item {
        MomentItem::Twirl => {
            let a = ginibre(d, d, &mut input_rng);
            let exact = haar_moment_1(&a, d)?;
            (exact, Box::new(move |u| u * &a * u.adjoint()))
        }
        MomentItem::PartialTwirl => {
            let db = PARTIAL_TWIRL_SPECTATOR;
            let x = ginibre(d * db, d * db, &mut input_rng);
            let exact = haar_moment_partial(&x, d)?;
            let id_b = identity(db);
            (
                exact,
                Box::new(move |u| {
                    let ub = kron(u, &id_b);
                    &ub * &x * ub.adjoint()
                }),
            )
        }
        MomentItem::TensorTwirl => {
            let a = ginibre(d * d, d * d, &mut input_rng);
            let exact = haar_moment_uu(&a, d)?;
            (
                exact,
                Box::new(move |u| {
                    let uu = kron(u, u);
                    &uu * &a * uu.adjoint()
                }),
            )
        }
        MomentItem::Sandwich => {
            let a = ginibre(d, d, &mut input_rng);
            let b = ginibre(d, d, &mut input_rng);
            let x = ginibre(d, d, &mut input_rng);
            let exact = haar_moment_sandwich(&a, &b, &x, d)?;
            (
                exact,
                Box::new(move |u| {
                    let ud = u.adjoint();
                    u * &a * &ud * &x * u * &b * &ud
                }),
            )
        }
    };
    let (rows, cols) = exact.shape();
    let draws: Vec<ComplexMatrix> = (0..samples)
        .into_par_iter()
        .map(|i| sample_fn(&haar_unitary(d, &mut sample_rng(seed, i as u64))))
        .collect();
    let mut max_z: f64 = 0.0;
    let mut max_dev: f64 = 0.0;
    let mut passed = true;
    let mut column = vec![0.0; samples];
    for r in 0..rows {
        for col in 0..cols {
            for part in [false, true] {
                for (slot, m) in column.iter_mut().zip(&draws) {
                    let z = m[(r, col)];
                    *slot = if part { z.im } else { z.re };
                }
                let target = if part {
                    exact[(r, col)].im
                } else {
                    exact[(r, col)].re
                };
                let est = MCEstimate::from_samples(&column, target)?;
                let dev = (est.mean - target).abs();
                max_dev = max_dev.max(dev);
                if est.stderr > 0.0 {
                    max_z = max_z.max(dev / est.stderr);
                }
                if dev > sigmas * est.stderr + 1e-12 {
                    passed = false;
                }
            }
        }
    }
    Ok(MomentCheck {
        item,
        d,
        samples,
        max_z,
        max_abs_deviation: max_dev,
        passed,
    })
}
