//! Channel representations: Kraus lists, Choi states, Stinespring dilations.

use std::cmp::Ordering;

use crate::error::{ensure_dim, ensure_shape, Error, Result};
use crate::linalg::{
    c, eigh, ensure_finite, identity, kron, max_abs, outer, partial_trace, pauli_x, pauli_y, pauli_z,
    real_matrix, ComplexMatrix, ComplexVector, DensityMatrix, PureState,
};
use crate::tol;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(kraus, tol::COMPLETENESS)
    }

    pub fn with_tolerance(kraus: Vec<ComplexMatrix>, tolerance: f64) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Empty("Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        if d_in == 0 || d_out == 0 {
            return Err(Error::Empty("Kraus operator".into()));
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for (idx, k) in kraus.iter().enumerate() {
            ensure_shape(&format!("Kraus operator {idx}"), (d_out, d_in), k.shape())?;
            ensure_finite(k)?;
            sum += k.adjoint() * k;
        }
        let deviation = max_abs(&(sum - identity(d_in)));
        if deviation > tolerance {
            return Err(Error::InvariantViolation {
                what: "Kraus completeness".into(),
                deviation,
                tolerance,
            });
        }
        Ok(Self { d_in, d_out, kraus })
    }

    pub(crate) fn from_trusted(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>) -> Self {
        Self { d_in, d_out, kraus }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_trusted(d, d, vec![identity(d)])
    }

    /// Single-Kraus channel `ρ ↦ W ρ W^dagger`.
    pub fn from_isometry(w: &Isometry) -> Self {
        Self::from_trusted(w.d_l(), w.d_s(), vec![w.matrix().clone()])
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// The isometry, when the channel has a single Kraus operator.
    pub fn as_isometry(&self) -> Option<Isometry> {
        match self.kraus.as_slice() {
            [w] => Some(Isometry { w: w.clone() }),
            _ => None,
        }
    }
}

/// `W : C^{d_L} → C^{d_S}` with `W^dagger W = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    w: ComplexMatrix,
}

impl Isometry {
    pub fn new(w: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(w, tol::ISOMETRY)
    }

    pub fn with_tolerance(w: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let (d_s, d_l) = w.shape();
        if d_l == 0 {
            return Err(Error::Empty("isometry".into()));
        }
        if d_s < d_l {
            return Err(Error::DimensionMismatch {
                context: "isometry (d_S >= d_L)".into(),
                expected: format!("at least {d_l} rows"),
                found: d_s.to_string(),
            });
        }
        ensure_finite(&w)?;
        let deviation = max_abs(&(w.adjoint() * &w - identity(d_l)));
        if deviation > tolerance {
            return Err(Error::InvariantViolation {
                what: "isometry W^dagger W = 1".into(),
                deviation,
                tolerance,
            });
        }
        Ok(Self { w })
    }

    pub(crate) fn from_trusted(w: ComplexMatrix) -> Self {
        Self { w }
    }

    pub fn d_l(&self) -> usize {
        self.w.ncols()
    }

    pub fn d_s(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    /// Code-space projector `P = W W^dagger`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.w * self.w.adjoint()
    }

    /// `|ψ̃⟩ = (1_L ⊗ W)|ψ⟩` for the maximally entangled `|ψ⟩` on `L ⊗ L`.
    pub fn encoded_entangled_state(&self) -> PureState {
        let (d_l, d_s) = (self.d_l(), self.d_s());
        let norm = c(1.0 / (d_l as f64).sqrt(), 0.0);
        let mut v = ComplexVector::zeros(d_l * d_s);
        for k in 0..d_l {
            for s in 0..d_s {
                v[k * d_s + s] = self.w[(s, k)] * norm;
            }
        }
        PureState::from_trusted(v)
    }
}

/// Normalized Choi state `(I ⊗ E)(|ψ⟩⟨ψ|)` on `L ⊗ S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    d_l: usize,
    d_s: usize,
    state: DensityMatrix,
}

impl ChoiState {
    pub fn new(d_l: usize, d_s: usize, state: DensityMatrix) -> Result<Self> {
        ensure_dim("Choi state dimension", d_l * d_s, state.dim())?;
        let marginal = partial_trace(state.matrix(), &[d_l, d_s], &[0])?;
        let deviation = max_abs(&(marginal - identity(d_l) * c(1.0 / d_l as f64, 0.0)));
        if deviation > tol::CHOI_MARGINAL {
            return Err(Error::InvariantViolation {
                what: "Choi marginal on L is maximally mixed (trace preservation)".into(),
                deviation,
                tolerance: tol::CHOI_MARGINAL,
            });
        }
        Ok(Self { d_l, d_s, state })
    }

    pub fn d_l(&self) -> usize {
        self.d_l
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }
}

/// Stinespring dilation `V|φ⟩ = Σ_a K_a|φ⟩ ⊗ |a⟩_E` on `S ⊗ E`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stinespring {
    pub isometry: Isometry,
    pub d_e: usize,
}

pub fn apply(channel: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ensure_dim("apply (channel input vs state)", channel.d_in, rho.dim())?;
    let mut out = ComplexMatrix::zeros(channel.d_out, channel.d_out);
    for k in &channel.kraus {
        out += k * rho.matrix() * k.adjoint();
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// `outer ∘ inner`, Kraus list `{A_i E_s}` with the outer index major.
pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    ensure_dim("compose (inner output vs outer input)", outer.d_in, inner.d_out)?;
    let kraus = outer
        .kraus
        .iter()
        .flat_map(|a| inner.kraus.iter().map(move |e| a * e))
        .collect();
    Ok(KrausChannel::from_trusted(inner.d_in, outer.d_out, kraus))
}

/// `(1/√d) Σ_k |k⟩|k⟩`.
pub fn maximally_entangled(d: usize) -> PureState {
    let mut v = ComplexVector::zeros(d * d);
    let amp = c(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        v[k * d + k] = amp;
    }
    PureState::from_trusted(v)
}

pub fn choi_of(channel: &KrausChannel) -> ChoiState {
    let (d_l, d_s) = (channel.d_in, channel.d_out);
    let norm = c(1.0 / (d_l as f64).sqrt(), 0.0);
    let mut phi = ComplexMatrix::zeros(d_l * d_s, d_l * d_s);
    for k in &channel.kraus {
        // (1 ⊗ K)|ψ⟩ has amplitude K[s, l] / √d_L at index l * d_S + s.
        let mut v = ComplexVector::zeros(d_l * d_s);
        for l in 0..d_l {
            for s in 0..d_s {
                v[l * d_s + s] = k[(s, l)] * norm;
            }
        }
        phi += outer(&v, &v);
    }
    ChoiState {
        d_l,
        d_s,
        state: DensityMatrix::from_trusted(phi),
    }
}

/// Kraus operators from the Choi eigendecomposition: `K_a[s, l] = √(d_L λ_a) v_a[l d_S + s]`
/// for every eigenvalue above [`tol::CHOI_CUTOFF`], in descending eigenvalue order.
pub fn channel_of(choi: &ChoiState) -> KrausChannel {
    let (d_l, d_s) = (choi.d_l, choi.d_s);
    let (values, vectors) = eigh(choi.state.matrix());
    let mut kept: Vec<(f64, ComplexVector)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > tol::CHOI_CUTOFF)
        .map(|(k, &v)| (v, canonical_phase(vectors.column(k).into_owned())))
        .collect();
    kept.sort_by(|a, b| {
        if (a.0 - b.0).abs() > tol::CHOI_CUTOFF {
            b.0.total_cmp(&a.0)
        } else {
            lexicographic(&a.1, &b.1)
        }
    });
    let kraus = kept
        .into_iter()
        .map(|(value, v)| {
            let scale = c((d_l as f64 * value).sqrt(), 0.0);
            ComplexMatrix::from_fn(d_s, d_l, |s, l| v[l * d_s + s] * scale)
        })
        .collect();
    KrausChannel::from_trusted(d_l, d_s, kraus)
}

/// Rotates `v` so that its first entry of non-negligible modulus is real positive.
fn canonical_phase(v: ComplexVector) -> ComplexVector {
    match v.iter().find(|z| z.norm() > 1e-12) {
        Some(&z) => {
            let phase = z.conj() / z.norm();
            v * phase
        }
        None => v,
    }
}

fn lexicographic(a: &ComplexVector, b: &ComplexVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Environment basis vector `|a⟩` follows the Kraus list order; for a
/// composed channel that is `a = i * m + s`.
pub fn stinespring(channel: &KrausChannel) -> Stinespring {
    let d_e = channel.kraus.len();
    let (d_in, d_out) = (channel.d_in, channel.d_out);
    let mut v = ComplexMatrix::zeros(d_out * d_e, d_in);
    for (a, k) in channel.kraus.iter().enumerate() {
        for s in 0..d_out {
            for col in 0..d_in {
                v[(s * d_e + a, col)] = k[(s, col)];
            }
        }
    }
    Stinespring {
        isometry: Isometry::from_trusted(v),
        d_e,
    }
}

/// Named single-qubit noise models (plus identity and single-site embedding).
///
/// Kraus conventions, in list order:
/// - `Identity { d }`: `{1_d}`
/// - `Dephasing { p }`: `{√(1-p/2) 1, √(p/2) Z}`; `p = 1` removes all coherence
/// - `BitFlip { p }`: `{√(1-p) 1, √p X}`
/// - `Depolarizing { p }`: `{√(1-3p/4) 1, √(p/4) X, √(p/4) Y, √(p/4) Z}`, i.e. `ρ ↦ (1-p)ρ + p 1/2`
/// - `AmplitudeDamping { gamma }`: `{[[1,0],[0,√(1-γ)]], [[0,√γ],[0,0]]}`
/// - `SingleSite { inner, site, n_qubits }`: `1 ⊗ … ⊗ K ⊗ … ⊗ 1` for each `K` of `inner`,
///   qubit 0 being the most significant tensor factor
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Identity {
        d: usize,
    },
    Dephasing {
        p: f64,
    },
    BitFlip {
        p: f64,
    },
    Depolarizing {
        p: f64,
    },
    AmplitudeDamping {
        gamma: f64,
    },
    SingleSite {
        inner: Box<Builtin>,
        site: usize,
        n_qubits: usize,
    },
}

fn check_probability(name: &str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name: name.into(),
            value,
            reason: "must lie in [0, 1]".into(),
        })
    }
}

impl Builtin {
    pub fn channel(&self) -> Result<KrausChannel> {
        let sq = |x: f64| c(x.sqrt(), 0.0);
        let kraus = match self {
            Builtin::Identity { d } => {
                if *d == 0 {
                    return Err(Error::InvalidParameter {
                        name: "d".into(),
                        value: 0.0,
                        reason: "dimension must be positive".into(),
                    });
                }
                vec![identity(*d)]
            }
            Builtin::Dephasing { p } => {
                let p = check_probability("p", *p)?;
                vec![identity(2) * sq(1.0 - p / 2.0), pauli_z() * sq(p / 2.0)]
            }
            Builtin::BitFlip { p } => {
                let p = check_probability("p", *p)?;
                vec![identity(2) * sq(1.0 - p), pauli_x() * sq(p)]
            }
            Builtin::Depolarizing { p } => {
                let p = check_probability("p", *p)?;
                vec![
                    identity(2) * sq(1.0 - 0.75 * p),
                    pauli_x() * sq(p / 4.0),
                    pauli_y() * sq(p / 4.0),
                    pauli_z() * sq(p / 4.0),
                ]
            }
            Builtin::AmplitudeDamping { gamma } => {
                let g = check_probability("gamma", *gamma)?;
                vec![
                    real_matrix(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]),
                    real_matrix(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]),
                ]
            }
            Builtin::SingleSite {
                inner,
                site,
                n_qubits,
            } => {
                if *site >= *n_qubits {
                    return Err(Error::InvalidParameter {
                        name: "site".into(),
                        value: *site as f64,
                        reason: format!("must be below n_qubits = {n_qubits}"),
                    });
                }
                let inner = inner.channel()?;
                ensure_dim("single_site inner channel (qubit)", 2, inner.d_in)?;
                let left = identity(1 << site);
                let right = identity(1 << (n_qubits - site - 1));
                inner
                    .kraus
                    .iter()
                    .map(|k| kron(&kron(&left, k), &right))
                    .collect()
            }
        };
        KrausChannel::new(kraus)
    }

    /// Parses `name` with a parameter lookup, e.g. `("dephasing", {"p": 0.3})`.
    pub fn from_name(name: &str, param: &dyn Fn(&str) -> Option<f64>) -> Result<Self> {
        let need = |key: &str| {
            param(key).ok_or_else(|| Error::InvalidParameter {
                name: key.into(),
                value: f64::NAN,
                reason: format!("missing parameter for builtin `{name}`"),
            })
        };
        let need_usize = |key: &str| -> Result<usize> {
            let v = need(key)?;
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidParameter {
                    name: key.into(),
                    value: v,
                    reason: "must be a nonnegative integer".into(),
                })
            }
        };
        Ok(match name {
            "identity" => Builtin::Identity { d: need_usize("d")? },
            "dephasing" => Builtin::Dephasing { p: need("p")? },
            "bit_flip" => Builtin::BitFlip { p: need("p")? },
            "depolarizing" => Builtin::Depolarizing { p: need("p")? },
            "amplitude_damping" => Builtin::AmplitudeDamping {
                gamma: need("gamma")?,
            },
            other => return Err(Error::UnknownChannel(other.to_string())),
        })
    }
}
