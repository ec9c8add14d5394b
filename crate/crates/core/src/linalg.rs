//! Dense complex linear algebra.
//!
//! Composite spaces use the row-major (Kronecker) index convention: on
//! `L ⊗ S` the basis vector `|k_L⟩|k_S⟩` sits at index `k_L * d_S + k_S`.
//! Every transposition and partial trace in the crate relies on it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure_dim, ensure_shape, Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Builds a matrix from real entries given row by row.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count");
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn pauli_x() -> ComplexMatrix {
    real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Computational basis vector `|k⟩` in dimension `d`.
pub fn basis_ket(d: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[k] = ONE;
    v
}

/// `|row⟩⟨col|` in dimension `d`.
pub fn ket_bra(d: usize, row: usize, col: usize) -> ComplexMatrix {
    let mut m = zeros(d, d);
    m[(row, col)] = ONE;
    m
}

pub fn outer(ket: &ComplexVector, bra: &ComplexVector) -> ComplexMatrix {
    ket * bra.adjoint()
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-abs entry of `M - M^dagger`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

/// Hermitian part `(M + M^dagger) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

pub fn ensure_square(context: &str, m: &ComplexMatrix) -> Result<usize> {
    ensure_shape(context, (m.nrows(), m.nrows()), m.shape())?;
    Ok(m.nrows())
}

/// Entrywise complex conjugate.
pub fn conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = ensure_square("commutator (left operand)", a)?;
    ensure_shape("commutator (right operand)", (d, d), b.shape())?;
    Ok(a * b - b * a)
}

/// Swap operator `F |i⟩|j⟩ = |j⟩|i⟩` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = ONE;
        }
    }
    f
}

/// Partial trace of `m` on the tensor product with factor dimensions `dims`,
/// keeping the subsystems listed in `keep` (in ascending subsystem order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total = ensure_square("partial_trace", m)?;
    if dims.is_empty() {
        return Err(Error::Empty("partial_trace dims".into()));
    }
    if let Some(&bad) = dims.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidParameter {
            name: "dims".into(),
            value: bad as f64,
            reason: "subsystem dimensions must be positive".into(),
        });
    }
    ensure_dim("partial_trace (product of dims)", total, dims.iter().product())?;
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::InvalidParameter {
                name: "keep".into(),
                value: k as f64,
                reason: format!("subsystem index out of range for {} factors", dims.len()),
            });
        }
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&i| kept[i]).map(|i| dims[i]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&i| !kept[i]).map(|i| dims[i]).collect();
    let d_keep: usize = kept_dims.iter().product();
    let d_trace: usize = traced_dims.iter().product();

    // Strides of each factor in the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let kept_strides: Vec<usize> = (0..dims.len()).filter(|&i| kept[i]).map(|i| strides[i]).collect();
    let traced_strides: Vec<usize> = (0..dims.len())
        .filter(|&i| !kept[i])
        .map(|i| strides[i])
        .collect();

    let offset = |mut idx: usize, sub_dims: &[usize], sub_strides: &[usize]| -> usize {
        let mut full = 0;
        for f in (0..sub_dims.len()).rev() {
            full += (idx % sub_dims[f]) * sub_strides[f];
            idx /= sub_dims[f];
        }
        full
    };
    let kept_offsets: Vec<usize> = (0..d_keep)
        .map(|r| offset(r, &kept_dims, &kept_strides))
        .collect();
    let traced_offsets: Vec<usize> = (0..d_trace)
        .map(|t| offset(t, &traced_dims, &traced_strides))
        .collect();

    let mut out = zeros(d_keep, d_keep);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (col, &co) in kept_offsets.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_offsets {
                acc += m[(ro + t, co + t)];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

/// Hermitian operator (observable).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, tol::HERMITIAN)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        ensure_square("HermitianOperator", &matrix)?;
        ensure_finite(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > tolerance {
            return Err(Error::InvariantViolation {
                what: "hermiticity".into(),
                deviation,
                tolerance,
            });
        }
        Ok(Self { matrix })
    }

    pub fn zero(d: usize) -> Self {
        Self { matrix: zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Transpose in the computational basis (equal to the complex conjugate).
    pub fn transpose(&self) -> Self {
        Self {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * c(factor, 0.0),
        }
    }
}

/// Normalized state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &crate::tol::Tolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tols: &tol::Tolerances) -> Result<Self> {
        let op = HermitianOperator::with_tolerance(matrix, tols.hermitian)?;
        let tr = trace(op.matrix());
        let deviation = (tr - ONE).norm();
        if deviation > tols.trace {
            return Err(Error::InvariantViolation {
                what: "unit trace".into(),
                deviation,
                tolerance: tols.trace,
            });
        }
        let (values, _) = eigh(op.matrix());
        let min = values.first().copied().unwrap_or(0.0);
        if min < -tols.psd_clamp {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self {
            matrix: op.into_matrix(),
        })
    }

    /// Wraps a matrix produced by a validity-preserving computation on valid
    /// inputs. Only the Hermitian part is kept.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: identity(d) * c(1.0 / d as f64, 0.0),
        }
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis_state(d: usize, k: usize) -> Self {
        Self {
            matrix: ket_bra(d, k, k),
        }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            matrix: outer(state.amplitudes(), state.amplitudes()),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `U ρ U^dagger` for a unitary `U`.
    pub fn conjugated_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        ensure_shape("unitary conjugation", (self.dim(), self.dim()), unitary.shape())?;
        Ok(Self::from_trusted(unitary * &self.matrix * unitary.adjoint()))
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be nonnegative and sum to one.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Empty("mixture".into()));
        }
        ensure_dim("mixture weights", states.len(), weights.len())?;
        let d = states[0].dim();
        let mut acc = zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            ensure_dim("mixture state", d, s.dim())?;
            if *w < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "weight".into(),
                    value: *w,
                    reason: "mixture weights must be nonnegative".into(),
                });
            }
            acc += s.matrix() * c(*w, 0.0);
        }
        Self::new(acc)
    }
}

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty("pure state".into()));
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if !deviation.is_finite() || deviation > tol::PURE_NORM {
            return Err(Error::InvariantViolation {
                what: "unit norm".into(),
                deviation,
                tolerance: tol::PURE_NORM,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `v`; fails on a zero vector.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvariantViolation {
                what: "normalizable vector".into(),
                deviation: n,
                tolerance: 0.0,
            });
        }
        Ok(Self {
            amplitudes: v / c(n, 0.0),
        })
    }

    pub(crate) fn from_trusted(amplitudes: ComplexVector) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `⟨φ|A|φ⟩`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        ensure_shape("expectation", (self.dim(), self.dim()), op.shape())?;
        Ok(self.amplitudes.dotc(&(op * &self.amplitudes)))
    }
}

/// Spectral decomposition with eigenvalues in ascending order; column `k`
/// of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigen(h: &HermitianOperator) -> Eigen {
    let (values, vectors) = eigh(h.matrix());
    Eigen { values, vectors }
}

/// Eigen-decomposition of the Hermitian part of a square matrix.
///
/// Diagonal inputs return standard basis vectors, ordered by a stable sort
/// of the diagonal.
pub(crate) fn eigh(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let d = m.nrows();
    let h = hermitian_part(m);
    let is_diagonal = (0..d).all(|i| (0..d).all(|j| i == j || h[(i, j)] == ZERO));
    let (raw_values, raw_vectors) = if is_diagonal {
        ((0..d).map(|i| h[(i, i)].re).collect::<Vec<_>>(), identity(d))
    } else {
        let eig = SymmetricEigen::new(h);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
    let values = order.iter().map(|&k| raw_values[k]).collect();
    let mut vectors = zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &raw_vectors.column(src));
    }
    (values, vectors)
}

/// Reassembles `V diag(f(λ)) V^dagger`.
pub(crate) fn spectral_map(values: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(f(v));
    }
    scaled * vectors.adjoint()
}

/// `exp(−iθH)`.
pub fn evolution(h: &HermitianOperator, theta: f64) -> ComplexMatrix {
    let (values, vectors) = eigh(h.matrix());
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, -theta * v);
        scaled.column_mut(k).iter_mut().for_each(|x| *x *= phase);
    }
    scaled * vectors.adjoint()
}

/// Square root of a Hermitian positive semidefinite matrix; eigenvalues in
/// `[-PSD_CLAMP, 0)` count as zero.
///
/// Eigenvalues within rounding of zero (`16·d·EPS·λ_max`) are also dropped:
/// the square root would otherwise blow them up to about `√EPS`.
pub fn psd_sqrt_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square("psd_sqrt", m)?;
    let (values, vectors) = eigh(m);
    if let Some(&min) = values.first() {
        if min < -tol::PSD_CLAMP {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let floor = 16.0 * m.nrows() as f64 * f64::EPSILON * top;
    Ok(hermitian_part(&spectral_map(&values, &vectors, |v| {
        if v <= floor {
            0.0
        } else {
            v.sqrt()
        }
    })))
}

pub fn psd_sqrt(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    psd_sqrt_matrix(rho.matrix())
}

/// Singular values in descending order, read off the spectrum `{±σ_i, 0}` of
/// the Hermitian dilation `[[0, M], [M^dagger, 0]]`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Vec::new();
    }
    let mut dilation = zeros(r + c, r + c);
    dilation.view_mut((0, r), (r, c)).copy_from(m);
    dilation.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let (values, _) = eigh(&dilation);
    values.iter().rev().take(k).map(|&v| v.max(0.0)).collect()
}

/// Full SVD whose recomposition has been checked. The default convergence
/// threshold occasionally stops early on highly structured inputs, in which
/// case a strict threshold is used.
pub(crate) fn checked_svd(m: &ComplexMatrix) -> Result<nalgebra::SVD<C64, nalgebra::Dyn, nalgebra::Dyn>> {
    let scale = m.norm().max(1.0) * ((m.nrows() + m.ncols()) as f64).sqrt();
    let mut worst = f64::INFINITY;
    for eps in [5.0 * f64::EPSILON, 1e-18] {
        if let Some(svd) = nalgebra::SVD::try_new(m.clone(), true, true, eps, 100_000) {
            let err = (svd.clone().recompose().expect("u and v_t were computed") - m).norm();
            if err <= 1e-12 * scale {
                return Ok(svd);
            }
            worst = worst.min(err);
        }
    }
    Err(Error::InvariantViolation {
        what: "SVD recomposition".into(),
        deviation: worst,
        tolerance: 1e-12 * scale,
    })
}

/// Number of singular values above [`tol::RANK_CUTOFF`].
pub fn numerical_rank(m: &ComplexMatrix) -> usize {
    singular_values(m)
        .into_iter()
        .filter(|&s| s > tol::RANK_CUTOFF)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schatten {
    One,
    Two,
}

/// Schatten p-norm for p = 1 (sum of singular values) or p = 2 (Frobenius).
pub fn schatten_norm(m: &ComplexMatrix, p: Schatten) -> f64 {
    match p {
        Schatten::One => singular_values(m).iter().sum(),
        Schatten::Two => m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
    }
}

pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    schatten_norm(m, Schatten::One)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    schatten_norm(m, Schatten::Two)
}

/// Uhlmann fidelity `F = ‖√ρ √σ‖₁ = tr √(√ρ σ √ρ)` (not squared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_dim("fidelity", rho.dim(), sigma.dim())?;
    let a = psd_sqrt(rho)?;
    let b = psd_sqrt(sigma)?;
    Ok(trace_norm(&(a * b)).clamp(0.0, 1.0))
}

/// Trace distance, fidelity, and whether the two standard inequalities
/// `1 - t ≤ F ≤ √(1 - t²)` hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityGap {
    pub trace_distance: f64,
    pub fidelity: f64,
    pub chain_ok: bool,
}

pub fn trace_distance_fidelity_gap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityGap> {
    ensure_dim("trace_distance_fidelity_gap", rho.dim(), sigma.dim())?;
    let t = 0.5 * trace_norm(&(rho.matrix() - sigma.matrix()));
    let f = fidelity(rho, sigma)?;
    let slack = 1e-9;
    let lower = 1.0 - t <= f + slack;
    let upper = f <= (1.0 - t * t).max(0.0).sqrt() + slack;
    Ok(FidelityGap {
        trace_distance: t,
        fidelity: f,
        chain_ok: lower && upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::*;

    mod approx_eq {
        use super::*;
        pub fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
            assert_eq!(a.shape(), b.shape());
            let dev = max_abs(&(a - b));
            assert!(dev <= tol, "max-abs deviation {dev:e} > {tol:e}\n{a}\n{b}");
        }
    }

    fn diag(values: &[f64]) -> ComplexMatrix {
        let d = values.len();
        let mut m = zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c(v, 0.0);
        }
        m
    }

    #[test]
    fn eigen_of_diagonal_is_identity() {
        let e = hermitian_eigen(&HermitianOperator::new(diag(&[1.0, 2.0])).unwrap());
        assert_eq!(e.values, vec![1.0, 2.0]);
        assert_close(&e.vectors, &identity(2), 0.0);
    }

    #[test]
    fn eigen_of_pauli_x() {
        let e = hermitian_eigen(&HermitianOperator::new(pauli_x()).unwrap());
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        // Fixed complex Hermitian 5x5 built from integer entries.
        let mut m = zeros(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                let re = ((i * 7 + j * 3) % 5) as f64 - 2.0;
                let im = ((i * 2 + j * 5) % 7) as f64 - 3.0;
                m[(i, j)] = c(re, im);
            }
        }
        let h = hermitian_part(&m);
        let e = hermitian_eigen(&HermitianOperator::new(h.clone()).unwrap());
        let rebuilt = spectral_map(&e.values, &e.vectors, |v| v);
        assert_close(&rebuilt, &h, 1e-9 * 5.0);
        assert_close(&(e.vectors.adjoint() * &e.vectors), &identity(5), 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn non_hermitian_rejected_with_deviation() {
        let err = HermitianOperator::new(ket_bra(2, 0, 1)).unwrap_err();
        match err {
            Error::InvariantViolation { deviation, .. } => assert_eq!(deviation, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn psd_sqrt_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        assert_close(
            &psd_sqrt(&half).unwrap(),
            &(identity(2) / c(2f64.sqrt(), 0.0)),
            1e-12,
        );
        let zero = DensityMatrix::basis_state(2, 0);
        assert_close(&psd_sqrt(&zero).unwrap(), zero.matrix(), 1e-12);
        let rho = DensityMatrix::new(diag(&[0.75, 0.25])).unwrap();
        assert_close(&psd_sqrt(&rho).unwrap(), &diag(&[3f64.sqrt() / 2.0, 0.5]), 1e-12);
    }

    #[test]
    fn psd_sqrt_clamps_tiny_negative_and_rejects_large() {
        let m = diag(&[1.0 + 5e-11, -5e-11]);
        let s = psd_sqrt_matrix(&m).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
        let bad = diag(&[1.1, -0.1]);
        assert!(matches!(psd_sqrt_matrix(&bad), Err(Error::NotPsd { .. })));
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn schatten_examples() {
        assert!((schatten_norm(&identity(3), Schatten::One) - 3.0).abs() < 1e-12);
        assert!((schatten_norm(&identity(3), Schatten::Two) - 3f64.sqrt()).abs() < 1e-12);
        let r1 = ket_bra(2, 0, 1);
        assert!((schatten_norm(&r1, Schatten::One) - 1.0).abs() < 1e-12);
        assert!((schatten_norm(&r1, Schatten::Two) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let zero = DensityMatrix::basis_state(2, 0);
        let one = DensityMatrix::basis_state(2, 1);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-10);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        // tr sqrt(|0><0| (1/2) |0><0|) = 1/sqrt(2)
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            fidelity(&zero, &DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gap_examples() {
        let zero = DensityMatrix::basis_state(2, 0);
        let one = DensityMatrix::basis_state(2, 1);
        let same = trace_distance_fidelity_gap(&zero, &zero).unwrap();
        assert!(same.trace_distance.abs() < 1e-12 && (same.fidelity - 1.0).abs() < 1e-12 && same.chain_ok);
        let orth = trace_distance_fidelity_gap(&zero, &one).unwrap();
        assert!((orth.trace_distance - 1.0).abs() < 1e-12 && orth.fidelity.abs() < 1e-12 && orth.chain_ok);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let mut v = ComplexVector::zeros(4);
        v[0] = c(0.5f64.sqrt(), 0.0);
        v[3] = c(0.5f64.sqrt(), 0.0);
        let rho = outer(&v, &v);
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert_close(&reduced, &(identity(2) * c(0.5, 0.0)), 1e-12);
    }

    #[test]
    fn partial_trace_of_product_and_middle_factor() {
        let a = real_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = real_matrix(3, 3, &[1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 1.0, 1.0, -2.0]);
        let cm = pauli_y();
        let abc = kron(&kron(&a, &b), &cm);
        assert_close(
            &partial_trace(&abc, &[2, 3, 2], &[1]).unwrap(),
            &(&b * (trace(&a) * trace(&cm))),
            1e-12,
        );
        assert_close(
            &partial_trace(&abc, &[2, 3, 2], &[0, 2]).unwrap(),
            &(kron(&a, &cm) * trace(&b)),
            1e-12,
        );
        assert!(partial_trace(&abc, &[2, 2, 2], &[0]).is_err());
        assert!(partial_trace(&abc, &[2, 3, 2], &[3]).is_err());
    }

    #[test]
    fn commutator_and_swap() {
        assert_close(&commutator(&pauli_x(), &pauli_x()).unwrap(), &zeros(2, 2), 0.0);
        let f = swap_operator(2);
        let lhs = &f * kron(&pauli_x(), &pauli_z()) * &f;
        assert_close(&lhs, &kron(&pauli_z(), &pauli_x()), 1e-15);
        assert!(commutator(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn pure_state_validation() {
        assert!(PureState::new(basis_ket(3, 1)).is_ok());
        assert!(PureState::new(basis_ket(3, 1) * c(1.0 + 1e-9, 0.0)).is_err());
        let p = PureState::normalized(ComplexVector::from_element(4, ONE)).unwrap();
        assert!((p.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(identity(2)).is_err());
        assert!(DensityMatrix::new(ket_bra(2, 0, 1)).is_err());
        let mut nan = identity(2) * c(0.5, 0.0);
        nan[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(DensityMatrix::new(nan), Err(Error::NonFinite { .. })));
    }
}
