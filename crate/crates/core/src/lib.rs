//! Numerics for approximate quantum error correction under symmetry.
//!
//! - [`linalg`]: density matrices, Hermitian operators, partial traces, norms and fidelity.
//! - [`channel`]: Kraus channels, Choi states, Stinespring dilations and builtin noise.
//! - [`skew`]: Wigner-Yanase skew information and the asymmetry measure of a state.
//! - [`qec`]: Knill-Laflamme check and the entanglement-infidelity measure with its
//!   complementary-channel oracle.
//! - [`covariance`]: Choi-state noncovariance, HKS check, the trade-off bound and
//!   covariant isometries.
//! - [`haar`]: Haar sampling, random codes, second-moment integrals and code averages.
//!
//! Composite indices follow the Kronecker convention: `|k⟩_L ⊗ |s⟩_S` has index `k·d_S + s`.

pub mod channel;
pub mod covariance;
pub mod error;
pub mod gallery;
pub mod haar;
pub mod io;
pub mod linalg;
pub mod qec;
pub mod random;
pub mod skew;
pub mod tol;

pub use channel::{
    apply, channel_of, choi_of, compose, maximally_entangled, stinespring, Builtin, ChoiState, Isometry,
    KrausChannel, Stinespring,
};
pub use covariance::{
    covariance_check, covariant_isometry, hks_check, noncovariance, tradeoff, CovarianceCheck, HksCheck,
    ProductRepBasis, Tradeoff, U1Spec,
};
pub use error::{Error, Result};
pub use haar::{
    avg_infidelity_analytic, avg_noncovariance_analytic, haar_unitary, mc_average, random_code, MCEstimate,
    Quantity, SeededEnsemble,
};
pub use linalg::{ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator, PureState, C64};
pub use qec::{
    epsilon_closed_form, infidelity, knill_laflamme, CodeNoisePair, EpsilonTerms, InfidelityReport,
    KnillLaflamme,
};
pub use skew::{asymmetry_measure, generalized_skew_information, skew_information, LieAlgebraBasis};
pub use tol::Tolerances;
