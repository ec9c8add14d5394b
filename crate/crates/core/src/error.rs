use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: String,
        found: String,
    },

    #[error("{what} violated: deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    InvariantViolation {
        what: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: String,
    },

    #[error("unknown builtin channel `{0}`")]
    UnknownChannel(String),

    #[error("{0} must not be empty")]
    Empty(String),

    #[error("{what} is undefined for dimension {dim}")]
    DegenerateDimension { what: String, dim: usize },

    #[error("dimension cap exceeded: total dimension {total} > cap {cap}")]
    CapExceeded { total: usize, cap: usize },

    #[error("infidelity radicand {value:e} is below -{tolerance:e}; inputs are inconsistent")]
    NegativeRadicand { value: f64, tolerance: f64 },

    #[error("invalid eigenindex assignment: {0}")]
    InvalidAssignment(String),

    #[error(
        "eigenvalue mismatch: logical eigenindex {source_index} ({expected} expected after offset) \
         assigned to physical eigenindex {target_index} with eigenvalue {found}"
    )]
    EigenvalueMismatch {
        source_index: usize,
        target_index: usize,
        expected: f64,
        found: f64,
    },

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(context: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

pub(crate) fn ensure_shape(context: &str, expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected: format!("{}x{}", expected.0, expected.1),
            found: format!("{}x{}", found.0, found.1),
        })
    }
}
