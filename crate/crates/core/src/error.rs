use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {what} needs at least {needed} observations, got {got}")]
    InsufficientData { what: &'static str, needed: usize, got: usize },

    /// The data are valid in shape but make the estimator undefined
    /// (zero variance, perfect correlation, all-zero differences).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("design matrix is rank deficient (column {column})")]
    SingularDesign { column: usize },

    #[error("insufficient subjects: need at least {needed}, got {got}")]
    InsufficientSubjects { needed: usize, got: usize },

    /// A subject-level variance is zero or negative and cannot be weighted.
    #[error("subject {index} has non-positive variance {var}")]
    DegenerateVariance { index: usize, var: f64 },

    #[error("effect kind mismatch: expected {expected}, found {found} at subject {index}")]
    KindMismatch { expected: &'static str, found: &'static str, index: usize },

    #[error("index {index} out of range for {len} coefficients")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("replication {rep} at d = {d}: {source}")]
    Replication {
        rep: usize,
        d: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateData(msg.into())
    }
}
