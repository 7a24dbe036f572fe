use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes. The CLI maps them onto exit codes 1 (input), 2 (budget)
/// and 3 (invariant).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("not symmetric: entry ({0},{1}) differs from ({1},{0})")]
    NotSymmetric(usize, usize),

    #[error("not a naive EGK datum: condition (N{0}) fails at index {1}")]
    NotNaiveEgk(u8, usize),

    #[error("not half-integral: diagonal entry {0} of 2B is odd")]
    NotHalfIntegral(usize),

    #[error("degenerate matrix: determinant is zero")]
    Degenerate,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("could not factor {0}: composite cofactor beyond the trial-division bound")]
    Unfactored(String),

    #[error("enumeration budget exceeded: {needed} visits requested, budget {budget}")]
    Budget { needed: String, budget: u64 },

    #[error("precision too small: {0}")]
    Precision(String),

    #[error("series expansion needs an invertible lowest-order term")]
    NonInvertible,

    #[error("missing table entry: {0}")]
    MissingEntry(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
