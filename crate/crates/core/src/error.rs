use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown method `{name}`; available: {}", available.join(", "))]
    UnknownMethod {
        name: String,
        available: Vec<String>,
    },

    #[error("malformed tableau document: {0}")]
    Malformed(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry: {0}")]
    NonFinite(String),

    #[error("stability function has a pole at z = {z}")]
    Pole { z: Complex64 },

    #[error("learnability polynomial is constant; no roots exist")]
    NoRoots,

    #[error("root finder did not converge after {iterations} iterations")]
    Convergence {
        iterations: usize,
        best: Vec<Complex64>,
    },

    #[error("exp overflow: |Re(h*lambda)| = {re} exceeds 700")]
    ExpOverflow { re: f64 },

    #[error("root list is empty")]
    EmptyRoots,

    #[error("root index {index} out of range for {len} roots")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("root policy `all` cannot select a single root")]
    PolicyAll,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid contour levels: {0}")]
    InvalidLevels(String),

    #[error("field has no defined values")]
    AllUndefined,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("training diverged after {iterations} iterations")]
    Divergence { iterations: usize },

    #[error("dataset has no usable pairs")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI error stream.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownMethod { .. } => "unknown_method",
            Error::Malformed(_) => "malformed",
            Error::Dimension(_) => "dimension",
            Error::NonFinite(_) => "non_finite",
            Error::Pole { .. } => "pole",
            Error::NoRoots => "no_roots",
            Error::Convergence { .. } => "convergence",
            Error::ExpOverflow { .. } => "exp_overflow",
            Error::EmptyRoots => "empty_roots",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::PolicyAll => "policy_all",
            Error::InvalidProblem(_) => "invalid_problem",
            Error::InvalidRegion(_) => "invalid_region",
            Error::InvalidLevels(_) => "invalid_levels",
            Error::AllUndefined => "all_undefined",
            Error::Unsupported(_) => "unsupported",
            Error::Divergence { .. } => "divergence",
            Error::EmptyDataset => "empty_dataset",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
