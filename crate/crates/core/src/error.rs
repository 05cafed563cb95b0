use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fractional orders {orders:?}: {reason}")]
    InvalidOrders { orders: Vec<f64>, reason: String },

    #[error("Hurst index must lie in (0, 1), got {0}")]
    InvalidHurst(f64),

    #[error("point ({x}, {y}) lies outside [0, 1] x [0, 1]")]
    OutOfDomain { x: f64, y: f64 },

    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch for {what}: expected {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error(
        "variance-kernel quadrature did not converge at omega = {omega} \
         (last two refinements: {previous:e}, {last:e})"
    )]
    QuadratureNotConverged { omega: f64, previous: f64, last: f64 },

    #[error("circulant embedding has a negative eigenvalue ({min_eigenvalue:e}) after {doublings} doublings")]
    EmbeddingNotNonnegative { doublings: u32, min_eigenvalue: f64 },

    #[error("zero pivot at row {row} of the tridiagonal system")]
    ZeroPivot { row: usize },

    #[error("sample path {index}: {source}")]
    Path {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("variance kernel R({omega}) = {value} is not positive")]
    NonPositiveKernel { omega: f64, value: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("config line {line}: key `{key}`: {reason}")]
    Config {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("unknown source `{0}` (expected example1, example2, example3 or a file path)")]
    UnknownSource(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
