use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("vertex {vertex:?} is out of range for a torus of dimension {dim} and side {side}")]
    VertexOutOfRange {
        vertex: Vec<usize>,
        dim: usize,
        side: usize,
    },

    #[error("axis {axis} is out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid marked set: {0}")]
    InvalidMarkedSet(String),

    #[error("horizon must be at least 1")]
    ZeroHorizon,

    #[error("schedule (n1, n2) must contain at least one step")]
    EmptySchedule,

    #[error("state dimension {dim} exceeds the dense cap of {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("norm drift {drift:e} at block {t}")]
    NormDrift { t: usize, drift: f64 },

    #[error("side {0} is odd; the parity structure only holds for even sides")]
    OddSide(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid config field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
