use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("affine scale factor must be non-zero")]
    ZeroScale,

    #[error("bad disk geometry: {0}")]
    BadGeometry(String),

    #[error("invalid piecewise system: {0}")]
    InvalidSystem(String),

    #[error("refinement cap exceeded ({what}); current index {index}")]
    CapExceeded { what: &'static str, index: u64 },

    #[error("piece {0} is not a scaling disk for the required composite")]
    NonScalingInput(usize),

    #[error("matrix must be square")]
    NotSquare,

    #[error("matrix entries must be non-negative")]
    NegativeEntry,

    #[error(
        "entry {value} at ({row}, {col}) exceeds 1; subdivision length 1 keeps parallel edges"
    )]
    NotSimpleAtN1 {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("matrix is not admissible: {0}")]
    NotAdmissible(String),

    #[error("index {0} indicates no equivalence class")]
    HierarchyIncomplete(usize),

    #[error("surgery window violated at piece {index}: |b| is not below the separation radius")]
    SurgeryWindowViolated { index: usize },

    #[error("bump exponent M = {0} must be even and positive")]
    OddM(u32),

    #[error("B^{j0} has a zero entry at ({row}, {col})")]
    NotPrimitive { j0: u32, row: usize, col: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
