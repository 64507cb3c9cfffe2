use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected ambient dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("empty vertex tuple")]
    EmptyVertexTuple,

    #[error("boundary of a degree-0 chain is undefined")]
    DegreeZeroBoundary,

    #[error("degree ({degree}) must equal ambient dimension ({ambient}) to evaluate a cycle class")]
    DegreeNotTop { degree: usize, ambient: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("universe size {size} exceeds configured cap {cap} (degree-{degree} simplices, q={q}, D={spread})")]
    UniverseTooLarge {
        size: usize,
        cap: usize,
        degree: usize,
        q: u32,
        spread: u32,
    },

    #[error("chain is not representable in the model (simplex outside the degree-{degree} universe)")]
    ChainNotInModel { degree: usize },

    #[error("target is not a boundary within this model (q={q}, D={spread})")]
    NotABoundaryInModel { q: u32, spread: u32 },

    #[error("branch-and-bound node cap {cap} exhausted")]
    NodeCapExhausted { cap: usize },

    #[error("oracle requires |U_(d+1)| <= {cap}, model has {size} columns")]
    OracleModelTooLarge { size: usize, cap: usize },

    #[error("filling model search exhausted: no feasible model up to q={q}, D={spread}")]
    FillingSearchExhausted { q: u32, spread: u32 },

    #[error("matrix is not in SL(2,Z): determinant {0}")]
    NotSl2(i64),

    #[error("invalid slope triple: {0}")]
    InvalidTriangle(String),

    #[error("monodromy is periodic (order {order}); construction requires infinite order")]
    PeriodicMonodromy { order: u32 },

    #[error("triangulation validation failed: {0}")]
    InvalidTriangulation(String),

    #[error("fundamental-cycle check failed: degree is {0}, expected 1")]
    NotFundamental(String),

    #[error("boundary identity check failed: {0}")]
    BoundaryIdentity(String),

    #[error("certificate check failed: {0}")]
    BadCertificate(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("integer out of JSON-safe range: {0}")]
    JsonRange(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
