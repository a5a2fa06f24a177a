use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one component")]
    EmptyVector,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("empty spanning set")]
    EmptySpan,

    #[error("spanning set is rank deficient: vector {index} lies in the span of its predecessors")]
    RankDeficient { index: usize },

    #[error(
        "matrix is not a projector (hermiticity residual {hermitian:.3e}, idempotence residual {idempotent:.3e})"
    )]
    NotProjector { hermitian: f64, idempotent: f64 },

    #[error(
        "projectors of measurement `{measurement}` are not complementary (residual {residual:.3e})"
    )]
    NotComplementary { measurement: String, residual: f64 },

    #[error("state vector has zero norm")]
    ZeroState,

    #[error("invalid outcome label `{0}`")]
    InvalidOutcomeLabel(String),

    #[error("undefined rates, conditioning event vanished: {}", .0.join(", "))]
    UndefinedRate(Vec<&'static str>),

    #[error("invalid family parameters p = {p}, q = {q}: both must be finite and nonnegative")]
    InvalidParams { p: f64, q: f64 },

    #[error("degenerate family parameters p = q = 0")]
    DegenerateParams,

    #[error("epsilon {0} outside (0, 1]")]
    InvalidEpsilon(f64),

    #[error("{what}: engine value {engine} disagrees with closed form {oracle}")]
    OracleMismatch {
        what: String,
        engine: f64,
        oracle: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
