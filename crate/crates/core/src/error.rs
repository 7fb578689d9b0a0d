use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension vector must be non-empty with positive entries, got {0:?}")]
    InvalidDims(Vec<usize>),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("entry {value} at row {row}, column {col} is not a bit")]
    NotABit { row: usize, col: usize, value: i64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix is not admissible: {0}")]
    Inadmissible(String),

    #[error("no block order makes the matrix upper triangular (dependency cycle through blocks {0:?})")]
    NotTriangulable(Vec<usize>),

    #[error("diagonal block {block} is not all ones")]
    NonUnitDiagonal { block: usize },

    #[error("matrix is not in unipotent upper-triangular block form")]
    NotNormalized,

    #[error("manifold is not orientable")]
    NotOrientable,

    #[error("not a real Bott matrix: every block must have size 1")]
    NotRealBott,

    #[error("ring elements belong to different rings")]
    RingMismatch,

    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),

    #[error("homotopy degree must be at least 2, got {0}")]
    HomotopyDegree(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
