use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),
    #[error("non-numeric cell at row {row}, column `{column}`: {text:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        text: String,
    },
    #[error("non-finite value at row {row}, column `{column}`")]
    NonFiniteValue { row: usize, column: String },
    #[error("label at row {row} must be 0 or 1, got {text:?}")]
    InvalidLabel { row: usize, text: String },
    #[error("row {row} has {got} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("dataset has no samples")]
    EmptyDataset,
    #[error("dataset has no feature columns")]
    NoFeatures,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("dataset has no labels")]
    MissingLabels,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("sigma must be finite and > 0, got {0}")]
    InvalidSigma(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dense kernel matrix requested for {n} samples, cap is {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("index {index} out of range for {len} samples")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("k = {k} too large for {n} samples")]
    KTooLarge { k: usize, n: usize },

    #[error("labels contain a single class ({n_pos} anomalies, {n_neg} normals)")]
    SingleClass { n_pos: usize, n_neg: usize },
    #[error("invalid sigma grid: {0}")]
    InvalidGrid(String),
    #[error("unknown detector `{0}` (expected gdba, knn, kthnn, lof or ldcof)")]
    UnknownDetector(String),
}
