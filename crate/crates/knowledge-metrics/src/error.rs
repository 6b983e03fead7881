use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("variable counts differ across inputs: {0} vs {1}")]
    MixedVariableCounts(u8, u8),

    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sample count mismatch: expected {expected}, got {actual}")]
    SampleCountMismatch { expected: usize, actual: usize },

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("empty input list")]
    EmptyInput,

    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MetricError>;
