use thiserror::Error;

/// Errors produced by lattice construction, transforms and file I/O.
#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("variable count {0} outside supported range 1..=24")]
    VariableCountOutOfRange(usize),

    #[error("brute-force transform is capped at n <= 16, got n = {0}")]
    BruteForceCap(u8),

    #[error("expected {expected} entries for n = {n}, got {actual}")]
    LengthMismatch {
        n: u8,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite entry {value} at mask {mask}")]
    NonFinite { mask: usize, value: f64 },

    #[error("threshold ratio must lie strictly inside (0, 1), got {0}")]
    InvalidTauRatio(f64),

    #[error("variable counts differ across inputs: {0} vs {1}")]
    MixedVariableCounts(u8, u8),

    #[error("empty input list")]
    EmptyInput,

    #[error("bitmask {bits:#x} out of range for n = {n}")]
    MaskOutOfRange { bits: u32, n: u8 },

    #[error("bad magic {found:?}, expected {expected:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),

    #[error("trailing bytes after {expected} values")]
    TrailingData { expected: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
