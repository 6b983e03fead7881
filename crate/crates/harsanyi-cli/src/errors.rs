//! Exit-code classification: 0 success, 1 verification/metric failure,
//! 2 usage error.

use std::fmt;

/// Marker for operator mistakes (bad flags, missing inputs, misaligned
/// directories). Mapped to exit code 2; everything else exits 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}
