use crate::error::{LatticeError, Result};
use crate::mask::{validate_var_count, SubsetMask};

fn check_entries(n: u8, entries: &[f64]) -> Result<()> {
    let expected = validate_var_count(n as usize)?;
    if entries.len() != expected {
        return Err(LatticeError::LengthMismatch {
            n,
            expected,
            actual: entries.len(),
        });
    }
    for (mask, &value) in entries.iter().enumerate() {
        if !value.is_finite() {
            return Err(LatticeError::NonFinite { mask, value });
        }
    }
    Ok(())
}

/// All 2^n masked-model outputs `v(x_T)` for one (model, sample) pair,
/// in log-odds units. Entry at index `m` is the output with exactly the
/// variables of bitmask `m` kept and the rest masked to baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedOutputTable {
    n: u8,
    values: Vec<f64>,
}

impl MaskedOutputTable {
    /// Validates length 2^n, finiteness, and the n <= 24 cap.
    pub fn new(n: u8, values: Vec<f64>) -> Result<Self> {
        check_entries(n, &values)?;
        Ok(Self { n, values })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always at least 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, t: SubsetMask) -> f64 {
        assert_eq!(t.n(), self.n, "mask universe does not match table");
        self.values[t.index()]
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.n).expect("n validated at construction")
    }
}

/// All 2^n Harsanyi dividends `I(S|x)` for one (model, sample) pair.
/// Entry at index `m` is the dividend of the subset with bitmask `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionVector {
    n: u8,
    dividends: Vec<f64>,
}

impl InteractionVector {
    pub fn new(n: u8, dividends: Vec<f64>) -> Result<Self> {
        check_entries(n, &dividends)?;
        Ok(Self { n, dividends })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dividends.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dividends(&self) -> &[f64] {
        &self.dividends
    }

    pub fn into_dividends(self) -> Vec<f64> {
        self.dividends
    }

    pub fn dividend(&self, s: SubsetMask) -> f64 {
        assert_eq!(s.n(), self.n, "mask universe does not match vector");
        self.dividends[s.index()]
    }

    /// Largest absolute dividend; 0 for the all-zero vector.
    pub fn max_abs(&self) -> f64 {
        self.dividends.iter().fold(0.0, |acc, d| acc.max(d.abs()))
    }
}
