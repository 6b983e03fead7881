use std::fmt;

use crate::error::{LatticeError, Result};

/// Hard cap on the variable count. A table of 2^24 doubles is 128 MiB,
/// which is the largest allocation this crate will attempt.
pub const MAX_VARS: u8 = 24;

/// Cap for the O(3^n) brute-force oracle.
pub const BRUTE_MAX_VARS: u8 = 16;

/// Checks a variable count against [`MAX_VARS`] and returns the table
/// length 2^n. Call this before allocating any per-subset storage.
pub fn validate_var_count(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_VARS as usize {
        return Err(LatticeError::VariableCountOutOfRange(n));
    }
    Ok(1usize << n)
}

/// A subset of the variable indices `0..n`, stored as a little-endian
/// bitmask: variable `j` corresponds to bit `j`. The mask doubles as the
/// index into per-subset arrays.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(bits: u32, n: u8) -> Result<Self> {
        validate_var_count(n as usize)?;
        if u64::from(bits) >= 1u64 << n {
            return Err(LatticeError::MaskOutOfRange { bits, n });
        }
        Ok(Self { bits, n })
    }

    pub fn empty(n: u8) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn full(n: u8) -> Result<Self> {
        validate_var_count(n as usize)?;
        Ok(Self {
            bits: ((1u64 << n) - 1) as u32,
            n,
        })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Index of this subset inside a length-2^n array.
    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn n(self) -> u8 {
        self.n
    }

    /// Number of variables in the subset (the interaction order).
    pub fn order(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, var: u8) -> bool {
        var < self.n && self.bits & (1 << var) != 0
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    /// Variable indices in the subset, ascending.
    pub fn vars(self) -> impl Iterator<Item = u8> {
        let bits = self.bits;
        let n = self.n;
        (0..n).filter(move |j| bits & (1 << j) != 0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vars().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
