//! Per-order interaction strength profiles.
//!
//! The order of an interaction is the subset size |S|. The profile
//! averages |I(S|x)| over all subsets of each size and over all samples.

use crate::error::{LatticeError, Result};
use crate::table::InteractionVector;

/// Mean absolute dividend per interaction order, indices `0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderProfile {
    per_order: Vec<f64>,
}

impl OrderProfile {
    pub fn per_order(&self) -> &[f64] {
        &self.per_order
    }

    /// Variable count of the underlying vectors.
    pub fn n(&self) -> u8 {
        (self.per_order.len() - 1) as u8
    }
}

/// Averages |I(S|x)| over every subset of size `i` and every sample.
/// All vectors must share the same variable count.
pub fn order_strength(ivs: &[InteractionVector]) -> Result<OrderProfile> {
    let first = ivs.first().ok_or(LatticeError::EmptyInput)?;
    let n = first.n();
    for iv in ivs {
        if iv.n() != n {
            return Err(LatticeError::MixedVariableCounts(n, iv.n()));
        }
    }

    let mut sums = vec![0.0f64; n as usize + 1];
    let mut counts = vec![0u64; n as usize + 1];
    for iv in ivs {
        for (m, d) in iv.dividends().iter().enumerate() {
            let order = (m as u32).count_ones() as usize;
            sums[order] += d.abs();
            counts[order] += 1;
        }
    }
    let per_order = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| s / *c as f64)
        .collect();
    Ok(OrderProfile { per_order })
}
