//! Salient-interaction selection and the sparsity report.
//!
//! A dividend is salient when its magnitude strictly exceeds
//! `tau = tau_ratio * max_S |I(S)|`. The default ratio is
//! [`DEFAULT_TAU_RATIO`].

use crate::error::{LatticeError, Result};
use crate::mask::SubsetMask;
use crate::table::InteractionVector;
use crate::transform::zeta_transform;

/// Default fraction of the peak dividend magnitude used as the salience
/// threshold.
pub const DEFAULT_TAU_RATIO: f64 = 0.05;

/// The subsets whose dividend magnitude strictly exceeds `tau`.
#[derive(Debug, Clone)]
pub struct SalientSet {
    n: u8,
    tau: f64,
    members: Vec<SubsetMask>, // sorted by bitmask
}

impl SalientSet {
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Absolute threshold in log-odds units.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: SubsetMask) -> bool {
        s.n() == self.n
            && self
                .members
                .binary_search_by_key(&s.bits(), |m| m.bits())
                .is_ok()
    }
}

/// Selects the salient subsets of `iv` at threshold
/// `tau = tau_ratio * max_S |I(S)|`. Strict inequality, so an all-zero
/// vector yields an empty set.
pub fn select_salient(iv: &InteractionVector, tau_ratio: f64) -> Result<SalientSet> {
    if !(tau_ratio > 0.0 && tau_ratio < 1.0) {
        return Err(LatticeError::InvalidTauRatio(tau_ratio));
    }
    let tau = tau_ratio * iv.max_abs();
    let n = iv.n();
    let members = iv
        .dividends()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.abs() > tau)
        .map(|(m, _)| SubsetMask::new(m as u32, n).expect("mask within table range"))
        .collect();
    Ok(SalientSet { n, tau, members })
}

/// Salient-only partial reconstruction of `v(x_T)`:
/// `sum of I(S) over S ⊆ T with S salient`.
///
/// `salient` must have been derived from `iv`.
pub fn reconstruct_salient(salient: &SalientSet, iv: &InteractionVector, t: SubsetMask) -> f64 {
    assert_eq!(salient.n(), iv.n(), "salient set universe mismatch");
    assert_eq!(t.n(), iv.n(), "target mask universe mismatch");
    salient
        .members()
        .iter()
        .filter(|s| s.is_subset_of(t))
        .map(|s| iv.dividend(*s))
        .sum()
}

/// How well the salient subsets alone reproduce every masked output.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityReport {
    pub salient_count: usize,
    pub total_count: usize,
    /// `max_T |full reconstruction - salient-only reconstruction|`.
    pub residual_max: f64,
    pub tau_ratio: f64,
}

/// Selects salient subsets at `tau_ratio` and measures the worst-case
/// reconstruction residual over all 2^n masks.
pub fn sparsity_report(iv: &InteractionVector, tau_ratio: f64) -> Result<SparsityReport> {
    let salient = select_salient(iv, tau_ratio)?;
    let full = zeta_transform(iv)?;

    // Zero out the non-salient dividends, reconstruct, and diff.
    let mut truncated = vec![0.0; iv.len()];
    for s in salient.members() {
        truncated[s.index()] = iv.dividend(*s);
    }
    let approx = zeta_transform(&InteractionVector::new(iv.n(), truncated)?)?;

    let residual_max = full
        .values()
        .iter()
        .zip(approx.values())
        .fold(0.0f64, |acc, (f, a)| acc.max((f - a).abs()));

    Ok(SparsityReport {
        salient_count: salient.len(),
        total_count: iv.len(),
        residual_max,
        tau_ratio,
    })
}
