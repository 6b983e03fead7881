//! Learnability ratio: how much of the preserved knowledge a model
//! trained from scratch also acquires.
//!
//! Per subset, where `preserve > 0`:
//!
//! ```text
//! ratio = [pre * rand > 0] * min(|rand|, preserve) / preserve
//! ```
//!
//! Subsets with `preserve = 0` carry nothing to learn; they are
//! excluded from the aggregate rather than counted as zero, and the
//! exclusion count is reported alongside.

use lattice_core::InteractionVector;

use crate::decompose::decompose;
use crate::error::{MetricError, Result};

/// Per-subset ratios for one sample; `None` where preserve is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    n: u8,
    per_subset: Vec<Option<f64>>,
}

impl RatioReport {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn per_subset(&self) -> &[Option<f64>] {
        &self.per_subset
    }

    pub fn defined_count(&self) -> usize {
        self.per_subset.iter().flatten().count()
    }

    pub fn excluded_count(&self) -> usize {
        self.per_subset.len() - self.defined_count()
    }

    /// Mean over the defined subsets; `None` when nothing is defined.
    pub fn aggregate(&self) -> Option<f64> {
        let defined: Vec<f64> = self.per_subset.iter().flatten().copied().collect();
        if defined.is_empty() {
            None
        } else {
            Some(defined.iter().sum::<f64>() / defined.len() as f64)
        }
    }
}

/// Computes the per-subset learnability ratio from the three vectors of
/// one sample: pretrain side, fine-tuned side, trained-from-scratch side.
pub fn learnability_ratio(
    pre: &InteractionVector,
    fine: &InteractionVector,
    rand: &InteractionVector,
) -> Result<RatioReport> {
    if pre.n() != rand.n() {
        return Err(MetricError::MixedVariableCounts(pre.n(), rand.n()));
    }
    let decomp = decompose(pre, fine)?;
    let per_subset = decomp
        .preserve()
        .iter()
        .zip(pre.dividends())
        .zip(rand.dividends())
        .map(|((&preserve, &a), &r)| {
            if preserve > 0.0 {
                let learned = if a * r > 0.0 {
                    r.abs().min(preserve)
                } else {
                    0.0
                };
                Some(learned / preserve)
            } else {
                None
            }
        })
        .collect();
    Ok(RatioReport {
        n: pre.n(),
        per_subset,
    })
}

/// Ratio aggregates pooled over many samples: the defined per-subset
/// ratios are averaged together, overall and per order.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledRatio {
    pub per_order: Vec<Option<f64>>,
    pub per_order_defined: Vec<usize>,
    pub per_order_excluded: Vec<usize>,
    pub aggregate: Option<f64>,
    pub defined_count: usize,
    pub excluded_count: usize,
    pub samples: usize,
}

pub fn pooled_ratio(reports: &[RatioReport]) -> Result<PooledRatio> {
    let first = reports.first().ok_or(MetricError::EmptyInput)?;
    let n = first.n();
    let orders = n as usize + 1;
    let mut sums = vec![0.0f64; orders];
    let mut defined = vec![0usize; orders];
    let mut excluded = vec![0usize; orders];
    for r in reports {
        if r.n() != n {
            return Err(MetricError::MixedVariableCounts(n, r.n()));
        }
        for (m, value) in r.per_subset().iter().enumerate() {
            let order = (m as u32).count_ones() as usize;
            match value {
                Some(v) => {
                    sums[order] += v;
                    defined[order] += 1;
                }
                None => excluded[order] += 1,
            }
        }
    }
    let per_order: Vec<Option<f64>> = sums
        .iter()
        .zip(&defined)
        .map(|(s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    let defined_count: usize = defined.iter().sum();
    let excluded_count: usize = excluded.iter().sum();
    let aggregate = (defined_count > 0).then(|| sums.iter().sum::<f64>() / defined_count as f64);
    Ok(PooledRatio {
        per_order,
        per_order_defined: defined,
        per_order_excluded: excluded,
        aggregate,
        defined_count,
        excluded_count,
        samples: reports.len(),
    })
}
