//! Epoch-wise similarity between a training run's interactions and the
//! finally-learned ones.
//!
//! For each epoch checkpoint, every sample's interaction vector is
//! expanded to its non-negative 2d form and compared to the final
//! model's vector for the same sample by Jaccard similarity; the
//! per-sample similarities are averaged before the record is emitted.
//! When the last epoch's vectors are the final vectors themselves the
//! last record is exactly 1.

use serde::Serialize;

use lattice_core::{select_salient, InteractionVector};

use crate::error::{MetricError, Result};
use crate::jaccard::{jaccard, NonNegVector};

/// Which training run a trajectory belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Finetune,
    Random,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Finetune => "finetune",
            Variant::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "finetune" => Some(Variant::Finetune),
            "random" => Some(Variant::Random),
            _ => None,
        }
    }
}

/// One epoch's mean similarity to the final interactions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub variant: Variant,
    /// 1-based epoch index.
    pub epoch: usize,
    pub similarity: f64,
    /// Samples averaged into `similarity`.
    pub samples: usize,
}

/// Trajectory knobs; the default compares full 2^n expansions.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrajectoryOptions {
    /// When set, each vector is restricted to its own salient subsets
    /// (threshold `ratio * max|I|`) before the expansion.
    pub salient_tau_ratio: Option<f64>,
}

fn expand(iv: &InteractionVector, opts: &TrajectoryOptions) -> Result<NonNegVector> {
    match opts.salient_tau_ratio {
        None => Ok(NonNegVector::from_signed(iv.dividends())),
        Some(ratio) => {
            let salient = select_salient(iv, ratio)?;
            let mut kept = vec![0.0; iv.len()];
            for m in salient.members() {
                kept[m.index()] = iv.dividend(*m);
            }
            Ok(NonNegVector::from_signed(&kept))
        }
    }
}

/// Computes one record per epoch: the expectation over samples of the
/// Jaccard similarity to the final vectors.
///
/// `epochs[e]` and `finals` are parallel sample lists; all vectors must
/// share one variable count.
pub fn trajectory(
    epochs: &[Vec<InteractionVector>],
    finals: &[InteractionVector],
    variant: Variant,
) -> Result<Vec<TrajectoryRecord>> {
    trajectory_with_options(epochs, finals, variant, &TrajectoryOptions::default())
}

pub fn trajectory_with_options(
    epochs: &[Vec<InteractionVector>],
    finals: &[InteractionVector],
    variant: Variant,
    opts: &TrajectoryOptions,
) -> Result<Vec<TrajectoryRecord>> {
    if epochs.is_empty() || finals.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let n = finals[0].n();
    for iv in finals {
        if iv.n() != n {
            return Err(MetricError::MixedVariableCounts(n, iv.n()));
        }
    }
    let final_expanded: Vec<NonNegVector> = finals
        .iter()
        .map(|iv| expand(iv, opts))
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(epochs.len());
    for (e, epoch) in epochs.iter().enumerate() {
        if epoch.len() != finals.len() {
            return Err(MetricError::SampleCountMismatch {
                expected: finals.len(),
                actual: epoch.len(),
            });
        }
        let mut total = 0.0;
        for (iv, final_vec) in epoch.iter().zip(&final_expanded) {
            if iv.n() != n {
                return Err(MetricError::MixedVariableCounts(n, iv.n()));
            }
            total += jaccard(&expand(iv, opts)?, final_vec)?;
        }
        records.push(TrajectoryRecord {
            variant,
            epoch: e + 1,
            similarity: total / finals.len() as f64,
            samples: finals.len(),
        });
    }
    Ok(records)
}
