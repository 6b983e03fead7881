//! Baseline masking and masked-output table construction.
//!
//! For a subset `T`, variables outside `T` are replaced by their
//! baseline slices and the model is evaluated on the result. Building a
//! table enumerates all 2^n masks in bitmask order and scores each with
//! the chosen head.

use rayon::prelude::*;

use lattice_core::{validate_var_count, MaskedOutputTable, SubsetMask};

use crate::error::{EvalError, Result};
use crate::model::PortableModel;
use crate::probe::ProbeClassifier;
use crate::sample::{BaselineVector, Sample};
use crate::score::{confidence_logodds, softmax};

/// Which head turns a masked forward pass into a scalar score.
#[derive(Debug, Clone, Copy)]
pub enum Scorer<'a> {
    /// Softmax over the model's own logits.
    ModelHead,
    /// A linear probe over penultimate features.
    Probe(&'a ProbeClassifier),
}

/// The flat model input for mask `t`: variables inside `t` from the
/// sample, the rest from the baseline.
pub fn masked_input(sample: &Sample, baseline: &BaselineVector, t: SubsetMask) -> Result<Vec<f64>> {
    if t.n() as usize != sample.n() {
        return Err(EvalError::ShapeMismatch {
            what: "mask variable count",
            expected: sample.n(),
            actual: t.n() as usize,
        });
    }
    if !baseline.matches(sample) {
        return Err(EvalError::ShapeMismatch {
            what: "baseline variable widths",
            expected: sample.n(),
            actual: baseline.n(),
        });
    }
    let mut flat = Vec::with_capacity(sample.total_dim());
    for (j, (kept, masked)) in sample
        .variables()
        .iter()
        .zip(baseline.variables())
        .enumerate()
    {
        let slice = if t.contains(j as u8) { kept } else { masked };
        flat.extend_from_slice(slice);
    }
    Ok(flat)
}

/// Class probabilities of the model on the masked sample.
pub fn evaluate_masked(
    model: &PortableModel,
    sample: &Sample,
    baseline: &BaselineVector,
    t: SubsetMask,
) -> Result<Vec<f64>> {
    let input = masked_input(sample, baseline, t)?;
    Ok(softmax(&model.forward(&input)?))
}

fn score_mask(
    model: &PortableModel,
    sample: &Sample,
    baseline: &BaselineVector,
    t: SubsetMask,
    scorer: Scorer<'_>,
) -> Result<f64> {
    match scorer {
        Scorer::ModelHead => {
            let probs = evaluate_masked(model, sample, baseline, t)?;
            Ok(confidence_logodds(probs[sample.label()]))
        }
        Scorer::Probe(probe) => {
            let input = masked_input(sample, baseline, t)?;
            let features = model.penultimate_features(&input)?;
            crate::score::probe_logodds(probe, &features, sample.label())
        }
    }
}

/// Scores every mask of the sample's variables, in bitmask order.
///
/// Masks are evaluated in parallel; the table layout is deterministic
/// regardless of the worker count.
pub fn build_masked_table(
    model: &PortableModel,
    sample: &Sample,
    baseline: &BaselineVector,
    scorer: Scorer<'_>,
) -> Result<MaskedOutputTable> {
    let n = sample.n();
    let len = validate_var_count(n)?;
    if sample.total_dim() != model.input_dim() {
        return Err(EvalError::ShapeMismatch {
            what: "sample input",
            expected: model.input_dim(),
            actual: sample.total_dim(),
        });
    }
    match scorer {
        Scorer::ModelHead => {
            if sample.label() >= model.output_dim() {
                return Err(EvalError::LabelOutOfRange {
                    label: sample.label(),
                    classes: model.output_dim(),
                });
            }
        }
        Scorer::Probe(probe) => {
            let width = model.penultimate_width().ok_or(EvalError::NeedTwoLayers)?;
            if probe.feature_dim() != width {
                return Err(EvalError::ShapeMismatch {
                    what: "probe features",
                    expected: width,
                    actual: probe.feature_dim(),
                });
            }
            if sample.label() >= probe.classes() {
                return Err(EvalError::LabelOutOfRange {
                    label: sample.label(),
                    classes: probe.classes(),
                });
            }
        }
    }

    let values = (0..len)
        .into_par_iter()
        .map(|m| {
            let t = SubsetMask::new(m as u32, n as u8).expect("mask below 2^n");
            score_mask(model, sample, baseline, t, scorer)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MaskedOutputTable::new(n as u8, values)?)
}
