//! Log-odds classification confidence.
//!
//! The scalar network output used throughout is the confidence of the
//! ground-truth class, `v = log(p / (1 - p))`, with `p` clamped away
//! from 0 and 1 before the transform.

use crate::error::{EvalError, Result};
use crate::probe::ProbeClassifier;

/// Clamp bound for probabilities before the log-odds transform.
pub const PROB_EPSILON: f64 = 1e-12;

/// Numerically stable softmax; output sums to 1.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// `log(p / (1 - p))` after clamping `p` into
/// `[PROB_EPSILON, 1 - PROB_EPSILON]`. Monotone in `p`, zero at 0.5.
pub fn confidence_logodds(p_truth: f64) -> f64 {
    let p = p_truth.clamp(PROB_EPSILON, 1.0 - PROB_EPSILON);
    (p / (1.0 - p)).ln()
}

/// Log-odds of the probe head's ground-truth probability on frozen
/// features.
pub fn probe_logodds(probe: &ProbeClassifier, features: &[f64], y_truth: usize) -> Result<f64> {
    if y_truth >= probe.classes() {
        return Err(EvalError::LabelOutOfRange {
            label: y_truth,
            classes: probe.classes(),
        });
    }
    let probs = probe.probabilities(features)?;
    Ok(confidence_logodds(probs[y_truth]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_maps_to_zero() {
        assert_eq!(confidence_logodds(0.5), 0.0);
    }

    #[test]
    fn point_nine_is_log_nine() {
        assert!((confidence_logodds(0.9) - 9f64.ln()).abs() < 1e-12);
        assert!((confidence_logodds(0.9) - 2.1972245773362196).abs() < 1e-12);
    }

    #[test]
    fn saturated_probability_is_clamped() {
        let v = confidence_logodds(1.0);
        assert!(v.is_finite());
        // log((1 - eps) / eps) with eps = 1e-12 is about 12 * ln(10).
        assert!((v - 27.631).abs() < 1e-3, "v = {v}");
        // Antisymmetry only holds approximately: 1 - (1 - eps) != eps
        // after rounding, so the two saturated ends differ by ~2e-5.
        assert!((confidence_logodds(0.0) + v).abs() < 1e-3);
    }

    #[test]
    fn monotone_in_p() {
        let ps = [0.0, 1e-13, 0.1, 0.3, 0.5, 0.7, 0.9999, 1.0];
        for w in ps.windows(2) {
            assert!(confidence_logodds(w[0]) <= confidence_logodds(w[1]));
        }
        assert!(confidence_logodds(0.2) < confidence_logodds(0.8));
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1.0, 2.0, -3.0, 700.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(p.iter().all(|x| x.is_finite()));
    }
}
