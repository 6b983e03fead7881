//! Linear probing: a multinomial logistic classifier trained on frozen
//! penultimate features by full-batch gradient descent.
//!
//! Full batch keeps training bit-deterministic for a given config; the
//! seed only drives the small random weight init.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{EvalError, Result};
use crate::score::softmax;

/// A trained linear classifier `W f + b` over frozen features.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeClassifier {
    classes: usize,
    feature_dim: usize,
    /// Row-major, classes x feature_dim.
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl ProbeClassifier {
    pub fn new(
        classes: usize,
        feature_dim: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
    ) -> Result<Self> {
        if weights.len() != classes * feature_dim {
            return Err(EvalError::ShapeMismatch {
                what: "probe weights",
                expected: classes * feature_dim,
                actual: weights.len(),
            });
        }
        if bias.len() != classes {
            return Err(EvalError::ShapeMismatch {
                what: "probe bias",
                expected: classes,
                actual: bias.len(),
            });
        }
        if !weights.iter().chain(&bias).all(|v| v.is_finite()) {
            return Err(EvalError::NonFiniteParam { layer: 0 });
        }
        Ok(Self {
            classes,
            feature_dim,
            weights,
            bias,
        })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn logits(&self, features: &[f64]) -> Result<Vec<f64>> {
        if features.len() != self.feature_dim {
            return Err(EvalError::ShapeMismatch {
                what: "probe features",
                expected: self.feature_dim,
                actual: features.len(),
            });
        }
        Ok((0..self.classes)
            .map(|c| {
                self.bias[c]
                    + self.weights[c * self.feature_dim..(c + 1) * self.feature_dim]
                        .iter()
                        .zip(features)
                        .map(|(w, x)| w * x)
                        .sum::<f64>()
            })
            .collect())
    }

    pub fn probabilities(&self, features: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax(&self.logits(features)?))
    }

    pub fn predict(&self, features: &[f64]) -> Result<usize> {
        let logits = self.logits(features)?;
        Ok(logits
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub lr: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            lr: 0.1,
            epochs: 500,
            l2: 1e-4,
            seed: 0,
        }
    }
}

/// Per-epoch mean cross-entropy, entry 0 before the first update and a
/// final entry after the last.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainStats {
    pub ce_history: Vec<f64>,
}

impl TrainStats {
    pub fn initial_ce(&self) -> f64 {
        *self.ce_history.first().expect("non-empty history")
    }

    pub fn final_ce(&self) -> f64 {
        *self.ce_history.last().expect("non-empty history")
    }
}

/// Trains a multinomial logistic probe on frozen features.
///
/// Classes are inferred as `max(label) + 1`; every class must appear at
/// least once and there must be at least two.
pub fn train_linear_probe(
    features: &[Vec<f64>],
    labels: &[usize],
    config: &ProbeConfig,
) -> Result<(ProbeClassifier, TrainStats)> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(EvalError::EmptyInput);
    }
    let feature_dim = features[0].len();
    for f in features {
        if f.len() != feature_dim {
            return Err(EvalError::ShapeMismatch {
                what: "probe features",
                expected: feature_dim,
                actual: f.len(),
            });
        }
    }
    let classes = labels.iter().max().copied().unwrap_or(0) + 1;
    if classes < 2 {
        return Err(EvalError::SingleClass);
    }
    let mut seen = vec![false; classes];
    for &l in labels {
        seen[l] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(EvalError::MissingClassExamples { class: missing });
    }

    let count = features.len();
    let inv_count = 1.0 / count as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut weights: Vec<f64> = (0..classes * feature_dim)
        .map(|_| rng.random_range(-0.01..0.01))
        .collect();
    let mut bias = vec![0.0f64; classes];

    let mean_ce = |weights: &[f64], bias: &[f64]| -> f64 {
        let mut total = 0.0;
        for (x, &y) in features.iter().zip(labels) {
            let logits: Vec<f64> = (0..classes)
                .map(|c| {
                    bias[c]
                        + weights[c * feature_dim..(c + 1) * feature_dim]
                            .iter()
                            .zip(x)
                            .map(|(w, v)| w * v)
                            .sum::<f64>()
                })
                .collect();
            let probs = softmax(&logits);
            total -= probs[y].max(f64::MIN_POSITIVE).ln();
        }
        total * inv_count
    };

    let mut ce_history = Vec::with_capacity(config.epochs + 1);
    let mut grad_w = vec![0.0f64; classes * feature_dim];
    let mut grad_b = vec![0.0f64; classes];

    for _ in 0..config.epochs {
        ce_history.push(mean_ce(&weights, &bias));

        grad_w.iter_mut().for_each(|g| *g = 0.0);
        grad_b.iter_mut().for_each(|g| *g = 0.0);
        for (x, &y) in features.iter().zip(labels) {
            let logits: Vec<f64> = (0..classes)
                .map(|c| {
                    bias[c]
                        + weights[c * feature_dim..(c + 1) * feature_dim]
                            .iter()
                            .zip(x)
                            .map(|(w, v)| w * v)
                            .sum::<f64>()
                })
                .collect();
            let probs = softmax(&logits);
            for c in 0..classes {
                let delta = (probs[c] - if c == y { 1.0 } else { 0.0 }) * inv_count;
                grad_b[c] += delta;
                let row = &mut grad_w[c * feature_dim..(c + 1) * feature_dim];
                for (g, v) in row.iter_mut().zip(x) {
                    *g += delta * v;
                }
            }
        }
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.lr * (g + config.l2 * *w);
        }
        for (b, g) in bias.iter_mut().zip(&grad_b) {
            *b -= config.lr * g;
        }
    }
    ce_history.push(mean_ce(&weights, &bias));

    let probe = ProbeClassifier::new(classes, feature_dim, weights, bias)?;
    Ok((probe, TrainStats { ce_history }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_single_class_and_gaps() {
        let xs = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            train_linear_probe(&xs, &[0, 0], &ProbeConfig::default()),
            Err(EvalError::SingleClass)
        ));
        assert!(matches!(
            train_linear_probe(&xs, &[0, 2], &ProbeConfig::default()),
            Err(EvalError::MissingClassExamples { class: 1 })
        ));
    }

    #[test]
    fn zero_features_learn_class_priors() {
        let xs = vec![vec![0.0, 0.0]; 8];
        let labels = [0, 0, 0, 0, 0, 0, 1, 1]; // priors 0.75 / 0.25
        let (probe, _) = train_linear_probe(
            &xs,
            &labels,
            &ProbeConfig {
                epochs: 2000,
                ..Default::default()
            },
        )
        .unwrap();
        let p = probe.probabilities(&[0.0, 0.0]).unwrap();
        assert!((p[0] - 0.75).abs() < 0.02, "p = {p:?}");
        assert!((p[1] - 0.25).abs() < 0.02);
    }

    #[test]
    fn duplicated_dataset_predicts_identically() {
        // Mean gradients are unchanged by duplication; accumulation
        // order differs, so compare decisions rather than raw bits.
        let xs = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![-1.0, 0.5],
        ];
        let labels = [0, 1, 1, 0];
        let mut doubled = xs.clone();
        doubled.extend_from_slice(&xs);
        let mut doubled_labels = labels.to_vec();
        doubled_labels.extend_from_slice(&labels);

        let cfg = ProbeConfig::default();
        let (a, _) = train_linear_probe(&xs, &labels, &cfg).unwrap();
        let (b, _) = train_linear_probe(&doubled, &doubled_labels, &cfg).unwrap();
        let grid = [
            vec![0.0, 0.0],
            vec![1.0, -1.0],
            vec![-0.5, 2.0],
            vec![3.0, 3.0],
            vec![-2.0, -0.1],
        ];
        for x in xs.iter().chain(&grid) {
            assert_eq!(a.predict(x).unwrap(), b.predict(x).unwrap());
        }
    }

    #[test]
    fn training_is_deterministic() {
        let xs = vec![vec![0.3, -1.0], vec![2.0, 0.1], vec![-0.7, 0.9]];
        let labels = [0, 1, 2];
        let cfg = ProbeConfig {
            epochs: 50,
            ..Default::default()
        };
        let (a, sa) = train_linear_probe(&xs, &labels, &cfg).unwrap();
        let (b, sb) = train_linear_probe(&xs, &labels, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }
}
