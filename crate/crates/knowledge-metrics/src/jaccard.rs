//! Non-negative expansion of interaction vectors and their Jaccard
//! similarity.
//!
//! A signed length-d vector becomes the 2d non-negative vector
//! `[max(I, 0); -min(I, 0)]`, so sign structure survives the
//! min/max-based similarity:
//!
//! ```text
//! jaccard(a, b) = ||min(a, b)||_1 / ||max(a, b)||_1
//! ```

use lattice_core::InteractionVector;

use crate::error::{MetricError, Result};

/// A non-negative 2d expansion: entry `k` holds the positive part of
/// component `k`, entry `k + d` the magnitude of its negative part. At
/// most one of the pair is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct NonNegVector {
    values: Vec<f64>,
}

impl NonNegVector {
    /// Validates non-negativity and the one-sided pairing invariant.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() % 2 != 0 {
            return Err(MetricError::LengthMismatch {
                expected: values.len() + 1,
                actual: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(MetricError::NegativeEntry { index: i, value: v });
            }
        }
        let d = values.len() / 2;
        for k in 0..d {
            if values[k] > 0.0 && values[k + d] > 0.0 {
                return Err(MetricError::NegativeEntry {
                    index: k,
                    value: -values[k + d],
                });
            }
        }
        Ok(Self { values })
    }

    /// Expands any signed slice; the result always satisfies the
    /// invariants by construction.
    pub fn from_signed(signed: &[f64]) -> Self {
        let d = signed.len();
        let mut values = vec![0.0; 2 * d];
        for (k, &x) in signed.iter().enumerate() {
            values[k] = x.max(0.0);
            values[k + d] = (-x).max(0.0);
        }
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Length d of the signed vector this expansion came from.
    pub fn signed_len(&self) -> usize {
        self.values.len() / 2
    }

    /// Recovers component `k` of the original signed vector.
    pub fn signed_component(&self, k: usize) -> f64 {
        self.values[k] - self.values[k + self.signed_len()]
    }
}

/// Non-negative 2d expansion of all 2^n dividends.
pub fn split_nonneg(iv: &InteractionVector) -> NonNegVector {
    NonNegVector::from_signed(iv.dividends())
}

/// `||min||_1 / ||max||_1` over two equal-length expansions.
///
/// Two all-zero vectors are identical knowledge states and score 1;
/// when exactly one side is all-zero the overlap is empty and the score
/// is 0.
pub fn jaccard(a: &NonNegVector, b: &NonNegVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MetricError::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let mut min_sum = 0.0;
    let mut max_sum = 0.0;
    for (x, y) in a.values().iter().zip(b.values()) {
        min_sum += x.min(*y);
        max_sum += x.max(*y);
    }
    if max_sum == 0.0 {
        return Ok(1.0);
    }
    Ok(min_sum / max_sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_split_matches_the_definition() {
        let v = NonNegVector::from_signed(&[1.0, -2.0]);
        assert_eq!(v.values(), &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(v.signed_component(0), 1.0);
        assert_eq!(v.signed_component(1), -2.0);
    }

    #[test]
    fn zero_and_positive_splits() {
        assert_eq!(NonNegVector::from_signed(&[0.0, 0.0]).values(), &[0.0; 4]);
        let v = NonNegVector::from_signed(&[3.0, 0.5]);
        assert_eq!(v.values(), &[3.0, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn split_of_interaction_vector_keeps_mask_order() {
        let iv = InteractionVector::new(1, vec![1.0, -2.0]).unwrap();
        assert_eq!(split_nonneg(&iv).values(), &[1.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn validation_rejects_bad_expansions() {
        assert!(NonNegVector::new(vec![1.0, 0.0, 0.0]).is_err()); // odd length
        assert!(NonNegVector::new(vec![-1.0, 0.0]).is_err()); // negative
        assert!(NonNegVector::new(vec![1.0, 0.0, 2.0, 0.0]).is_err()); // both sides of pair 0
        assert!(NonNegVector::new(vec![1.0, 0.0, 0.0, 2.0]).is_ok());
    }

    #[test]
    fn identical_nonzero_vectors_score_one() {
        let v = NonNegVector::from_signed(&[1.0, -2.0, 0.0, 3.5]);
        assert_eq!(jaccard(&v, &v).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_supports_score_zero() {
        let a = NonNegVector::from_signed(&[1.0, 0.0]);
        let b = NonNegVector::from_signed(&[0.0, -2.0]);
        assert_eq!(jaccard(&a, &b).unwrap(), 0.0);
        // Opposite signs of the same component are also disjoint.
        let c = NonNegVector::from_signed(&[-1.0, 0.0]);
        assert_eq!(jaccard(&a, &c).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_overlap() {
        let a = NonNegVector::new(vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        let b = NonNegVector::new(vec![2.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(jaccard(&a, &b).unwrap(), 0.5); // (1+1)/(2+2)
    }

    #[test]
    fn zero_vector_conventions() {
        let zero = NonNegVector::from_signed(&[0.0, 0.0]);
        let nonzero = NonNegVector::from_signed(&[1.0, -1.0]);
        assert_eq!(jaccard(&zero, &zero).unwrap(), 1.0);
        assert_eq!(jaccard(&zero, &nonzero).unwrap(), 0.0);
        assert_eq!(jaccard(&nonzero, &zero).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let a = NonNegVector::from_signed(&[1.0]);
        let b = NonNegVector::from_signed(&[1.0, 2.0]);
        assert!(matches!(
            jaccard(&a, &b),
            Err(MetricError::LengthMismatch { .. })
        ));
    }
}
