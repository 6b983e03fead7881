//! Per-subset decomposition of interaction strength between two models.
//!
//! For each subset the pretrain-side strength splits into what the
//! fine-tuned model kept and what it dropped, and the finetune-side
//! strength into the kept part and what was newly acquired:
//!
//! ```text
//! preserve = [pre * fine > 0] * min(|pre|, |fine|)
//! discard  = |pre|  - preserve
//! new      = |fine| - preserve
//! ```
//!
//! Strength is only shared when both dividends push the output the same
//! way; a sign conflict preserves nothing.

use lattice_core::InteractionVector;

use crate::error::{MetricError, Result};

/// Non-negative per-subset strengths, plus identifiers of the two
/// source vectors for report provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeDecomposition {
    n: u8,
    preserve: Vec<f64>,
    discard: Vec<f64>,
    new: Vec<f64>,
    pre_source: String,
    fine_source: String,
}

impl KnowledgeDecomposition {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.preserve.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn preserve(&self) -> &[f64] {
        &self.preserve
    }

    pub fn discard(&self) -> &[f64] {
        &self.discard
    }

    pub fn new_knowledge(&self) -> &[f64] {
        &self.new
    }

    /// `|I_pre|` per subset, reconstructed as preserve + discard.
    pub fn pretrain_strength(&self, m: usize) -> f64 {
        self.preserve[m] + self.discard[m]
    }

    /// `|I_fine|` per subset, reconstructed as preserve + new.
    pub fn finetune_strength(&self, m: usize) -> f64 {
        self.preserve[m] + self.new[m]
    }

    pub fn pre_source(&self) -> &str {
        &self.pre_source
    }

    pub fn fine_source(&self) -> &str {
        &self.fine_source
    }

    pub fn with_sources(mut self, pre: impl Into<String>, fine: impl Into<String>) -> Self {
        self.pre_source = pre.into();
        self.fine_source = fine.into();
        self
    }
}

/// The non-negative double `d` with `part + d == total` bit-exactly,
/// for `0 <= part <= total`. The naive difference can land one ulp off
/// when the subtraction rounds onto a tie; the neighbor then recovers
/// exactness. When a double tie makes no exact split representable at
/// all, the nearest difference is kept (error below one ulp of total).
fn exact_complement(total: f64, part: f64) -> f64 {
    let d = total - part;
    if part + d == total {
        return d;
    }
    let bits = d.to_bits();
    let candidate = if part + d > total {
        f64::from_bits(bits - 1) // next_down, d > 0 here
    } else {
        f64::from_bits(bits + 1)
    };
    if part + candidate == total {
        candidate
    } else {
        d
    }
}

/// Splits two interaction vectors into preserve/discard/new strengths.
pub fn decompose(
    pre: &InteractionVector,
    fine: &InteractionVector,
) -> Result<KnowledgeDecomposition> {
    if pre.n() != fine.n() {
        return Err(MetricError::MixedVariableCounts(pre.n(), fine.n()));
    }
    let len = pre.len();
    let mut preserve = Vec::with_capacity(len);
    let mut discard = Vec::with_capacity(len);
    let mut new = Vec::with_capacity(len);
    for (a, b) in pre.dividends().iter().zip(fine.dividends()) {
        let shared = if a * b > 0.0 {
            a.abs().min(b.abs())
        } else {
            0.0
        };
        preserve.push(shared);
        discard.push(exact_complement(a.abs(), shared));
        new.push(exact_complement(b.abs(), shared));
    }
    Ok(KnowledgeDecomposition {
        n: pre.n(),
        preserve,
        discard,
        new,
        pre_source: String::new(),
        fine_source: String::new(),
    })
}

/// Means over samples and subsets of each size, one entry per order
/// `0..=n`. The bar-sum identities hold per order:
/// `preserve + discard = pretrain` and `preserve + new = finetune`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderDecomposition {
    pub preserve: Vec<f64>,
    pub discard: Vec<f64>,
    pub new: Vec<f64>,
    pub pretrain: Vec<f64>,
    pub finetune: Vec<f64>,
    pub samples: usize,
}

impl OrderDecomposition {
    pub fn n(&self) -> u8 {
        (self.preserve.len() - 1) as u8
    }
}

/// Aggregates per-subset decompositions into per-order means.
pub fn order_decomposition(decomps: &[KnowledgeDecomposition]) -> Result<OrderDecomposition> {
    let first = decomps.first().ok_or(MetricError::EmptyInput)?;
    let n = first.n();
    for d in decomps {
        if d.n() != n {
            return Err(MetricError::MixedVariableCounts(n, d.n()));
        }
    }
    let orders = n as usize + 1;
    let mut sums = vec![[0.0f64; 3]; orders];
    let mut counts = vec![0u64; orders];
    for d in decomps {
        for m in 0..d.len() {
            let order = (m as u32).count_ones() as usize;
            sums[order][0] += d.preserve()[m];
            sums[order][1] += d.discard()[m];
            sums[order][2] += d.new_knowledge()[m];
            counts[order] += 1;
        }
    }
    let mean = |k: usize| -> Vec<f64> {
        sums.iter()
            .zip(&counts)
            .map(|(s, c)| s[k] / *c as f64)
            .collect()
    };
    let preserve = mean(0);
    let discard = mean(1);
    let new = mean(2);
    let pretrain = preserve.iter().zip(&discard).map(|(p, d)| p + d).collect();
    let finetune = preserve.iter().zip(&new).map(|(p, n)| p + n).collect();
    Ok(OrderDecomposition {
        preserve,
        discard,
        new,
        pretrain,
        finetune,
        samples: decomps.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(d: &[f64]) -> InteractionVector {
        let n = d.len().trailing_zeros() as u8;
        InteractionVector::new(n, d.to_vec()).unwrap()
    }

    #[test]
    fn same_sign_preserves_the_smaller_strength() {
        let d = decompose(&iv(&[0.0, 3.0]), &iv(&[0.0, 2.0])).unwrap();
        assert_eq!(d.preserve()[1], 2.0);
        assert_eq!(d.discard()[1], 1.0);
        assert_eq!(d.new_knowledge()[1], 0.0);
    }

    #[test]
    fn sign_conflict_preserves_nothing() {
        let d = decompose(&iv(&[0.0, 3.0]), &iv(&[0.0, -2.0])).unwrap();
        assert_eq!(d.preserve()[1], 0.0);
        assert_eq!(d.discard()[1], 3.0);
        assert_eq!(d.new_knowledge()[1], 2.0);
    }

    #[test]
    fn zero_pretrain_side_is_all_new() {
        let d = decompose(&iv(&[0.0, 0.0]), &iv(&[0.0, 5.0])).unwrap();
        assert_eq!(d.preserve()[1], 0.0);
        assert_eq!(d.discard()[1], 0.0);
        assert_eq!(d.new_knowledge()[1], 5.0);
    }

    #[test]
    fn rejects_mixed_universes() {
        let a = iv(&[0.0, 1.0]);
        let b = iv(&[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            decompose(&a, &b),
            Err(MetricError::MixedVariableCounts(1, 2))
        ));
    }

    #[test]
    fn order_means_from_the_single_subset_example() {
        let d = decompose(&iv(&[0.0, 3.0]), &iv(&[0.0, 2.0])).unwrap();
        let od = order_decomposition(std::slice::from_ref(&d)).unwrap();
        assert_eq!(od.preserve, vec![0.0, 2.0]);
        assert_eq!(od.discard, vec![0.0, 1.0]);
        assert_eq!(od.new, vec![0.0, 0.0]);
        assert_eq!(od.pretrain, vec![0.0, 3.0]);
        assert_eq!(od.finetune, vec![0.0, 2.0]);
    }

    #[test]
    fn all_zero_profile_and_duplication_idempotence() {
        let zero = decompose(&iv(&[0.0; 4]), &iv(&[0.0; 4])).unwrap();
        let od = order_decomposition(std::slice::from_ref(&zero)).unwrap();
        assert!(od.preserve.iter().all(|&x| x == 0.0));
        assert!(od.pretrain.iter().all(|&x| x == 0.0));

        let d = decompose(&iv(&[1.0, -2.0, 0.5, 3.0]), &iv(&[0.5, 2.0, 0.5, -1.0])).unwrap();
        let one = order_decomposition(std::slice::from_ref(&d)).unwrap();
        let two = order_decomposition(&[d.clone(), d]).unwrap();
        assert_eq!(one.preserve, two.preserve);
        assert_eq!(one.discard, two.discard);
        assert_eq!(one.new, two.new);
    }

    #[test]
    fn sources_are_carried() {
        let d = decompose(&iv(&[0.0, 1.0]), &iv(&[0.0, 1.0]))
            .unwrap()
            .with_sources("pre_0", "fine_0");
        assert_eq!(d.pre_source(), "pre_0");
        assert_eq!(d.fine_source(), "fine_0");
    }
}
