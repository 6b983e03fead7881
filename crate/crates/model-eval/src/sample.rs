//! Samples as lists of variable slices, plus baseline vectors.
//!
//! A variable is a contiguous slice of the model input; the slices
//! concatenated in order tile the input exactly. Masking a variable
//! replaces its slice with the baseline slice of the same shape.

use crate::error::{EvalError, Result};

/// One classification sample split into `n` variable slices.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    variables: Vec<Vec<f64>>,
    label: usize,
}

impl Sample {
    pub fn new(variables: Vec<Vec<f64>>, label: usize) -> Result<Self> {
        if variables.is_empty() {
            return Err(EvalError::EmptyInput);
        }
        for v in &variables {
            if v.is_empty() {
                return Err(EvalError::ShapeMismatch {
                    what: "variable slice",
                    expected: 1,
                    actual: 0,
                });
            }
            if !v.iter().all(|x| x.is_finite()) {
                return Err(EvalError::NonFiniteInput);
            }
        }
        Ok(Self { variables, label })
    }

    /// Splits a flat input vector along the given slice widths.
    pub fn from_concat(flat: &[f64], widths: &[usize], label: usize) -> Result<Self> {
        let total: usize = widths.iter().sum();
        if flat.len() != total {
            return Err(EvalError::ShapeMismatch {
                what: "sample input",
                expected: total,
                actual: flat.len(),
            });
        }
        let mut variables = Vec::with_capacity(widths.len());
        let mut offset = 0;
        for &w in widths {
            variables.push(flat[offset..offset + w].to_vec());
            offset += w;
        }
        Self::new(variables, label)
    }

    /// Variable count `n`.
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn variables(&self) -> &[Vec<f64>] {
        &self.variables
    }

    pub fn widths(&self) -> Vec<usize> {
        self.variables.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.variables.iter().map(Vec::len).sum()
    }

    pub fn concat(&self) -> Vec<f64> {
        self.variables.iter().flatten().copied().collect()
    }
}

/// Per-variable baseline slices, shaped exactly like a sample's
/// variables. Masked variables are replaced by these values.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineVector {
    variables: Vec<Vec<f64>>,
}

impl BaselineVector {
    pub fn new(variables: Vec<Vec<f64>>) -> Result<Self> {
        if variables.is_empty() {
            return Err(EvalError::EmptyInput);
        }
        for v in &variables {
            if !v.iter().all(|x| x.is_finite()) {
                return Err(EvalError::NonFiniteInput);
            }
        }
        Ok(Self { variables })
    }

    pub fn from_concat(flat: &[f64], widths: &[usize]) -> Result<Self> {
        Ok(Self {
            variables: Sample::from_concat(flat, widths, 0)?.variables,
        })
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Vec<f64>] {
        &self.variables
    }

    pub fn concat(&self) -> Vec<f64> {
        self.variables.iter().flatten().copied().collect()
    }

    pub fn matches(&self, sample: &Sample) -> bool {
        self.n() == sample.n()
            && self
                .variables
                .iter()
                .zip(sample.variables())
                .all(|(b, v)| b.len() == v.len())
    }
}

/// Elementwise mean of each variable slice over all samples.
pub fn compute_baseline(samples: &[Sample]) -> Result<BaselineVector> {
    let first = samples.first().ok_or(EvalError::EmptyInput)?;
    let widths = first.widths();
    let mut sums: Vec<Vec<f64>> = widths.iter().map(|w| vec![0.0; *w]).collect();
    for s in samples {
        if s.widths() != widths {
            return Err(EvalError::ShapeMismatch {
                what: "sample variable widths",
                expected: widths.len(),
                actual: s.n(),
            });
        }
        for (acc, v) in sums.iter_mut().zip(s.variables()) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
    }
    let count = samples.len() as f64;
    for acc in &mut sums {
        for a in acc.iter_mut() {
            *a /= count;
        }
    }
    BaselineVector::new(sums)
}

/// A labelled sample collection sharing one variable layout, with an
/// optional explicit baseline override.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    widths: Vec<usize>,
    samples: Vec<Sample>,
    baseline: Option<BaselineVector>,
}

impl Dataset {
    pub fn new(
        widths: Vec<usize>,
        samples: Vec<Sample>,
        baseline: Option<BaselineVector>,
    ) -> Result<Self> {
        if widths.is_empty() || widths.contains(&0) {
            return Err(EvalError::ShapeMismatch {
                what: "slice widths",
                expected: 1,
                actual: 0,
            });
        }
        for s in &samples {
            if s.widths() != widths {
                return Err(EvalError::ShapeMismatch {
                    what: "sample variable widths",
                    expected: widths.len(),
                    actual: s.n(),
                });
            }
        }
        if let Some(b) = &baseline {
            let b_widths: Vec<usize> = b.variables().iter().map(Vec::len).collect();
            if b_widths != widths {
                return Err(EvalError::ShapeMismatch {
                    what: "baseline variable widths",
                    expected: widths.len(),
                    actual: b.n(),
                });
            }
        }
        Ok(Self {
            widths,
            samples,
            baseline,
        })
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn n_variables(&self) -> usize {
        self.widths.len()
    }

    pub fn input_dim(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn baseline_override(&self) -> Option<&BaselineVector> {
        self.baseline.as_ref()
    }

    /// The explicit baseline when present, otherwise the per-variable
    /// mean over this dataset's samples.
    pub fn effective_baseline(&self) -> Result<BaselineVector> {
        match &self.baseline {
            Some(b) => Ok(b.clone()),
            None => compute_baseline(&self.samples),
        }
    }
}
