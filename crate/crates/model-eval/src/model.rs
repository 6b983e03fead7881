//! Portable feed-forward models: an ordered list of dense layers with
//! relu or identity activations. The final layer always emits raw
//! logits.

use crate::error::{EvalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Identity => x,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "relu" => Some(Activation::Relu),
            "identity" => Some(Activation::Identity),
            _ => None,
        }
    }
}

/// One dense layer: `out = activation(W x + b)` with `W` stored
/// row-major, `rows` outputs by `cols` inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn new(
        rows: usize,
        cols: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
        activation: Activation,
    ) -> Result<Self> {
        if weights.len() != rows * cols {
            return Err(EvalError::ShapeMismatch {
                what: "layer weights",
                expected: rows * cols,
                actual: weights.len(),
            });
        }
        if bias.len() != rows {
            return Err(EvalError::ShapeMismatch {
                what: "layer bias",
                expected: rows,
                actual: bias.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            weights,
            bias,
            activation,
        })
    }

    fn apply(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            let z = self.bias[r] + row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>();
            out.push(self.activation.apply(z));
        }
    }
}

/// An immutable inference-only network. Layer dimensions chain, all
/// parameters are finite, and the last activation is identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PortableModel {
    layers: Vec<Layer>,
}

impl PortableModel {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(EvalError::EmptyModel);
        }
        for (i, layer) in layers.iter().enumerate() {
            if i > 0 && layer.cols != layers[i - 1].rows {
                return Err(EvalError::LayerChainMismatch {
                    layer: i,
                    expected: layers[i - 1].rows,
                    actual: layer.cols,
                });
            }
            let finite = layer
                .weights
                .iter()
                .chain(&layer.bias)
                .all(|v| v.is_finite());
            if !finite {
                return Err(EvalError::NonFiniteParam { layer: i });
            }
        }
        if layers.last().expect("non-empty").activation != Activation::Identity {
            return Err(EvalError::FinalActivationNotIdentity);
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].cols
    }

    /// Number of class logits.
    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").rows
    }

    /// Width of the layer feeding the final classifier, if there is one.
    pub fn penultimate_width(&self) -> Option<usize> {
        (self.layers.len() >= 2).then(|| self.layers.last().expect("non-empty").cols)
    }

    /// Full forward pass to logits.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.forward_through(input, self.layers.len())
    }

    /// Activations of the layer preceding the final classifier.
    pub fn penultimate_features(&self, input: &[f64]) -> Result<Vec<f64>> {
        if self.layers.len() < 2 {
            return Err(EvalError::NeedTwoLayers);
        }
        self.forward_through(input, self.layers.len() - 1)
    }

    fn forward_through(&self, input: &[f64], layer_count: usize) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(EvalError::ShapeMismatch {
                what: "model input",
                expected: self.input_dim(),
                actual: input.len(),
            });
        }
        if !input.iter().all(|v| v.is_finite()) {
            return Err(EvalError::NonFiniteInput);
        }
        let mut cur = input.to_vec();
        let mut next = Vec::new();
        for (i, layer) in self.layers[..layer_count].iter().enumerate() {
            layer.apply(&cur, &mut next);
            if !next.iter().all(|v| v.is_finite()) {
                return Err(EvalError::NonFiniteActivation { layer: i });
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }
}
