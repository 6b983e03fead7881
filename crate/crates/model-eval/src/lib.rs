//! Portable feed-forward model evaluation: baseline masking, log-odds
//! classification confidence, masked-output tables, and linear probing
//! on frozen penultimate features.
//!
//! This crate turns a (model, sample) pair into the 2^n masked scores
//! that `lattice-core` decomposes into Harsanyi dividends. Two heads
//! are supported: the model's own softmax (`Scorer::ModelHead`) and a
//! separately trained linear probe (`Scorer::Probe`), which isolates
//! the knowledge a frozen backbone carries for a downstream task.

pub mod error;
pub mod format;
pub mod masking;
pub mod model;
pub mod probe;
pub mod sample;
pub mod score;

pub use error::{EvalError, Result};
pub use masking::{build_masked_table, evaluate_masked, masked_input, Scorer};
pub use model::{Activation, Layer, PortableModel};
pub use probe::{train_linear_probe, ProbeClassifier, ProbeConfig, TrainStats};
pub use sample::{compute_baseline, BaselineVector, Dataset, Sample};
pub use score::{confidence_logodds, probe_logodds, softmax, PROB_EPSILON};
