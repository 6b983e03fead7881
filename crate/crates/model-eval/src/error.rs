use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{what}: expected {expected} elements, got {actual}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("model has no layers")]
    EmptyModel,

    #[error("layer {layer}: input width {actual} does not chain with previous width {expected}")]
    LayerChainMismatch {
        layer: usize,
        expected: usize,
        actual: usize,
    },

    #[error("final layer must have identity activation (logits)")]
    FinalActivationNotIdentity,

    #[error("non-finite parameter in layer {layer}")]
    NonFiniteParam { layer: usize },

    #[error("non-finite activation in layer {layer}")]
    NonFiniteActivation { layer: usize },

    #[error("non-finite input value")]
    NonFiniteInput,

    #[error("penultimate features require at least two layers")]
    NeedTwoLayers,

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("probe training requires at least two classes")]
    SingleClass,

    #[error("class {class} has no training examples")]
    MissingClassExamples { class: usize },

    #[error("empty input list")]
    EmptyInput,

    #[error("line {line}: {message}")]
    Parse { line: u32, message: String },

    #[error(transparent)]
    Lattice(#[from] lattice_core::LatticeError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EvalError {
    pub(crate) fn parse(line: u32, message: impl Into<String>) -> Self {
        EvalError::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, EvalError>;
