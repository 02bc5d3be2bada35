use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot combine elements of Q(zeta_{0}) and Q(zeta_{1})")]
    MixedCyclotomic(u32, u32),

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCount { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },

    #[error("group order exceeds cap {cap}")]
    GroupCapExceeded { cap: usize },

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("generator {generator} is not invariant: element {element} moves monomial {witness}")]
    NotInvariant {
        generator: String,
        element: usize,
        witness: String,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("no homogeneous system of parameters after {attempts} attempts (seed {seed})")]
    RetryCapExhausted { attempts: usize, seed: u64 },

    #[error("component at degree {degree} is divergent (infinite dimensional)")]
    Divergent { degree: i64 },

    /// The trail lists (t, stage dimension, transition rank) observations.
    #[error("component at degree {degree} undetermined within t_max = {t_max} after {} observations", trail.len())]
    Undetermined {
        degree: i64,
        t_max: u32,
        trail: Vec<(u32, usize, usize)>,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
