use thiserror::Error;

/// Errors raised by the algebra kernels. All of them are usage errors: the
/// computations themselves are total once their inputs are well formed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring elements live over different variable counts ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("variable count {0} exceeds the supported maximum of {max}", max = crate::ring::MAX_VARS)]
    TooManyVariables(usize),

    #[error("variable index {index} is outside 1..={ambient}")]
    VariableOutOfRange { index: usize, ambient: usize },

    #[error("substitution has no image for variable a{0}")]
    MissingAssignment(usize),

    #[error("degree {degree} part is zero, no minimal eps exponent exists")]
    EmptyDegreePart { degree: usize },

    #[error("cannot parse ring element: {0}")]
    Parse(String),

    #[error("a quadratic form needs at least one coefficient")]
    EmptyForm,

    #[error("requested class index {requested} exceeds form rank {rank}")]
    ClassIndexTooLarge { requested: usize, rank: usize },

    #[error("expected a form of rank {expected}, got rank {actual}")]
    WrongRank { expected: usize, actual: usize },

    #[error("multiquadratic generators are dependent modulo squares")]
    DependentGenerators,

    #[error("Stiefel-Whitney list must start with 1")]
    MissingUnit,

    #[error("genus {g} is outside the supported range {min}..={max}")]
    GenusOutOfRange { g: usize, min: usize, max: usize },

    #[error("invalid Galois action: {0}")]
    InvalidAction(String),

    #[error("subset contains index {index} outside 1..={max}")]
    SubsetOutOfRange { index: usize, max: usize },

    #[error("n = {n} is outside the supported range 0..={max}")]
    PolyIndexOutOfRange { n: usize, max: usize },

    #[error("polynomial has {nvars} variables, at most {max} are supported")]
    PolyTooManyVariables { nvars: usize, max: usize },

    #[error("polynomial involves variable slot {slot} which has no image in a ring with {ambient} variables")]
    StrayVariable { slot: usize, ambient: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
