use thiserror::Error;

/// Errors raised by state, operator, cavity, optics and protocol routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register {0} appears in both operands")]
    OverlappingRegister(String),

    #[error("register {0} is not present in the state")]
    MissingRegister(String),

    #[error("register lists differ: {0}")]
    RegisterMismatch(String),

    #[error("register {register} has no basis state named '{name}'")]
    UnknownBasisState { register: String, name: String },

    #[error("register {register} cannot be expressed in the {target} basis")]
    IncompatibleBasis { register: String, target: String },

    #[error("amplitude vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("invalid register: {0}")]
    InvalidRegister(String),

    #[error("invalid cavity parameters: {0}")]
    InvalidCavityParams(String),

    #[error("invalid contrast parameters: {0}")]
    InvalidContrastParams(String),

    #[error("invalid interaction model: {0}")]
    InvalidModel(String),

    #[error("port collision: {0}")]
    PortCollision(String),

    #[error("unknown port '{0}'")]
    UnknownPort(String),

    #[error("invalid component: {0}")]
    InvalidComponent(String),

    #[error("invalid protocol input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Parse(#[from] crate::circuitdsl::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
