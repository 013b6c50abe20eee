use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("zero exponent on `{0}`")]
    ZeroExponent(String),
    #[error("presentation has no {0} word")]
    MissingPeripheral(&'static str),
    #[error("invalid torus knot parameters ({0}, {1})")]
    InvalidTorusParameters(i64, i64),
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quasimorphism pattern must be nonempty")]
    EmptyPattern,
    #[error("sample must be nonempty")]
    EmptySample,
    #[error("defect bound must be positive, got {0}")]
    NonpositiveDefect(f64),
    #[error("representation has not been validated against a presentation")]
    NotValidated,
    #[error("invalid finite group: {0}")]
    InvalidGroup(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
