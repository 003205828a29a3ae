//! The crate-wide error type.
//!
//! `Error::name` yields the stable machine-readable identifier used in CLI
//! reports, and `Error::exit_code` separates input problems (exit 1) from
//! violated mathematical preconditions (exit 2).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("algebra validation failed: {0}")]
    InvalidAlgebra(String),
    #[error("bimodule validation failed: {0}")]
    InvalidBimodule(String),
    #[error("map is not a derivation")]
    NotADerivation,
    #[error("triple is not a ternary derivation")]
    NotATernaryDerivation,
    #[error("triple is not a ternary automorphism")]
    NotATernaryAutomorphism,
    #[error("component element is not invertible")]
    ComponentNotInvertible,
    #[error("map violates the generalized Leibniz identity")]
    GeneralizedLeibnizViolated,
    #[error("block-form conditions violated: ({0})")]
    TdConditionsViolated(String),
    #[error("bimodule is not faithful ({0})")]
    NotFaithful(String),
    #[error("map is not an algebra automorphism")]
    NotAnAutomorphism,
    #[error("automorphism does not admit the corner factorization: {0}")]
    NotMPreserving(String),
    #[error("input map is not an automorphism of its factor")]
    InputNotAutomorphism,
    #[error("maps fail the pullback compatibility condition")]
    NotInPullback,
    #[error("one or more machine checks failed")]
    VerificationFailed,
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier reported by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NoSolution => "NoSolution",
            Error::Singular => "Singular",
            Error::NotInvertible => "NotInvertible",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::InvalidBimodule(_) => "InvalidBimodule",
            Error::NotADerivation => "NotADerivation",
            Error::NotATernaryDerivation => "NotATernaryDerivation",
            Error::NotATernaryAutomorphism => "NotATernaryAutomorphism",
            Error::ComponentNotInvertible => "ComponentNotInvertible",
            Error::GeneralizedLeibnizViolated => "GeneralizedLeibnizViolated",
            Error::TdConditionsViolated(_) => "TdConditionsViolated",
            Error::NotFaithful(_) => "NotFaithful",
            Error::NotAnAutomorphism => "NotAnAutomorphism",
            Error::NotMPreserving(_) => "NotMPreserving",
            Error::InputNotAutomorphism => "InputNotAutomorphism",
            Error::NotInPullback => "NotInPullback",
            Error::VerificationFailed => "VerificationFailed",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// Process exit code: 1 for input/validation problems, 2 for violated
    /// mathematical preconditions or failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch(_)
            | Error::InvalidAlgebra(_)
            | Error::InvalidBimodule(_)
            | Error::UnknownPreset(_)
            | Error::Parse(_)
            | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
