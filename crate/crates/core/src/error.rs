use std::fmt;

use thiserror::Error;

/// A single well-formedness violation found while validating a QBAF.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BaseScoreOutOfRange { argument: String, value: f64 },
    ZeroWeightEdge { src: String, dst: String },
    NonFiniteWeight { src: String, dst: String, value: f64 },
    DanglingEndpoint { src: String, dst: String, missing: String },
    DuplicateEdge { src: String, dst: String },
    DuplicateArgument { argument: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BaseScoreOutOfRange { argument, value } => {
                write!(f, "base score {value} of argument `{argument}` is outside [0,1]")
            }
            Violation::ZeroWeightEdge { src, dst } => {
                write!(f, "edge {src} -> {dst} has weight 0")
            }
            Violation::NonFiniteWeight { src, dst, value } => {
                write!(f, "edge {src} -> {dst} has non-finite weight {value}")
            }
            Violation::DanglingEndpoint { src, dst, missing } => {
                write!(f, "edge {src} -> {dst} refers to undeclared argument `{missing}`")
            }
            Violation::DuplicateEdge { src, dst } => {
                write!(f, "edge {src} -> {dst} is declared more than once")
            }
            Violation::DuplicateArgument { argument } => {
                write!(f, "argument `{argument}` is declared more than once")
            }
        }
    }
}

/// All violations found in one QBAF, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<Violation>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid QBAF: {0}")]
    Validation(ValidationErrors),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown argument `{0}`")]
    UnknownArgument(String),

    #[error("graph contains a cycle")]
    CyclicGraph,

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("base score {0} has no finite bias")]
    ExtremeBaseScore(f64),

    #[error("input node `{0}` has no assigned value")]
    MissingInput(String),

    #[error("input value {value} for node `{node}` is outside [0,1]")]
    InputOutOfRange { node: String, value: f64 },

    #[error("invalid MLP: {0}")]
    InvalidMlp(String),

    #[error("property checks require unit weights; edge {src} -> {dst} has weight {weight}")]
    NonUnitWeights {
        src: String,
        dst: String,
        weight: f64,
    },

    #[error("interpretation is partial (argument `{0}` is undefined)")]
    PartialInterpretation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("trajectory sink unavailable: {0}")]
    SinkUnavailable(#[source] std::io::Error),

    #[error("solve report carries no trajectory")]
    MissingTrajectory,
}

pub type Result<T> = std::result::Result<T, Error>;
