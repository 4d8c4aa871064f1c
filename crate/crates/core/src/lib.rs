//! Quantitative bipolar argumentation frameworks with edge weights, evaluated
//! under the logistic (MLP-based) gradual semantics.
//!
//! The crate covers the data model, a text format, the discrete and
//! continuous solvers, structural convergence analysis, the translation to
//! and from multilayer perceptrons, and a randomized checker for the
//! semantic properties of the semantics.

pub mod analysis;
pub mod continuous;
pub mod discrete;
pub mod error;
pub mod generate;
pub mod io;
pub mod mlp;
pub mod model;
pub mod properties;
pub mod semantics;

pub use analysis::{analyze, iteration_bound, GuaranteeReport};
pub use continuous::{integrate, IntegrationConfig};
pub use discrete::{iterate, solve_acyclic, IterationConfig};
pub use error::{Error, Result, ValidationErrors, Violation};
pub use io::{parse_qbaf, serialize_qbaf, write_trajectory};
pub use mlp::{mlp_to_qbaf, parse_mlp, qbaf_to_mlp, serialize_mlp, InputAssignment, Mlp, MlpBuilder};
pub use properties::{
    check_all, check_property, injection_feasible, run_suite, CheckConfig, PropertyId, PropertyVerdict, SuiteConfig,
    SuiteReport, VerdictStatus,
};
pub use semantics::Semantics;
pub use model::{
    ArgumentId, Edge, Interpretation, Qbaf, QbafBuilder, SolveReport, SolveStatus, StrengthVector, Trajectory,
};
