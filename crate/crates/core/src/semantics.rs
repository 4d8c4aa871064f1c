//! Dispatch between the discrete and continuous engines.

use std::fmt;

use crate::continuous::{integrate, IntegrationConfig};
use crate::discrete::{iterate, IterationConfig};
use crate::error::Result;
use crate::model::{Qbaf, SolveReport};

#[derive(Clone, Debug, PartialEq)]
pub enum Semantics {
    Discrete(IterationConfig),
    Continuous(IntegrationConfig),
}

impl Semantics {
    pub fn discrete() -> Self {
        Semantics::Discrete(IterationConfig::default())
    }

    pub fn continuous() -> Self {
        Semantics::Continuous(IntegrationConfig::default())
    }

    pub fn solve(&self, qbaf: &Qbaf) -> Result<SolveReport> {
        match self {
            Semantics::Discrete(cfg) => iterate(qbaf, cfg),
            Semantics::Continuous(cfg) => integrate(qbaf, cfg),
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Semantics::Discrete(cfg) => cfg.tolerance,
            Semantics::Continuous(cfg) => cfg.tolerance,
        }
    }

    /// Same engine with a different stopping tolerance.
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        match self {
            Semantics::Discrete(cfg) => Semantics::Discrete(IterationConfig { tolerance, ..cfg.clone() }),
            Semantics::Continuous(cfg) => Semantics::Continuous(IntegrationConfig { tolerance, ..cfg.clone() }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Semantics::Discrete(_) => "discrete",
            Semantics::Continuous(_) => "continuous",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
