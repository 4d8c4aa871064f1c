//! Finite checks of the semantical properties of the logistic semantics on
//! unit-weight QBAFs.
//!
//! Each checker enumerates the witnesses of a property's premise inside a
//! solved QBAF and tests the conclusion. Properties that talk about a second
//! QBAF build that companion instance (a relabelling, a disjoint union, an
//! edge removal, or extra attackers/supporters) and solve it with the
//! configured semantics.
//!
//! Strengths are only known up to solver accuracy, so premises of the form
//! `σ(x) = σ(y)` are matched within `eq_tolerance`, and conclusions are
//! given the same tolerance plus the slack the premise introduced (the
//! logistic function is ¼-Lipschitz).

mod checks;
mod suite;

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ArgumentId, Interpretation, Qbaf};
use crate::semantics::Semantics;

pub use suite::{run_suite, PropertySummary, SuiteConfig, SuiteReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    Anonymity,
    Independence,
    Directionality,
    Equivalence,
    Stability,
    Neutrality,
    /// Includes strict monotony.
    Monotony,
    /// Includes strict reinforcement.
    Reinforcement,
    Resilience,
    Franklin,
    Weakening,
    Strengthening,
    Duality,
    AlmostOpenMindedness,
}

impl PropertyId {
    pub const ALL: [PropertyId; 14] = [
        PropertyId::Anonymity,
        PropertyId::Independence,
        PropertyId::Directionality,
        PropertyId::Equivalence,
        PropertyId::Stability,
        PropertyId::Neutrality,
        PropertyId::Monotony,
        PropertyId::Reinforcement,
        PropertyId::Resilience,
        PropertyId::Franklin,
        PropertyId::Weakening,
        PropertyId::Strengthening,
        PropertyId::Duality,
        PropertyId::AlmostOpenMindedness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::Anonymity => "anonymity",
            PropertyId::Independence => "independence",
            PropertyId::Directionality => "directionality",
            PropertyId::Equivalence => "equivalence",
            PropertyId::Stability => "stability",
            PropertyId::Neutrality => "neutrality",
            PropertyId::Monotony => "monotony",
            PropertyId::Reinforcement => "reinforcement",
            PropertyId::Resilience => "resilience",
            PropertyId::Franklin => "franklin",
            PropertyId::Weakening => "weakening",
            PropertyId::Strengthening => "strengthening",
            PropertyId::Duality => "duality",
            PropertyId::AlmostOpenMindedness => "almost-open-mindedness",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Holds,
    Violated,
    VacuouslyHolds,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Holds => "holds",
            VerdictStatus::Violated => "violated",
            VerdictStatus::VacuouslyHolds => "vacuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyVerdict {
    pub property: PropertyId,
    pub status: VerdictStatus,
    pub witnesses_checked: usize,
    /// First violating witness; present exactly when the status is `Violated`.
    pub counterexample: Option<String>,
}

/// Attackers and supporters of one argument whose strength exceeds a
/// threshold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlusSets {
    pub att_plus: Vec<ArgumentId>,
    pub sup_plus: Vec<ArgumentId>,
}

pub fn plus_sets(qbaf: &Qbaf, sigma: &[f64], a: ArgumentId, threshold: f64) -> PlusSets {
    let mut out = PlusSets::default();
    for (b, w) in qbaf.parents(a) {
        if sigma[b.index()] > threshold {
            if w < 0.0 {
                out.att_plus.push(b);
            } else {
                out.sup_plus.push(b);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub eq_tolerance: f64,
    /// Semantics used for companion instances.
    pub semantics: Semantics,
    pub seed: u64,
    /// Edges removed (one at a time) for directionality.
    pub directionality_edges: usize,
    /// Largest number of arguments of the disjoint component added for
    /// independence.
    pub independence_size: usize,
    pub open_mindedness_ks: Vec<usize>,
    pub open_mindedness_targets: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            eq_tolerance: 1e-4,
            semantics: Semantics::discrete().with_tolerance(1e-12),
            seed: 0,
            directionality_edges: 4,
            independence_size: 4,
            open_mindedness_ks: vec![1, 3, 10],
            open_mindedness_targets: 4,
        }
    }
}

/// Whether an injection `g: sup → att` with `sup[i] ≤ att[g(i)]` exists.
///
/// Matching the i-th largest supporter with the i-th largest attacker is
/// optimal, so sorting both sides decides the question exactly.
pub fn injection_feasible(sup_strengths: &[f64], att_strengths: &[f64]) -> bool {
    if sup_strengths.len() > att_strengths.len() {
        return false;
    }
    let mut sup = sup_strengths.to_vec();
    let mut att = att_strengths.to_vec();
    sup.sort_by(|x, y| y.total_cmp(x));
    att.sort_by(|x, y| y.total_cmp(x));
    sup.iter().zip(&att).all(|(s, a)| s <= a)
}

fn validate_input(qbaf: &Qbaf, sigma: &Interpretation) -> Result<Vec<f64>> {
    if let Some(e) = qbaf.edges().iter().find(|e| e.weight.abs() != 1.0) {
        return Err(Error::NonUnitWeights {
            src: qbaf.label(e.src).to_string(),
            dst: qbaf.label(e.dst).to_string(),
            weight: e.weight,
        });
    }
    if sigma.0.len() != qbaf.len() {
        return Err(Error::PartialInterpretation(format!(
            "{} values for {} arguments",
            sigma.0.len(),
            qbaf.len()
        )));
    }
    sigma
        .0
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::PartialInterpretation(qbaf.labels()[i].clone())))
        .collect()
}

/// Checks one property of `sigma`, an interpretation of `qbaf`.
pub fn check_property(
    prop: PropertyId,
    qbaf: &Qbaf,
    sigma: &Interpretation,
    cfg: &CheckConfig,
) -> Result<PropertyVerdict> {
    let s = validate_input(qbaf, sigma)?;
    Ok(checks::Context::new(qbaf, &s, cfg).check(prop))
}

/// Checks every property, in `PropertyId::ALL` order.
pub fn check_all(qbaf: &Qbaf, sigma: &Interpretation, cfg: &CheckConfig) -> Result<Vec<PropertyVerdict>> {
    let s = validate_input(qbaf, sigma)?;
    let ctx = checks::Context::new(qbaf, &s, cfg);
    Ok(PropertyId::ALL.iter().map(|&p| ctx.check(p)).collect())
}
