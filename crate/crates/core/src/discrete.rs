//! Discrete MLP-based semantics: weighted-sum aggregation, logistic influence
//! shifted by the base score's log-odds, and synchronous fixed-point
//! iteration starting from the base scores.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{
    max_abs_diff, ArgumentId, Interpretation, Qbaf, SolveReport, SolveStatus, StrengthVector,
    Trajectory,
};

#[derive(Clone, Debug, PartialEq)]
pub struct IterationConfig {
    /// Stop once `‖s⁽ᵏ⁺¹⁾ − s⁽ᵏ⁾‖_∞ < tolerance`.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub record_trajectory: bool,
    /// Period of the cycle the oscillation detector looks for.
    pub oscillation_window: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            tolerance: 1e-6,
            max_iterations: 10_000,
            record_trajectory: false,
            oscillation_window: 2,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Numerically stable `1 / (1 + e^{−z})`, with `±∞ ↦ 1, 0`.
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Influence of an aggregate on an argument with base score `beta`.
///
/// Uses the infinite-limit conventions: β = 0 and β = 1 are fixed points of
/// the influence for every aggregate, and an infinite aggregate drives any
/// other base score to 0 or 1.
pub fn influence(beta: f64, alpha: f64) -> f64 {
    if beta <= 0.0 {
        0.0
    } else if beta >= 1.0 {
        1.0
    } else {
        logistic((beta / (1.0 - beta)).ln() + alpha)
    }
}

/// `Σ w(b,a) · s_b` over the incoming edges of `a`.
pub fn aggregate(qbaf: &Qbaf, s: &StrengthVector, a: ArgumentId) -> Result<f64> {
    if a.index() >= qbaf.len() {
        return Err(Error::UnknownArgument(a.to_string()));
    }
    Ok(weighted_sum(qbaf, &s.0, a.index()))
}

#[inline]
fn weighted_sum(qbaf: &Qbaf, s: &[f64], i: usize) -> f64 {
    let (src, w) = qbaf.parent_slices(i);
    src.iter().zip(w).map(|(&b, &w)| w * s[b]).sum()
}

#[inline]
fn updated_component(qbaf: &Qbaf, s: &[f64], i: usize) -> f64 {
    let beta = qbaf.base_scores()[i];
    if beta == 0.0 || beta == 1.0 {
        return beta;
    }
    let alpha = weighted_sum(qbaf, s, i);
    if alpha == 0.0 {
        return beta;
    }
    logistic(qbaf.log_odds()[i] + alpha)
}

pub(crate) fn update_into(qbaf: &Qbaf, s: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = updated_component(qbaf, s, i);
    }
}

/// One synchronous application of the update function to every argument.
pub fn update(qbaf: &Qbaf, s: &StrengthVector) -> StrengthVector {
    let mut out = vec![0.0; qbaf.len()];
    update_into(qbaf, &s.0, &mut out);
    StrengthVector(out)
}

/// Fixed-point residual `‖update(s) − s‖_∞`.
pub fn residual(qbaf: &Qbaf, s: &StrengthVector) -> f64 {
    update(qbaf, s).max_abs_diff(s)
}

/// Evaluates an acyclic QBAF with one pass over a topological order.
pub fn solve_acyclic(qbaf: &Qbaf) -> Result<Interpretation> {
    let order = qbaf.topological_order()?;
    let mut s = qbaf.base_scores().to_vec();
    for a in order {
        let i = a.index();
        s[i] = updated_component(qbaf, &s, i);
    }
    Ok(StrengthVector(s).into())
}

/// Iterates the update function from the base scores until the step change
/// drops below the tolerance, a period-`oscillation_window` cycle is
/// detected, or the iteration budget runs out.
pub fn iterate(qbaf: &Qbaf, cfg: &IterationConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = qbaf.len();
    let window = cfg.oscillation_window;
    let mut current = qbaf.base_scores().to_vec();
    let mut next = vec![0.0; n];
    let mut recent: VecDeque<Vec<f64>> = VecDeque::with_capacity(window + 1);
    if window >= 2 {
        recent.push_back(current.clone());
    }
    let mut points = cfg
        .record_trajectory
        .then(|| vec![StrengthVector(current.clone())]);

    let mut change = 0.0;
    for step in 1..=cfg.max_iterations {
        update_into(qbaf, &current, &mut next);
        change = max_abs_diff(&next, &current);
        if let Some(p) = points.as_mut() {
            p.push(StrengthVector(next.clone()));
        }

        let status = if change < cfg.tolerance {
            Some(SolveStatus::Converged)
        } else if window >= 2
            && recent.len() == window
            && max_abs_diff(&next, &recent[0]) < cfg.tolerance
        {
            Some(SolveStatus::Oscillating)
        } else {
            None
        };

        if let Some(status) = status {
            let interpretation = if status == SolveStatus::Converged {
                StrengthVector(next).into()
            } else {
                Interpretation::undefined(n)
            };
            return Ok(SolveReport {
                status,
                interpretation,
                steps: step,
                residual: change,
                trajectory: points.map(|points| Trajectory {
                    step_size: None,
                    points,
                }),
            });
        }

        if window >= 2 {
            recent.push_back(next.clone());
            if recent.len() > window {
                recent.pop_front();
            }
        }
        std::mem::swap(&mut current, &mut next);
    }

    Ok(SolveReport {
        status: SolveStatus::MaxIterationsExceeded,
        interpretation: Interpretation::undefined(n),
        steps: cfg.max_iterations,
        residual: change,
        trajectory: points.map(|points| Trajectory {
            step_size: None,
            points,
        }),
    })
}
