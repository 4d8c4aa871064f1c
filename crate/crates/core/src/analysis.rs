//! Structural convergence guarantees for discrete iteration.
//!
//! The update function is Lipschitz in the ∞-norm with constant at most
//! `W·P/4`, where `W` is the largest edge-weight magnitude and `P` the
//! largest in-degree (the logistic derivative is bounded by ¼). Iteration is
//! therefore a contraction whenever `W·P < 4`.

use crate::error::{Error, Result};
use crate::model::Qbaf;

/// Lipschitz bound of the logistic function.
pub const LOGISTIC_LIPSCHITZ: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub struct GuaranteeReport {
    pub acyclic: bool,
    /// Maximum number of parents of any argument.
    pub max_parents: usize,
    /// Maximum edge-weight magnitude.
    pub max_weight: f64,
    /// `max_weight · max_parents / 4`.
    pub contraction: f64,
    pub guaranteed: bool,
    pub bound_formula_applicable: bool,
}

impl GuaranteeReport {
    pub fn weight_times_parents(&self) -> f64 {
        self.max_weight * self.max_parents as f64
    }

    /// Iteration bound for accuracy `epsilon`, when the contraction applies.
    pub fn iteration_bound(&self, epsilon: f64) -> Result<Option<u64>> {
        iteration_bound(epsilon, self.max_weight, self.max_parents)
    }
}

pub fn analyze(qbaf: &Qbaf) -> GuaranteeReport {
    let max_parents = qbaf.ids().map(|a| qbaf.in_degree(a)).max().unwrap_or(0);
    let max_weight = qbaf.edges().iter().map(|e| e.weight.abs()).fold(0.0, f64::max);
    let contraction = max_weight * max_parents as f64 * LOGISTIC_LIPSCHITZ;
    let acyclic = qbaf.is_acyclic();
    let bound_formula_applicable = contraction < 1.0;
    GuaranteeReport {
        acyclic,
        max_parents,
        max_weight,
        contraction,
        guaranteed: acyclic || bound_formula_applicable,
        bound_formula_applicable,
    }
}

/// Smallest `n` with `n > log ε / log(W·P/4)`, which guarantees per-argument
/// accuracy `ε` after `n` iterations. `None` when `W·P ≥ 4`; `Some(0)` for
/// `ε ≥ 1`, where every strength is trivially within `ε` of the limit.
pub fn iteration_bound(epsilon: f64, max_weight: f64, max_parents: usize) -> Result<Option<u64>> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    let contraction = max_weight * max_parents as f64 * LOGISTIC_LIPSCHITZ;
    if contraction >= 1.0 {
        return Ok(None);
    }
    if epsilon >= 1.0 {
        return Ok(Some(0));
    }
    // ln(0) = −∞ gives a ratio of 0 and hence one iteration.
    let ratio = epsilon.ln() / contraction.ln();
    Ok(Some(ratio.floor() as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::divergence_family;

    #[test]
    fn acyclic_chain_is_guaranteed_regardless_of_weights() {
        let q = Qbaf::from_parts(&[0.5; 4], &[(0, 1, 9.0), (1, 2, -9.0), (0, 2, 9.0), (2, 3, 9.0)]).unwrap();
        let r = analyze(&q);
        assert!(r.acyclic);
        assert!(!r.bound_formula_applicable);
        assert!(r.guaranteed);
    }

    #[test]
    fn w13_p3_is_guaranteed() {
        let edges: Vec<_> = (1..4).map(|b| (b, 0, if b % 2 == 0 { 1.3 } else { -1.3 })).chain([(0, 1, 1.0)]).collect();
        let q = Qbaf::from_parts(&[0.5; 4], &edges).unwrap();
        let r = analyze(&q);
        assert!(!r.acyclic);
        assert_eq!(r.max_parents, 3);
        assert_eq!(r.max_weight, 1.3);
        assert!((r.contraction - 0.975).abs() < 1e-12);
        assert!(r.guaranteed);
        assert_eq!(r.iteration_bound(1e-6).unwrap(), Some(546));
    }

    #[test]
    fn divergence_family_is_not_guaranteed() {
        let r = analyze(&divergence_family(3, 3, 0.5, 0.4, 0.7).unwrap());
        assert_eq!(r.max_parents, 6);
        assert_eq!(r.max_weight, 0.7);
        assert!((r.weight_times_parents() - 4.2).abs() < 1e-12);
        assert!((r.contraction - 1.05).abs() < 1e-12);
        assert!(!r.guaranteed);
        assert!(!r.bound_formula_applicable);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(iteration_bound(2.0, 1.3, 3).unwrap(), Some(0));
        assert_eq!(iteration_bound(1.0, 0.5, 2).unwrap(), Some(0));
        // ln(1e-6)/ln(0.975) = 545.68…
        assert_eq!(iteration_bound(1e-6, 1.3, 3).unwrap(), Some(546));
        assert_eq!(iteration_bound(1e-6, 0.7, 6).unwrap(), None);
        assert_eq!(iteration_bound(1e-6, 0.0, 0).unwrap(), Some(1));
        assert!(matches!(iteration_bound(0.0, 1.0, 1), Err(Error::NonPositiveEpsilon(_))));
        assert!(matches!(iteration_bound(-1.0, 1.0, 1), Err(Error::NonPositiveEpsilon(_))));
    }

    #[test]
    fn bound_grows_with_contraction() {
        let mut last = 0;
        for k in 1..400 {
            let w = k as f64 * 0.01;
            let b = iteration_bound(1e-6, w, 1).unwrap().unwrap();
            assert!(b >= last, "w = {w}");
            last = b;
        }
    }
}
