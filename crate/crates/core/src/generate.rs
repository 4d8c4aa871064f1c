//! Named example QBAFs and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Qbaf, QbafBuilder};

pub const STOCK_LABELS: [&str; 5] = ["A1", "A2", "A3", "sell", "buy"];

/// The stock-trading decision example: two experts (A2, A3) contradict the
/// premises of an expert recommending to sell (A1) and recommend buying,
/// while the two decisions attack each other. Supports weigh `s`, attacks
/// `−s`. Unspecified base scores default to 0.5.
pub fn stock_example(s: f64, base_scores: &[(&str, f64)]) -> Result<Qbaf> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::NonPositiveScale(s));
    }
    let mut scores = [0.5; 5];
    for &(label, score) in base_scores {
        let i = STOCK_LABELS
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::UnknownArgument(label.to_string()))?;
        scores[i] = score;
    }
    let mut b = QbafBuilder::new();
    for (label, score) in STOCK_LABELS.iter().zip(scores) {
        b.argument(*label, score);
    }
    b.edge("A2", "A1", -s)
        .edge("A3", "A1", -s)
        .edge("A2", "buy", s)
        .edge("A3", "buy", s)
        .edge("A1", "sell", s)
        .edge("sell", "buy", -s)
        .edge("buy", "sell", -s);
    b.build()
}

/// Two groups of arguments where each group attacks all of its own members
/// (itself included) and supports every member of the other group.
///
/// Blue arguments are labelled `b1..`, green ones `g1..`, blue first.
pub fn divergence_family(
    n_blue: usize,
    n_green: usize,
    beta_blue: f64,
    beta_green: f64,
    s: f64,
) -> Result<Qbaf> {
    if n_blue == 0 || n_green == 0 {
        return Err(Error::InvalidConfig("both groups need at least one argument".into()));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::NonPositiveScale(s));
    }
    let blue: Vec<String> = (1..=n_blue).map(|i| format!("b{i}")).collect();
    let green: Vec<String> = (1..=n_green).map(|i| format!("g{i}")).collect();
    let mut b = QbafBuilder::new();
    for l in &blue {
        b.argument(l.clone(), beta_blue);
    }
    for l in &green {
        b.argument(l.clone(), beta_green);
    }
    for (own, other) in [(&blue, &green), (&green, &blue)] {
        for src in own {
            for dst in own {
                b.edge(src.clone(), dst.clone(), -s);
            }
            for dst in other {
                b.edge(src.clone(), dst.clone(), s);
            }
        }
    }
    b.build()
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum WeightMode {
    /// Every edge weighs `+1` or `−1`.
    UnitSigned,
    /// Random sign, magnitude uniform in `(0, W]`.
    BoundedMagnitude(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomQbafParams {
    pub n_args: usize,
    /// Probability of each candidate edge.
    pub edge_density: f64,
    pub acyclic: bool,
    pub weight_mode: WeightMode,
    pub base_score_range: (f64, f64),
    pub seed: u64,
    /// Caps the number of parents per argument.
    pub max_in_degree: Option<usize>,
    /// Draw base scores from this many evenly spaced levels of the range
    /// instead of uniformly, so that equal base scores occur.
    pub base_score_levels: Option<usize>,
}

impl Default for RandomQbafParams {
    fn default() -> Self {
        RandomQbafParams {
            n_args: 10,
            edge_density: 0.2,
            acyclic: false,
            weight_mode: WeightMode::UnitSigned,
            base_score_range: (0.0, 1.0),
            seed: 0,
            max_in_degree: None,
            base_score_levels: None,
        }
    }
}

impl RandomQbafParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.base_score_range;
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return bad("base score range must satisfy 0 <= lo <= hi <= 1");
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return bad("edge density must lie in [0,1]");
        }
        if let WeightMode::BoundedMagnitude(w) = self.weight_mode {
            if !(w > 0.0 && w.is_finite()) {
                return bad("weight bound must be positive");
            }
        }
        if matches!(self.base_score_levels, Some(l) if l < 2) {
            return bad("base score levels must be at least 2");
        }
        Ok(())
    }
}

/// Seeded random QBAF. Arguments are labelled `1..=n`.
///
/// In acyclic mode edges only run forward along a random permutation, so the
/// result is always acyclic.
pub fn random_qbaf(params: &RandomQbafParams) -> Result<Qbaf> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_args;
    let (lo, hi) = params.base_score_range;

    let base: Vec<f64> = (0..n)
        .map(|_| match params.base_score_levels {
            Some(levels) => {
                let k = rng.gen_range(0..levels);
                lo + (hi - lo) * k as f64 / (levels - 1) as f64
            }
            None => rng.gen_range(lo..=hi),
        })
        .collect();

    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);

    let cap = params.max_in_degree.unwrap_or(usize::MAX);
    let mut edges = Vec::new();
    for dst in 0..n {
        let mut candidates: Vec<usize> = (0..n)
            .filter(|&src| !params.acyclic || rank[src] < rank[dst])
            .collect();
        candidates.shuffle(&mut rng);
        let mut taken = 0;
        for src in candidates {
            if taken == cap {
                break;
            }
            if rng.gen::<f64>() < params.edge_density {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                let magnitude = match params.weight_mode {
                    WeightMode::UnitSigned => 1.0,
                    WeightMode::BoundedMagnitude(w) => w * (1.0 - rng.gen::<f64>()),
                };
                edges.push((src, dst, sign * magnitude));
                taken += 1;
            }
        }
    }
    Qbaf::from_parts(&base, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::discrete::{iterate, IterationConfig};
    use crate::io::serialize_qbaf;
    use crate::model::SolveStatus;
    use proptest::prelude::*;

    #[test]
    fn stock_example_shape() {
        let q = stock_example(1.0, &[]).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(q.edges().len(), 7);
        assert!(!q.is_acyclic());
        let q2 = stock_example(2.0, &[]).unwrap();
        assert_eq!(q.base_scores(), q2.base_scores());
        for (e1, e2) in q.edges().iter().zip(q2.edges()) {
            assert_eq!((e1.src, e1.dst), (e2.src, e2.dst));
            assert_eq!(e2.weight, 2.0 * e1.weight);
        }
        let sell = q.id_of("sell").unwrap();
        let buy = q.id_of("buy").unwrap();
        assert_eq!(q.weight(buy, sell), Some(-1.0));
        assert_eq!(q.weight(sell, buy), Some(-1.0));
    }

    #[test]
    fn stock_example_overrides_and_errors() {
        let q = stock_example(1.0, &[("sell", 0.7)]).unwrap();
        assert_eq!(q.base_score(q.id_of("sell").unwrap()), 0.7);
        assert!(matches!(stock_example(0.0, &[]), Err(Error::NonPositiveScale(_))));
        assert!(matches!(stock_example(1.0, &[("hold", 0.5)]), Err(Error::UnknownArgument(_))));
    }

    #[test]
    fn stock_variants_converge_to_fixed_points() {
        for s in [1.0, 2.0] {
            let q = stock_example(s, &[]).unwrap();
            let r = iterate(&q, &IterationConfig::default()).unwrap();
            assert_eq!(r.status, SolveStatus::Converged);
            let sigma = r.interpretation.strengths().unwrap();
            assert!(crate::discrete::residual(&q, &sigma) < 1e-5);
        }
    }

    #[test]
    fn canonical_divergence_instance() {
        let q = divergence_family(3, 3, 0.5, 0.4, 0.7).unwrap();
        assert_eq!(q.len(), 6);
        assert_eq!(q.edges().len(), 36);
        let blue = q.id_of("b1").unwrap();
        assert_eq!(q.attackers(blue).unwrap().len(), 3);
        assert_eq!(q.supporters(blue).unwrap().len(), 3);
        for a in q.attackers(blue).unwrap() {
            assert!(q.label(a).starts_with('b'));
        }
        assert!((analyze(&q).weight_times_parents() - 4.2).abs() < 1e-12);
        let q = divergence_family(3, 3, 0.5, 0.4, 0.67).unwrap();
        assert!((analyze(&q).weight_times_parents() - 4.02).abs() < 1e-12);
    }

    #[test]
    fn small_divergence_family_converges() {
        let q = divergence_family(1, 1, 0.5, 0.5, 0.5).unwrap();
        let r = analyze(&q);
        assert!((r.weight_times_parents() - 1.0).abs() < 1e-12);
        assert!(r.guaranteed);
        let rep = iterate(&q, &IterationConfig::default()).unwrap();
        assert_eq!(rep.status, SolveStatus::Converged);
    }

    #[test]
    fn divergence_family_rejects_bad_input() {
        assert!(divergence_family(0, 3, 0.5, 0.4, 0.7).is_err());
        assert!(matches!(divergence_family(1, 1, 0.5, 0.4, -1.0), Err(Error::NonPositiveScale(_))));
    }

    #[test]
    fn zero_density_gives_isolated_arguments() {
        let q = random_qbaf(&RandomQbafParams {
            edge_density: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!(q.edges().is_empty());
    }

    #[test]
    fn same_seed_same_output() {
        let p = RandomQbafParams {
            n_args: 12,
            edge_density: 0.3,
            weight_mode: WeightMode::BoundedMagnitude(2.0),
            seed: 99,
            ..Default::default()
        };
        assert_eq!(serialize_qbaf(&random_qbaf(&p).unwrap()), serialize_qbaf(&random_qbaf(&p).unwrap()));
        let other = RandomQbafParams { seed: 100, ..p.clone() };
        assert_ne!(serialize_qbaf(&random_qbaf(&p).unwrap()), serialize_qbaf(&random_qbaf(&other).unwrap()));
    }

    #[test]
    fn invalid_params_are_rejected() {
        for p in [
            RandomQbafParams { base_score_range: (0.6, 0.4), ..Default::default() },
            RandomQbafParams { edge_density: 1.5, ..Default::default() },
            RandomQbafParams { weight_mode: WeightMode::BoundedMagnitude(0.0), ..Default::default() },
            RandomQbafParams { base_score_levels: Some(1), ..Default::default() },
        ] {
            assert!(random_qbaf(&p).is_err());
        }
    }

    #[test]
    fn divergence_family_in_degree_is_uniform() {
        for (nb, ng) in [(1, 1), (2, 5), (3, 3), (4, 1)] {
            let q = divergence_family(nb, ng, 0.5, 0.4, 0.7).unwrap();
            for a in q.ids() {
                assert_eq!(q.in_degree(a), nb + ng);
            }
        }
    }

    proptest! {
        #[test]
        fn random_qbaf_respects_bounds(
            n in 0usize..25,
            density in 0.0f64..=1.0,
            acyclic: bool,
            unit: bool,
            w in 0.01f64..5.0,
            lo in 0.0f64..=1.0,
            span in 0.0f64..=1.0,
            cap in proptest::option::of(0usize..5),
            seed: u64,
        ) {
            let hi = (lo + span).min(1.0);
            let p = RandomQbafParams {
                n_args: n,
                edge_density: density,
                acyclic,
                weight_mode: if unit { WeightMode::UnitSigned } else { WeightMode::BoundedMagnitude(w) },
                base_score_range: (lo, hi),
                seed,
                max_in_degree: cap,
                base_score_levels: None,
            };
            let q = random_qbaf(&p).unwrap();
            prop_assert_eq!(q.len(), n);
            for &b in q.base_scores() {
                prop_assert!(lo <= b && b <= hi);
            }
            for e in q.edges() {
                if unit {
                    prop_assert_eq!(e.weight.abs(), 1.0);
                } else {
                    prop_assert!(e.weight.abs() <= w && e.weight != 0.0);
                }
            }
            if let Some(c) = cap {
                for a in q.ids() {
                    prop_assert!(q.in_degree(a) <= c);
                }
            }
            if acyclic {
                prop_assert!(q.is_acyclic());
            }
        }
    }
}
