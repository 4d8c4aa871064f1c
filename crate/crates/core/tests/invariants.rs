use proptest::prelude::*;
use qbaf_core::generate::{random_qbaf, RandomQbafParams, WeightMode};
use qbaf_core::{
    analyze, integrate, iterate, parse_qbaf, serialize_qbaf, solve_acyclic, IntegrationConfig, IterationConfig,
    Qbaf, SolveStatus,
};

fn params() -> impl Strategy<Value = RandomQbafParams> {
    (1usize..12, 0.0f64..0.6, any::<bool>(), 0.1f64..3.0, any::<u64>()).prop_map(|(n, d, acyclic, w, seed)| {
        RandomQbafParams {
            n_args: n,
            edge_density: d,
            acyclic,
            weight_mode: WeightMode::BoundedMagnitude(w),
            seed,
            ..Default::default()
        }
    })
}

fn strengths_in_unit_interval(values: &[f64]) -> bool {
    values.iter().all(|v| (0.0..=1.0).contains(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solutions_stay_in_unit_interval(p in params()) {
        let q = random_qbaf(&p).unwrap();
        let d = iterate(&q, &IterationConfig::default()).unwrap();
        if let Some(s) = d.interpretation.strengths() {
            prop_assert!(strengths_in_unit_interval(s.as_slice()));
        }
        let c = integrate(&q, &IntegrationConfig::default()).unwrap();
        if let Some(s) = c.interpretation.strengths() {
            prop_assert!(strengths_in_unit_interval(s.as_slice()));
        }
    }

    #[test]
    fn text_format_round_trips(p in params()) {
        let q = random_qbaf(&p).unwrap();
        let text = serialize_qbaf(&q);
        let back = parse_qbaf(&text).unwrap();
        prop_assert_eq!(serialize_qbaf(&back), text);
        prop_assert_eq!(back.base_scores(), q.base_scores());
    }

    #[test]
    fn acyclic_iteration_matches_topological_solve(p in params()) {
        let q = random_qbaf(&RandomQbafParams { acyclic: true, ..p }).unwrap();
        let exact = solve_acyclic(&q).unwrap().strengths().unwrap();
        // Only an exactly repeated state stops the iteration.
        let cfg = IterationConfig { tolerance: f64::MIN_POSITIVE, ..Default::default() };
        let r = iterate(&q, &cfg).unwrap();
        prop_assert!(r.converged());
        prop_assert!(r.steps <= q.depth().unwrap() + 1);
        prop_assert!(r.interpretation.strengths().unwrap().max_abs_diff(&exact) < 1e-12);
    }

    #[test]
    fn contraction_bound_is_respected(p in params(), eps in 1e-9f64..1e-2) {
        let q = random_qbaf(&p).unwrap();
        let g = analyze(&q);
        if let Some(bound) = g.iteration_bound(eps).unwrap() {
            let cfg = IterationConfig { tolerance: eps * (1.0 - g.contraction), max_iterations: 100_000, ..Default::default() };
            let r = iterate(&q, &cfg).unwrap();
            prop_assert_eq!(r.status, SolveStatus::Converged);
            prop_assert!(r.steps as u64 <= bound + 1, "{} > {}", r.steps, bound);
        }
    }
}

#[test]
fn empty_edge_set_returns_base_scores_exactly() {
    let q = Qbaf::from_parts(&[0.0, 0.1, 0.5, 1.0], &[]).unwrap();
    for r in [
        iterate(&q, &IterationConfig::default()).unwrap(),
        integrate(&q, &IntegrationConfig::default()).unwrap(),
    ] {
        assert!(r.converged());
        assert_eq!(r.interpretation.strengths().unwrap().as_slice(), q.base_scores());
    }
}
