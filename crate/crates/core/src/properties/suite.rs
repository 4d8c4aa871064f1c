use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_all, CheckConfig, PropertyId, PropertyVerdict, VerdictStatus};
use crate::continuous::IntegrationConfig;
use crate::discrete::IterationConfig;
use crate::error::{Error, Result};
use crate::generate::{random_qbaf, RandomQbafParams, WeightMode};
use crate::model::{Interpretation, Qbaf};
use crate::semantics::Semantics;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub instances: usize,
    pub seed: u64,
    pub min_args: usize,
    pub max_args: usize,
    pub eq_tolerance: f64,
    /// Stopping tolerance of both engines, for the instance and companions.
    pub solve_tolerance: f64,
    /// Perturb one strength per instance by this amount before checking.
    pub fault: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instances: 100,
            seed: 0,
            min_args: 2,
            max_args: 8,
            eq_tolerance: 1e-4,
            solve_tolerance: 1e-12,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PropertySummary {
    pub holds: usize,
    pub vacuous: usize,
    pub violated: usize,
    pub witnesses: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub instances: usize,
    /// Cyclic draws rejected because discrete iteration did not converge.
    pub resampled: usize,
    /// Instance solves per engine that did not converge (and were skipped).
    pub unsolved: Vec<(String, usize)>,
    pub summaries: Vec<(PropertyId, PropertySummary)>,
    /// Perturbed interpretations checked, and how many were flagged.
    pub injected: usize,
    pub injected_caught: usize,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.summaries.iter().map(|(_, s)| s.violated).sum()
    }
}

fn engines(tolerance: f64) -> [Semantics; 2] {
    [
        Semantics::Discrete(IterationConfig {
            tolerance,
            max_iterations: 100_000,
            ..Default::default()
        }),
        Semantics::Continuous(IntegrationConfig {
            tolerance,
            ..Default::default()
        }),
    ]
}

/// Random unit-weight QBAF that the discrete engine can solve.
fn draw_instance(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, engine: &Semantics) -> (Qbaf, usize) {
    let mut rejected = 0;
    loop {
        let acyclic = rng.gen_bool(0.5);
        let params = RandomQbafParams {
            n_args: rng.gen_range(cfg.min_args..=cfg.max_args),
            edge_density: rng.gen_range(0.15..0.5),
            acyclic,
            weight_mode: WeightMode::UnitSigned,
            base_score_range: (0.0, 1.0),
            seed: rng.gen(),
            max_in_degree: Some(4),
            base_score_levels: Some(11),
        };
        let q = random_qbaf(&params).expect("suite parameters are valid");
        if acyclic || engine.solve(&q).map(|r| r.converged()).unwrap_or(false) {
            return (q, rejected);
        }
        rejected += 1;
    }
}

struct InstanceOutcome {
    verdicts: Vec<PropertyVerdict>,
    unsolved: [usize; 2],
    resampled: usize,
    injected: usize,
    caught: usize,
}

fn run_instance(cfg: &SuiteConfig, index: usize) -> Result<InstanceOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let engines = engines(cfg.solve_tolerance);
    let (q, resampled) = draw_instance(&mut rng, cfg, &engines[0]);
    let mut out = InstanceOutcome {
        verdicts: Vec::new(),
        unsolved: [0; 2],
        resampled,
        injected: 0,
        caught: 0,
    };
    for (k, engine) in engines.iter().enumerate() {
        let check = CheckConfig {
            eq_tolerance: cfg.eq_tolerance,
            semantics: engine.clone(),
            seed: rng.gen(),
            ..Default::default()
        };
        let report = engine.solve(&q)?;
        let Some(strengths) = report.interpretation.strengths() else {
            out.unsolved[k] += 1;
            continue;
        };
        let mut sigma: Interpretation = strengths.into();
        if let Some(delta) = cfg.fault {
            let i = rng.gen_range(0..q.len());
            let v = sigma.0[i].unwrap_or(0.0);
            sigma.0[i] = Some(if v + delta <= 1.0 { v + delta } else { v - delta });
            out.injected += 1;
        }
        let verdicts = check_all(&q, &sigma, &check)?;
        if cfg.fault.is_some() && verdicts.iter().any(|v| v.status == VerdictStatus::Violated) {
            out.caught += 1;
        }
        out.verdicts.extend(verdicts);
    }
    Ok(out)
}

/// Checks every property on `cfg.instances` random unit-weight QBAFs, each
/// solved by both engines. Acyclic and (discretely convergent) cyclic
/// instances are drawn in equal proportion. The result depends only on the
/// configuration, not on the number of worker threads.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.instances == 0 {
        return Err(Error::InvalidConfig("at least one instance is required".into()));
    }
    if cfg.min_args == 0 || cfg.min_args > cfg.max_args {
        return Err(Error::InvalidConfig("argument range must satisfy 1 <= min <= max".into()));
    }
    if !(cfg.eq_tolerance > 0.0 && cfg.solve_tolerance > 0.0) {
        return Err(Error::InvalidConfig("tolerances must be positive".into()));
    }
    let outcomes: Vec<InstanceOutcome> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<_>>()?;

    let mut summaries: Vec<(PropertyId, PropertySummary)> =
        PropertyId::ALL.iter().map(|&p| (p, PropertySummary::default())).collect();
    let mut report = SuiteReport {
        instances: cfg.instances,
        resampled: 0,
        unsolved: vec![],
        summaries: vec![],
        injected: 0,
        injected_caught: 0,
    };
    let mut unsolved = [0usize; 2];
    for o in outcomes {
        report.resampled += o.resampled;
        report.injected += o.injected;
        report.injected_caught += o.caught;
        unsolved[0] += o.unsolved[0];
        unsolved[1] += o.unsolved[1];
        for v in o.verdicts {
            let s = &mut summaries[v.property as usize].1;
            s.witnesses += v.witnesses_checked;
            match v.status {
                VerdictStatus::Holds => s.holds += 1,
                VerdictStatus::VacuouslyHolds => s.vacuous += 1,
                VerdictStatus::Violated => {
                    s.violated += 1;
                    if s.counterexample.is_none() {
                        s.counterexample = v.counterexample;
                    }
                }
            }
        }
    }
    report.unsolved = engines(cfg.solve_tolerance)
        .iter()
        .zip(unsolved)
        .map(|(e, n)| (e.name().to_string(), n))
        .collect();
    report.summaries = summaries;
    Ok(report)
}
