//! Continuous MLP-based semantics: the strength vector follows
//! `df/dt = update(f) − f` from `f(0) = β`, integrated with classical RK4.

use crate::discrete::update_into;
use crate::error::{Error, Result};
use crate::model::{Interpretation, Qbaf, SolveReport, SolveStatus, StrengthVector, Trajectory};

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationConfig {
    pub step: f64,
    /// Stop once `‖df/dt‖_∞ < tolerance`.
    pub tolerance: f64,
    pub max_time: f64,
    pub record_trajectory: bool,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            step: 0.05,
            tolerance: 1e-6,
            max_time: 1000.0,
            record_trajectory: false,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig(format!("step must be positive, got {}", self.step)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.max_time >= self.step) {
            return Err(Error::InvalidConfig(format!(
                "max_time ({}) must be at least the step ({})",
                self.max_time, self.step
            )));
        }
        Ok(())
    }
}

/// Reusable buffers for the RK4 stages.
struct Stages {
    k: [Vec<f64>; 4],
    probe: Vec<f64>,
    image: Vec<f64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        Stages {
            k: std::array::from_fn(|_| vec![0.0; n]),
            probe: vec![0.0; n],
            image: vec![0.0; n],
        }
    }
}

fn derivative_into(qbaf: &Qbaf, f: &[f64], image: &mut [f64], out: &mut [f64]) {
    update_into(qbaf, f, image);
    for ((o, u), x) in out.iter_mut().zip(image.iter()).zip(f) {
        *o = u - x;
    }
}

/// `df/dt` at `f`; every component lies in `[−1, 1]`.
pub fn derivative(qbaf: &Qbaf, f: &StrengthVector) -> Vec<f64> {
    let n = qbaf.len();
    let mut image = vec![0.0; n];
    let mut out = vec![0.0; n];
    derivative_into(qbaf, &f.0, &mut image, &mut out);
    out
}

/// Advances `f` by one RK4 step without clamping and returns the state.
fn rk4_raw(qbaf: &Qbaf, f: &[f64], h: f64, st: &mut Stages) -> Vec<f64> {
    let Stages { k, probe, image } = st;
    derivative_into(qbaf, f, image, &mut k[0]);
    for (stage, scale) in [(1usize, 0.5), (2, 0.5), (3, 1.0)] {
        let (done, rest) = k.split_at_mut(stage);
        for ((p, x), d) in probe.iter_mut().zip(f).zip(&done[stage - 1]) {
            *p = x + scale * h * d;
        }
        derivative_into(qbaf, probe, image, &mut rest[0]);
    }
    f.iter()
        .enumerate()
        .map(|(i, x)| x + h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        .collect()
}

/// Largest distance by which an unclamped RK4 step leaves `[0,1]`.
#[cfg(test)]
pub(crate) fn rk4_spill(qbaf: &Qbaf, f: &StrengthVector, h: f64) -> f64 {
    let mut st = Stages::new(qbaf.len());
    rk4_raw(qbaf, &f.0, h, &mut st)
        .into_iter()
        .map(|x| (-x).max(x - 1.0).max(0.0))
        .fold(0.0, f64::max)
}

/// One classical RK4 step of size `h`, clamped to `[0,1]`.
pub fn rk4_step(qbaf: &Qbaf, f: &StrengthVector, h: f64) -> StrengthVector {
    let mut st = Stages::new(qbaf.len());
    StrengthVector(clamp_unit(rk4_raw(qbaf, &f.0, h, &mut st)))
}

fn clamp_unit(mut v: Vec<f64>) -> Vec<f64> {
    for x in &mut v {
        *x = x.clamp(0.0, 1.0);
    }
    v
}

/// Integrates from the base scores until the derivative vanishes to within
/// the tolerance or `max_time` is reached.
pub fn integrate(qbaf: &Qbaf, cfg: &IntegrationConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = qbaf.len();
    let mut st = Stages::new(n);
    let mut f = qbaf.base_scores().to_vec();
    let mut d = vec![0.0; n];
    let mut image = vec![0.0; n];
    let mut points = cfg.record_trajectory.then(|| vec![StrengthVector(f.clone())]);
    let max_steps = (cfg.max_time / cfg.step).ceil() as usize;

    let mut step = 0usize;
    loop {
        derivative_into(qbaf, &f, &mut image, &mut d);
        let rate = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let trajectory = |points: Option<Vec<StrengthVector>>| {
            points.map(|points| Trajectory {
                step_size: Some(cfg.step),
                points,
            })
        };
        if rate < cfg.tolerance {
            return Ok(SolveReport {
                status: SolveStatus::Converged,
                interpretation: Interpretation::from(StrengthVector(f)),
                steps: step,
                residual: rate,
                trajectory: trajectory(points),
            });
        }
        if step >= max_steps {
            return Ok(SolveReport {
                status: SolveStatus::MaxTimeExceeded,
                interpretation: Interpretation::undefined(n),
                steps: step,
                residual: rate,
                trajectory: trajectory(points),
            });
        }
        f = clamp_unit(rk4_raw(qbaf, &f, cfg.step, &mut st));
        step += 1;
        if let Some(p) = points.as_mut() {
            p.push(StrengthVector(f.clone()));
        }
    }
}
