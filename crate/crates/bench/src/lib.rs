//! Fixture builders shared by the benchmarks.

use qbaf_core::generate::{divergence_family, random_qbaf, RandomQbafParams, WeightMode};
use qbaf_core::mlp::{random_mlp, RandomMlpParams};
use qbaf_core::{InputAssignment, Mlp, Qbaf};

/// Contracting cyclic QBAF: every argument has `in_degree` parents with
/// weights bounded so that the discrete iteration is guaranteed to converge.
pub fn contracting(n: usize, in_degree: usize, seed: u64) -> Qbaf {
    random_qbaf(&RandomQbafParams {
        n_args: n,
        edge_density: 1.0,
        acyclic: false,
        weight_mode: WeightMode::BoundedMagnitude(3.0 / in_degree as f64),
        seed,
        max_in_degree: Some(in_degree),
        ..Default::default()
    })
    .expect("valid parameters")
}

pub fn acyclic(n: usize, density: f64, seed: u64) -> Qbaf {
    random_qbaf(&RandomQbafParams {
        n_args: n,
        edge_density: density,
        acyclic: true,
        weight_mode: WeightMode::BoundedMagnitude(2.0),
        seed,
        ..Default::default()
    })
    .expect("valid parameters")
}

/// Symmetric two-group instance of `n` arguments per group at weight `s`.
pub fn divergence(n: usize, s: f64) -> Qbaf {
    divergence_family(n, n, 0.5, 0.4, s).expect("valid parameters")
}

pub fn mlp(layers: usize, width: usize, seed: u64) -> (Mlp, InputAssignment) {
    random_mlp(&RandomMlpParams {
        max_layers: layers,
        max_width: width,
        seed,
        ..Default::default()
    })
    .expect("valid parameters")
}
