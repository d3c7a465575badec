//! Fixtures shared by the benchmarks.

use graphheat::{generate, log_uniform_function, Family, GenMeasure, VertexFunction, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Connected random graph with about `avg_degree` neighbours per vertex and μ = deg.
pub fn random_graph(n: usize, avg_degree: f64, seed: u64) -> WeightedGraph {
    let p = (avg_degree / n as f64).min(1.0);
    let f = Family::Random { n, p, w_lo: 0.5, w_hi: 2.0, connected: true, symmetric: true };
    generate(&f, GenMeasure::Degree, seed).expect("valid family")
}

pub fn grid(side: usize) -> WeightedGraph {
    generate(&Family::Grid { rows: side, cols: side }, GenMeasure::Degree, 0).expect("valid family")
}

pub fn positive_function(g: &WeightedGraph, seed: u64) -> VertexFunction {
    log_uniform_function(g, 1e-6, 1e6, &mut ChaCha8Rng::seed_from_u64(seed))
}
