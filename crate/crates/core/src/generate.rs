//! Deterministic graph families, seeded random graphs and random positive
//! functions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, Measure, VertexFunction, WeightedGraph};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    Complete {
        n: usize,
    },
    /// One center and `n - 1` leaves.
    Star {
        n: usize,
    },
    /// Erdős–Rényi `G(n, p)` with weights uniform on `[w_lo, w_hi]`.
    ///
    /// `connected` first lays down a random spanning tree. With
    /// `symmetric == false` the two directions of an edge get independent
    /// weights.
    Random {
        n: usize,
        p: f64,
        w_lo: f64,
        w_hi: f64,
        connected: bool,
        symmetric: bool,
    },
}

/// How the generator assigns the vertex measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenMeasure {
    Unit,
    Degree,
    /// `mu` drawn uniformly from `[lo, hi]`.
    Explicit {
        lo: f64,
        hi: f64,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(invalid(format!("{name} range must satisfy 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

/// Builds a member of `family`. Deterministic for a fixed `seed`.
pub fn generate(family: &Family, measure: GenMeasure, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let at_least = |name: &str, n: usize, min: usize| -> Result<()> {
        if n < min {
            Err(invalid(format!("{name} needs n >= {min}, got {n}")))
        } else {
            Ok(())
        }
    };

    let builder = match *family {
        Family::Path { n } => {
            at_least("path", n, 1)?;
            let mut b = GraphBuilder::with_vertices(n, true);
            for i in 1..n {
                b.edge_by_index(i - 1, i, 1.0)?;
            }
            b
        }
        Family::Cycle { n } => {
            at_least("cycle", n, 3)?;
            let mut b = GraphBuilder::with_vertices(n, true);
            for i in 0..n {
                b.edge_by_index(i, (i + 1) % n, 1.0)?;
            }
            b
        }
        Family::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(invalid("grid needs rows, cols >= 1"));
            }
            let mut b = GraphBuilder::new(true);
            for r in 0..rows {
                for c in 0..cols {
                    b.vertex(format!("{r}_{c}"))?;
                }
            }
            let at = |r: usize, c: usize| r * cols + c;
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        b.edge_by_index(at(r, c), at(r, c + 1), 1.0)?;
                    }
                    if r + 1 < rows {
                        b.edge_by_index(at(r, c), at(r + 1, c), 1.0)?;
                    }
                }
            }
            b
        }
        Family::Complete { n } => {
            at_least("complete", n, 1)?;
            let mut b = GraphBuilder::with_vertices(n, true);
            for i in 0..n {
                for j in i + 1..n {
                    b.edge_by_index(i, j, 1.0)?;
                }
            }
            b
        }
        Family::Star { n } => {
            at_least("star", n, 1)?;
            let mut b = GraphBuilder::with_vertices(n, true);
            for leaf in 1..n {
                b.edge_by_index(0, leaf, 1.0)?;
            }
            b
        }
        Family::Random { n, p, w_lo, w_hi, connected, symmetric } => {
            at_least("random", n, 1)?;
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid(format!("edge probability must lie in (0, 1], got {p}")));
            }
            check_range("weight", w_lo, w_hi)?;
            let mut b = GraphBuilder::with_vertices(n, symmetric);
            let add = |b: &mut GraphBuilder, rng: &mut ChaCha8Rng, i: usize, j: usize| {
                if symmetric {
                    let w = uniform(rng, w_lo, w_hi);
                    b.edge_by_index(i, j, w)
                } else {
                    let wij = uniform(rng, w_lo, w_hi);
                    let wji = uniform(rng, w_lo, w_hi);
                    b.edge_by_index(i, j, wij)?;
                    b.edge_by_index(j, i, wji)
                }
            };
            if connected {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                for k in 1..n {
                    let parent = order[rng.random_range(0..k)];
                    let (i, j) = (parent.min(order[k]), parent.max(order[k]));
                    add(&mut b, &mut rng, i, j)?;
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    if !b.has_edge(i, j) && rng.random_bool(p) {
                        add(&mut b, &mut rng, i, j)?;
                    }
                }
            }
            b
        }
    };

    let measure = match measure {
        GenMeasure::Unit => Measure::Unit,
        GenMeasure::Degree => Measure::Degree,
        GenMeasure::Explicit { lo, hi } => {
            check_range("measure", lo, hi)?;
            Measure::Explicit((0..builder.vertex_count()).map(|_| uniform(&mut rng, lo, hi)).collect())
        }
    };
    builder.build(measure).map_err(|e| match e {
        Error::BadMeasure(id, _) => invalid(format!("degree measure needs deg > 0, vertex `{id}` is isolated")),
        e => e,
    })
}

/// Positive function with values log-uniform on `[lo, hi]`.
pub fn log_uniform_function<R: Rng + ?Sized>(g: &WeightedGraph, lo: f64, hi: f64, rng: &mut R) -> VertexFunction {
    assert!(lo > 0.0 && hi >= lo, "log-uniform range must be positive");
    let (a, b) = (lo.ln(), hi.ln());
    VertexFunction::from_vec((0..g.len()).map(|_| (a + (b - a) * rng.random::<f64>()).exp()).collect())
}
