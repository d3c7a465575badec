//! Monte Carlo heat kernel estimates from the continuous-time random walk.
//!
//! A walker at `v` waits an exponential time of rate `deg(v)/μ(v)` and then
//! jumps to `y` with probability `w_vy/deg(v)`. The law of its position at
//! time `t` started from `x` is `μ(y) p(t, x, y)`. Walk `i` draws from the
//! ChaCha stream `i` of the root seed, so results do not depend on how the
//! walks are spread over threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

const Z_95: f64 = 1.96;
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkEstimate {
    pub t: f64,
    pub source: usize,
    pub seed: u64,
    pub n_walks: u64,
    pub counts: Vec<u64>,
    mu: Vec<f64>,
}

impl WalkEstimate {
    /// Fraction of walks ending at `y`.
    pub fn fraction(&self, y: usize) -> f64 {
        self.counts[y] as f64 / self.n_walks as f64
    }

    /// `p̂(t, x, y) = counts(y) / (n μ(y))`.
    pub fn p_hat(&self, y: usize) -> f64 {
        self.fraction(y) / self.mu[y]
    }

    /// 95% normal-approximation half-width on `counts(y)/n`. When the count
    /// is 0 or `n` the normal interval degenerates and the rule-of-three
    /// width `3/n` is used instead.
    pub fn half_width(&self, y: usize) -> f64 {
        let n = self.n_walks as f64;
        let c = self.counts[y];
        if c == 0 || c == self.n_walks {
            return 3.0 / n;
        }
        let f = self.fraction(y);
        Z_95 * (f * (1.0 - f) / n).sqrt()
    }

    /// Half-width on the `p̂` scale.
    pub fn p_half_width(&self, y: usize) -> f64 {
        self.half_width(y) / self.mu[y]
    }

    /// Whether `|p̂ − p| ≤ k` half-widths at `y`.
    pub fn consistent_with(&self, y: usize, p: f64, k: f64) -> bool {
        (self.fraction(y) - self.mu[y] * p).abs() <= k * self.half_width(y)
    }

    pub const CSV_HEADER: &'static str = "t,x,y,p_hat,half_width,n_walks,seed";

    pub fn write_csv(&self, g: &WeightedGraph, mut out: impl Write, header: bool) -> std::io::Result<()> {
        if header {
            writeln!(out, "{}", Self::CSV_HEADER)?;
        }
        for y in 0..self.counts.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.t,
                g.id(self.source),
                g.id(y),
                self.p_hat(y),
                self.p_half_width(y),
                self.n_walks,
                self.seed
            )?;
        }
        Ok(())
    }
}

struct Walker<'g> {
    g: &'g WeightedGraph,
    /// cumulative outgoing weights per vertex
    cumulative: Vec<Vec<f64>>,
}

impl<'g> Walker<'g> {
    fn new(g: &'g WeightedGraph) -> Self {
        let cumulative = (0..g.len())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .scan(0.0, |acc, &(_, w)| {
                        *acc += w;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        Self { g, cumulative }
    }

    fn run(&self, start: usize, t: f64, rng: &mut ChaCha8Rng) -> usize {
        let mut v = start;
        let mut clock = 0.0;
        loop {
            let deg = self.g.degree(v);
            if deg == 0.0 {
                return v;
            }
            let hold: f64 = rng.sample(Exp1);
            clock += hold * self.g.mu(v) / deg;
            if clock > t {
                return v;
            }
            let cum = &self.cumulative[v];
            let target = rng.random::<f64>() * cum[cum.len() - 1];
            let i = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
            v = self.g.neighbors(v)[i].0;
        }
    }
}

/// Runs `n_walks` walks from `x` up to time `t`.
pub fn simulate(g: &WeightedGraph, x: usize, t: f64, n_walks: u64, seed: u64) -> Result<WalkEstimate> {
    g.check_vertex(x)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    if n_walks == 0 {
        return Err(Error::InvalidParameter("need at least one walk".into()));
    }
    let walker = Walker::new(g);
    let chunks = n_walks.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; g.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_walks) {
                rng.set_stream(i);
                rng.set_word_pos(0);
                counts[walker.run(x, t, &mut rng)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; g.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(a, b)| *a += b);
                a
            },
        );
    Ok(WalkEstimate { t, source: x, seed, n_walks, counts, mu: g.measure().to_vec() })
}
