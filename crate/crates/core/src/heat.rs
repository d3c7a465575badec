//! Heat kernel and heat semigroup on a finite weighted graph.
//!
//! The generator is the μ-Laplacian matrix `L` with `L[x][y] = w_xy/μ(x)`
//! off the diagonal and `L[x][x] = -deg(x)/μ(x)`. The kernel is paired with
//! the measure, `u(t, x) = Σ_y μ(y) p(t, x, y) u0(y)`, so
//! `p(t, x, y) = e^{tL}[x][y] / μ(y)`.
//!
//! The main path is uniformization: with `λ = D_μ` the matrix
//! `Q = I + L/λ` is stochastic and
//!
//! ```text
//! e^{tL} = Σ_k e^{-λt} (λt)^k / k! · Q^k
//! ```
//!
//! When `μ = deg` we get `λ = 1` and `Q[x][y] = w_xy/deg(x)`, i.e. the
//! random-walk expansion `p(t,x,y) = e^{-t} Σ t^k/k! p_k(x,y)/deg(y)`.
//! A dense spectral route is kept as an independent oracle.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest graph accepted by [`dense_oracle`].
pub const DENSE_CAP: usize = 200;

/// Random-walk transition matrix `p(x, y) = w_xy / deg(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpMatrix(DMatrix<f64>);

impl JumpMatrix {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0[(x, y)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn row_sum(&self, x: usize) -> f64 {
        self.0.row(x).sum()
    }
}

/// Rows at isolated vertices are zero.
pub fn jump_matrix(g: &WeightedGraph) -> JumpMatrix {
    let n = g.len();
    let mut m = DMatrix::zeros(n, n);
    for (x, y, w) in g.arcs() {
        m[(x, y)] = w / g.degree(x);
    }
    JumpMatrix(m)
}

/// Dense generator matrix `L` of the μ-Laplacian.
pub fn generator_matrix(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.len();
    let mut l = DMatrix::zeros(n, n);
    for (x, y, w) in g.arcs() {
        l[(x, y)] = w / g.mu(x);
    }
    for x in 0..n {
        l[(x, x)] = -g.degree(x) / g.mu(x);
    }
    l
}

/// Poisson(`rate_time`) weights for `k = 0..=K`, renormalized to sum to one.
///
/// Weights are built by ratio recursion outward from the mode, which keeps
/// the relative rounding error at `O(K·eps)` without evaluating `e^{-λt}`
/// (it underflows beyond `λt ≈ 745`). `K` is the first index past the mean
/// where the discarded tail, relative to the retained mass, is at most half
/// the requested bound; renormalizing then moves each weight by at most the
/// same amount, so the total max-norm error of a series built from these
/// weights against a stochastic matrix is within the requested bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonWeights {
    pub rate_time: f64,
    pub weights: Vec<f64>,
    /// Upper bound on the discarded tail relative to the retained mass.
    pub tail_bound: f64,
}

impl PoissonWeights {
    pub fn new(rate_time: f64, tail_tol: f64) -> Self {
        assert!(rate_time >= 0.0 && rate_time.is_finite());
        if rate_time == 0.0 {
            return Self { rate_time, weights: vec![1.0], tail_bound: 0.0 };
        }
        let mode = rate_time.floor() as usize;
        let mut weights = vec![0.0; mode + 1];
        weights[mode] = 1.0;
        for k in (1..=mode).rev() {
            weights[k - 1] = weights[k] * k as f64 / rate_time;
        }
        let mut mass: f64 = weights.iter().sum();
        loop {
            let k = weights.len() - 1;
            let next = weights[k] * rate_time / (k + 1) as f64;
            let ratio = rate_time / (k + 2) as f64;
            if ratio < 1.0 {
                // unnormalized tail beyond k is at most next / (1 - λt/(k+2))
                let tail = next / (1.0 - ratio) / mass;
                if 2.0 * tail <= tail_tol || next == 0.0 {
                    weights.iter_mut().for_each(|w| *w /= mass);
                    return Self { rate_time, weights, tail_bound: 2.0 * tail };
                }
            }
            weights.push(next);
            mass += next;
        }
    }

    pub fn truncation(&self) -> usize {
        self.weights.len() - 1
    }
}

/// Uniformization data for one graph.
#[derive(Debug, Clone)]
pub struct Uniformization {
    /// The rate `λ`; equals `D_μ` unless the graph is edgeless.
    pub rate: f64,
    diag: Vec<f64>,
    /// Off-diagonal `Q[x][y] = w_xy / (μ(x) λ)` in adjacency order.
    off: Vec<Vec<(usize, f64)>>,
}

impl Uniformization {
    pub fn new(g: &WeightedGraph) -> Self {
        let d_mu = g.d_mu();
        let rate = if d_mu > 0.0 { d_mu } else { 1.0 };
        let diag = (0..g.len()).map(|x| (1.0 - g.degree(x) / g.mu(x) / rate).max(0.0)).collect();
        let off =
            (0..g.len()).map(|x| g.neighbors(x).iter().map(|&(y, w)| (y, w / (g.mu(x) * rate))).collect()).collect();
        Self { rate, diag, off }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut q = DMatrix::from_diagonal(&DVector::from_vec(self.diag.clone()));
        for (x, row) in self.off.iter().enumerate() {
            for &(y, v) in row {
                q[(x, y)] = v;
            }
        }
        q
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (x, o) in out.iter_mut().enumerate() {
            *o = self.diag[x] * v[x] + self.off[x].iter().map(|&(y, q)| q * v[y]).sum::<f64>();
        }
    }
}

/// `p(t, ·, ·)` for one time, paired with the measure of `graph`.
#[derive(Debug, Clone)]
pub struct HeatKernel<'g> {
    graph: &'g WeightedGraph,
    t: f64,
    entries: DMatrix<f64>,
    /// Truncation index of the series, `None` for the dense route.
    truncation: Option<usize>,
}

impl<'g> HeatKernel<'g> {
    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.entries[(x, y)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// `Σ_y μ(y) p(t, x, y)`.
    pub fn mass(&self, x: usize) -> f64 {
        (0..self.graph.len()).map(|y| self.graph.mu(y) * self.entries[(x, y)]).sum()
    }

    /// `Σ_z μ(z) p(t, z, y)`, the quantity bounded by one in the kernel upper bound.
    pub fn column_mass(&self, y: usize) -> f64 {
        (0..self.graph.len()).map(|z| self.graph.mu(z) * self.entries[(z, y)]).sum()
    }

    pub fn max_abs_diff(&self, other: &HeatKernel<'_>) -> f64 {
        (&self.entries - &other.entries).abs().max()
    }

    /// Largest `|p(t,x,y) - p(t,y,x)|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).abs().max()
    }

    /// Kernel at `s + t` via `Σ_z μ(z) p(s, x, z) p(t, z, y)`.
    pub fn compose(&self, other: &HeatKernel<'_>) -> HeatKernel<'g> {
        let mu = DMatrix::from_diagonal(&DVector::from_column_slice(self.graph.measure()));
        HeatKernel {
            graph: self.graph,
            t: self.t + other.t,
            entries: &self.entries * mu * &other.entries,
            truncation: None,
        }
    }

    pub const CSV_HEADER: &'static str = "t,x,y,p";

    /// One row per ordered pair, vertices in insertion order.
    pub fn write_csv(&self, mut out: impl Write, header: bool) -> std::io::Result<()> {
        if header {
            writeln!(out, "{}", Self::CSV_HEADER)?;
        }
        let g = self.graph;
        for x in 0..g.len() {
            for y in 0..g.len() {
                writeln!(out, "{},{},{},{}", self.t, g.id(x), g.id(y), self.entries[(x, y)])?;
            }
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")))
    }
}

fn divide_columns_by_measure(g: &WeightedGraph, mut m: DMatrix<f64>) -> DMatrix<f64> {
    for (y, mut col) in m.column_iter_mut().enumerate() {
        col /= g.mu(y);
    }
    m
}

/// Heat kernel by uniformization, max-norm truncation error at most `tol`.
pub fn heat_kernel(g: &WeightedGraph, t: f64, tol: f64) -> Result<HeatKernel<'_>> {
    check_time(t)?;
    check_tol(tol)?;
    let unif = Uniformization::new(g);
    let mu_min = g.measure().iter().copied().fold(1.0, f64::min);
    // Q^k is stochastic, so the discarded tail bounds e^{tL} entrywise;
    // dividing by μ(y) scales that by at most 1/μ_min.
    let pw = PoissonWeights::new(unif.rate * t, tol * mu_min);
    let q = unif.matrix();
    let n = g.len();
    let mut power = DMatrix::identity(n, n);
    let mut acc = DMatrix::identity(n, n) * pw.weights[0];
    for &w in &pw.weights[1..] {
        power = &power * &q;
        acc += &power * w;
    }
    Ok(HeatKernel { graph: g, t, entries: divide_columns_by_measure(g, acc), truncation: Some(pw.truncation()) })
}

/// Solution of `∂_t u = Δu` at `t` with initial data `u0`.
///
/// The absolute error is at most `tol · max|u0|`; for positive `u0` the
/// truncation is tightened so that the relative error at every vertex is at
/// most `tol`.
pub fn evolve(g: &WeightedGraph, u0: &VertexFunction, t: f64, tol: f64) -> Result<VertexFunction> {
    Ok(evolve_at_times(g, u0, &[t], tol)?.pop().expect("one time requested"))
}

/// [`evolve`] for several times, sharing the powers `Q^k u0`.
pub fn evolve_at_times(g: &WeightedGraph, u0: &VertexFunction, times: &[f64], tol: f64) -> Result<Vec<VertexFunction>> {
    u0.check_domain(g)?;
    check_tol(tol)?;
    for &t in times {
        check_time(t)?;
    }
    let v0 = u0.values();
    let max = u0.max_abs();
    let min = v0.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = if min > 0.0 { min / max } else { 1.0 };
    let tail_tol = (tol * scale).max(1e-300);

    let unif = Uniformization::new(g);
    let series: Vec<PoissonWeights> = times.iter().map(|&t| PoissonWeights::new(unif.rate * t, tail_tol)).collect();
    let k_max = series.iter().map(PoissonWeights::truncation).max().unwrap_or(0);

    let n = g.len();
    let mut acc: Vec<Vec<f64>> = series.iter().map(|pw| v0.iter().map(|v| pw.weights[0] * v).collect()).collect();
    let mut v = v0.to_vec();
    let mut next = vec![0.0; n];
    for k in 1..=k_max {
        unif.apply(&v, &mut next);
        std::mem::swap(&mut v, &mut next);
        for (pw, a) in series.iter().zip(acc.iter_mut()) {
            if let Some(&w) = pw.weights.get(k) {
                a.iter_mut().zip(&v).for_each(|(a, v)| *a += w * v);
            }
        }
    }
    Ok(acc.into_iter().map(VertexFunction::from_vec).collect())
}

/// Independent dense kernel: spectral decomposition of the μ-symmetrized
/// generator when weights are symmetric, a general dense matrix
/// exponential otherwise.
pub fn dense_oracle(g: &WeightedGraph, t: f64) -> Result<HeatKernel<'_>> {
    dense_oracle_with_cap(g, t, DENSE_CAP)
}

pub fn dense_oracle_with_cap(g: &WeightedGraph, t: f64, cap: usize) -> Result<HeatKernel<'_>> {
    check_time(t)?;
    let n = g.len();
    if n > cap {
        return Err(Error::TooLarge(n, cap));
    }
    let entries = if g.weights_symmetric() {
        // S = M^{1/2} L M^{-1/2} is symmetric; p = V e^{tΛ} V^T / sqrt(μ(x) μ(y)).
        let sqrt_mu: Vec<f64> = g.measure().iter().map(|m| m.sqrt()).collect();
        let mut s = DMatrix::zeros(n, n);
        for (x, y, w) in g.arcs() {
            s[(x, y)] = w / (sqrt_mu[x] * sqrt_mu[y]);
        }
        for x in 0..n {
            s[(x, x)] = -g.degree(x) / g.mu(x);
        }
        let eig = SymmetricEigen::new(s);
        let v = &eig.eigenvectors;
        let scaled = DMatrix::from_fn(n, n, |i, k| v[(i, k)] * (t * eig.eigenvalues[k]).exp());
        let mut e = scaled * v.transpose();
        for x in 0..n {
            for y in 0..n {
                e[(x, y)] /= sqrt_mu[x] * sqrt_mu[y];
            }
        }
        e
    } else {
        divide_columns_by_measure(g, (generator_matrix(g) * t).exp())
    };
    Ok(HeatKernel { graph: g, t, entries, truncation: None })
}
