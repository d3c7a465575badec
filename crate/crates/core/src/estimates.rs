//! Computable forms of the global gradient estimate and its consequences,
//! with verifiers that evaluate each inequality site by site.
//!
//! | check | inequality |
//! |-------|------------|
//! | `gradient` | `Γ(√u)/u − Δu/(2u) ≤ D_μ` for every positive `u` |
//! | `heat-gradient` | `Γ(√u)/u − ∂_t√u/√u ≤ D_μ` along the heat flow |
//! | `previous` | `√(2Γ(u))/u ≤ √d Δu/u + √d D_μ + √D_μ` |
//! | `min-form-global` | `(1−α)Γ(√u)/u − ∂_t√u/√u ≤ D_μ` |
//! | `harnack` | `u(x,T1) ≤ u(y,T2) exp{2D_μ(T2−T1) + 4μ_max/w_min · dist²/(T2−T1)}` |
//! | `kernel-upper` | `p(t,x,y) ≤ exp{4√(2D_μ μ_max t / w_min)} / Vol(B(x,√t))` |
//! | `kernel-lower` | `p(t,x,y) ≥ exp{−2t − 4μ_max/w_min · dist²/t} / deg(y)` (μ = deg) |
//! | `kernel-diagonal` | `p(t,y,y) ≥ e^{−t}/deg(y)` (μ = deg) |
//! | `volume-growth` | `Vol(B(y,√t)) ≤ Vol(B(y,1)) exp{t + 4√(2μ_max t / w_min)}` (μ = deg) |
//! | `volume-growth-deg` | the same with `deg(y)` in place of `Vol(B(y,1))` |

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{gamma_self, laplacian};
use crate::error::{Error, Result};
use crate::graph::{GraphConstants, VertexFunction, WeightedGraph, POSITIVE_FLOOR};
use crate::heat::{evolve_at_times, heat_kernel, HeatKernel};
use crate::report::{BoundReport, Site, Tolerance};

pub const GRADIENT: &str = "gradient";
pub const HEAT_GRADIENT: &str = "heat-gradient";
pub const HEAT_GRADIENT_FD: &str = "heat-gradient-fd";
pub const PREVIOUS: &str = "previous";
pub const MIN_FORM: &str = "min-form-global";
pub const HARNACK: &str = "harnack";
pub const KERNEL_UPPER: &str = "kernel-upper";
pub const KERNEL_LOWER: &str = "kernel-lower";
pub const KERNEL_DIAGONAL: &str = "kernel-diagonal";
pub const VOLUME: &str = "volume-growth";
pub const VOLUME_DEG: &str = "volume-growth-deg";

/// Step of the centered difference used to cross-check `∂_t√u`.
pub const FD_STEP: f64 = 1e-5;
/// Relative agreement required between the exact `∂_t√u` and the difference quotient.
pub const FD_REL_TOL: f64 = 1e-6;
/// Relative series accuracy for evolved solutions fed to the verifiers.
pub const EVOLVE_TOL: f64 = 1e-14;
/// Kernel truncation tolerance used by the kernel-bound verifiers.
pub const KERNEL_TOL: f64 = 1e-12;

fn hypothesis(msg: &str) -> Error {
    Error::Hypothesis(msg.to_string())
}

fn require_symmetric(g: &WeightedGraph) -> Result<()> {
    if g.weights_symmetric() {
        Ok(())
    } else {
        Err(hypothesis("heat kernel bounds need symmetric weights w_xy = w_yx"))
    }
}

fn require_degree_measure(g: &WeightedGraph) -> Result<()> {
    if g.has_degree_measure() {
        Ok(())
    } else {
        Err(hypothesis("this bound needs the degree measure mu(x) = deg(x)"))
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Per-vertex `Γ(√u)/u − Δu/(2u)`.
pub fn gradient_lhs(g: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    u.check_positive(g, POSITIVE_FLOOR)?;
    let gam = gamma_self(g, &u.map(f64::sqrt))?;
    let lap = laplacian(g, u)?;
    VertexFunction::new(g, (0..g.len()).map(|x| gam[x] / u[x] - lap[x] / (2.0 * u[x])).collect())
}

/// Checks `Γ(√u)/u − Δu/(2u) ≤ D_μ` at every vertex.
pub fn gradient_estimate(g: &WeightedGraph, u: &VertexFunction, tol: Tolerance) -> Result<Vec<BoundReport>> {
    let lhs = gradient_lhs(g, u)?;
    let d_mu = g.d_mu();
    Ok((0..g.len()).map(|x| BoundReport::new(GRADIENT, Site::Vertex(x), lhs[x], d_mu, tol)).collect())
}

/// Evolves `u0` and checks the heat-equation form at every `(x, t)`.
///
/// `∂_t√u` is taken as `Δu/(2√u)`. Each site with `t >= FD_STEP` also gets a
/// `heat-gradient-fd` record comparing that value with a centered difference of step
/// [`FD_STEP`]: `lhs = |difference − exact|`, `rhs = FD_REL_TOL · scale`, where
/// `scale = (1/(2√u(x) μ(x))) Σ_y w_xy (u(y) + u(x))` bounds the terms of the
/// exact derivative, plus the rounding floor `8ε√u(x)/h` of the difference
/// quotient.
pub fn heat_gradient_estimate(
    g: &WeightedGraph,
    u0: &VertexFunction,
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<BoundReport>> {
    u0.check_positive(g, POSITIVE_FLOOR)?;
    let d_mu = g.d_mu();
    let mut reports = Vec::new();
    for &t in times {
        // the difference needs t - h >= 0; near t = 0 √u need not be smooth on the scale h
        let centered = t >= FD_STEP;
        let probe = if centered { vec![t, t - FD_STEP, t + FD_STEP] } else { vec![t] };
        let us = evolve_at_times(g, u0, &probe, EVOLVE_TOL)?;
        let u = &us[0];
        let lap = laplacian(g, u)?;
        let gam = gamma_self(g, &u.map(f64::sqrt))?;
        for x in 0..g.len() {
            let s = u[x].sqrt();
            let dt_sqrt = lap[x] / (2.0 * s);
            let lhs = gam[x] / u[x] - dt_sqrt / s;
            reports.push(BoundReport::new(HEAT_GRADIENT, Site::VertexTime(x, t), lhs, d_mu, tol));

            if !centered {
                continue;
            }
            let fd = (us[2][x].sqrt() - us[1][x].sqrt()) / (2.0 * FD_STEP);
            let terms: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y] + u[x])).sum();
            let scale = terms / (2.0 * s * g.mu(x));
            let rounding = 8.0 * f64::EPSILON * s / FD_STEP;
            reports.push(BoundReport::new(
                HEAT_GRADIENT_FD,
                Site::VertexTime(x, t),
                (fd - dt_sqrt).abs(),
                FD_REL_TOL * scale + rounding,
                tol,
            ));
        }
    }
    Ok(reports)
}

/// Which of the two gradient estimates leaves less relative slack at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tighter {
    /// `Γ(√u)/u − Δu/(2u) ≤ D_μ`
    Gradient,
    /// `√(2Γ(u))/u ≤ √d Δu/u + √d D_μ + √D_μ`
    Previous,
    Tie,
}

#[derive(Debug, Clone)]
pub struct PreviousEstimate {
    pub reports: Vec<BoundReport>,
    /// Per-vertex comparison of relative slack against the `gradient` check.
    pub tighter: Vec<Tighter>,
}

/// Relative slacks closer than this count as a tie.
const TIE_BAND: f64 = 1e-12;

/// Checks `√(2Γ(u))/u ≤ √d Δu/u + √d D_μ + √D_μ` and compares it with the
/// `gradient` check at each vertex.
pub fn previous_estimate(g: &WeightedGraph, u: &VertexFunction, tol: Tolerance) -> Result<PreviousEstimate> {
    u.check_positive(g, POSITIVE_FLOOR)?;
    let c = g.constants()?;
    let gam = gamma_self(g, u)?;
    let lap = laplacian(g, u)?;
    let (sd, sdm) = (c.d.sqrt(), c.d_mu.sqrt());
    let current = gradient_estimate(g, u, tol)?;
    let mut reports = Vec::with_capacity(g.len());
    let mut tighter = Vec::with_capacity(g.len());
    for x in 0..g.len() {
        let lhs = (2.0 * gam[x]).sqrt() / u[x];
        let rhs = sd * lap[x] / u[x] + sd * c.d_mu + sdm;
        let r = BoundReport::new(PREVIOUS, Site::Vertex(x), lhs, rhs, tol);
        let diff = current[x].relative_slack() - r.relative_slack();
        tighter.push(if diff.abs() <= TIE_BAND {
            Tighter::Tie
        } else if diff < 0.0 {
            Tighter::Gradient
        } else {
            Tighter::Previous
        });
        reports.push(r);
    }
    Ok(PreviousEstimate { reports, tighter })
}

/// A site where one estimate is strictly tighter than the other.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Index of the draw in the sweep.
    pub draw: usize,
    pub vertex: usize,
    pub gradient_relative_slack: f64,
    pub previous_relative_slack: f64,
}

/// Running record of the independence sweep between the two estimates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndependenceWitnesses {
    pub sites: usize,
    pub gradient_tighter: usize,
    pub previous_tighter: usize,
    pub first_gradient: Option<Witness>,
    pub first_previous: Option<Witness>,
}

impl IndependenceWitnesses {
    pub fn record(&mut self, draw: usize, g: &WeightedGraph, u: &VertexFunction, est: &PreviousEstimate) -> Result<()> {
        let current = gradient_estimate(g, u, Tolerance::default())?;
        for (x, t) in est.tighter.iter().enumerate() {
            self.sites += 1;
            let w = || Witness {
                draw,
                vertex: x,
                gradient_relative_slack: current[x].relative_slack(),
                previous_relative_slack: est.reports[x].relative_slack(),
            };
            match t {
                Tighter::Gradient => {
                    self.gradient_tighter += 1;
                    self.first_gradient.get_or_insert_with(w);
                }
                Tighter::Previous => {
                    self.previous_tighter += 1;
                    self.first_previous.get_or_insert_with(w);
                }
                Tighter::Tie => {}
            }
        }
        Ok(())
    }

    pub fn both_directions(&self) -> bool {
        self.first_gradient.is_some() && self.first_previous.is_some()
    }
}

/// Parameters of the min-form Li–Yau type bound under an assumed `CDE(n, −K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinFormBound {
    pub d_mu: f64,
    pub n: f64,
    pub k: f64,
    pub alpha: f64,
    pub t: f64,
    pub radius: f64,
    pub d_w: f64,
}

impl MinFormBound {
    /// `min{D_μ, n/((1−α)2t) + n(2+D_w)D_μ/((1−α)R) + Kn/(2α)}`.
    pub fn rhs(&self) -> Result<f64> {
        let Self { d_mu, n, k, alpha, t, radius, d_w } = *self;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(radius > 1.0) {
            return Err(Error::InvalidParameter(format!("R must exceed 1, got {radius}")));
        }
        require_positive("t", t)?;
        require_positive("K", k)?;
        require_positive("n", n)?;
        if !(d_mu >= 0.0 && d_w >= 0.0) {
            return Err(Error::InvalidParameter("D_mu and D_w must be nonnegative".into()));
        }
        let local =
            n / ((1.0 - alpha) * 2.0 * t) + n * (2.0 + d_w) * d_mu / ((1.0 - alpha) * radius) + k * n / (2.0 * alpha);
        Ok(d_mu.min(local))
    }
}

/// Checks the `D_μ` branch of the min-form bound:
/// `(1−α)Γ(√u)/u − Δu/(2u) ≤ D_μ`.
pub fn min_form_global(g: &WeightedGraph, u: &VertexFunction, alpha: f64, tol: Tolerance) -> Result<Vec<BoundReport>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    u.check_positive(g, POSITIVE_FLOOR)?;
    let gam = gamma_self(g, &u.map(f64::sqrt))?;
    let lap = laplacian(g, u)?;
    let d_mu = g.d_mu();
    Ok((0..g.len())
        .map(|x| {
            let lhs = (1.0 - alpha) * gam[x] / u[x] - lap[x] / (2.0 * u[x]);
            BoundReport::new(MIN_FORM, Site::Vertex(x), lhs, d_mu, tol)
        })
        .collect())
}

/// The Harnack factor, or `Unbounded` when it overflows `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HarnackFactor {
    Finite(f64),
    Unbounded,
}

impl HarnackFactor {
    pub fn finite(self) -> Option<f64> {
        match self {
            HarnackFactor::Finite(v) => Some(v),
            HarnackFactor::Unbounded => None,
        }
    }
}

/// `2D_μ·gap + (4μ_max/w_min)·dist²/gap`.
pub fn harnack_exponent(c: &GraphConstants, dist: usize, gap: f64) -> f64 {
    let d2 = (dist * dist) as f64;
    2.0 * c.d_mu * gap + 4.0 * c.mu_max / c.w_min * d2 / gap
}

/// Gap `T2 − T1` minimizing the factor at a given distance.
pub fn harnack_optimal_gap(c: &GraphConstants, dist: usize) -> f64 {
    (2.0 * c.mu_max * (dist * dist) as f64 / (c.d_mu * c.w_min)).sqrt()
}

fn exponent_for(g: &WeightedGraph, dist: usize, gap: f64) -> Result<f64> {
    if dist == 0 {
        // no distance term; also covers edgeless graphs
        return Ok(2.0 * g.d_mu() * gap);
    }
    Ok(harnack_exponent(&g.constants()?, dist, gap))
}

/// Factor bounding `u(x,T1) / u(y,T2)` for positive solutions of the heat equation.
pub fn harnack_factor(g: &WeightedGraph, x: usize, y: usize, t1: f64, t2: f64) -> Result<HarnackFactor> {
    if !(t1 < t2) {
        return Err(Error::InvalidParameter(format!("need T1 < T2, got T1={t1}, T2={t2}")));
    }
    let e = exponent_for(g, g.dist(x, y)?, t2 - t1)?;
    let v = e.exp();
    Ok(if v.is_finite() { HarnackFactor::Finite(v) } else { HarnackFactor::Unbounded })
}

/// Which vertex pairs a Harnack sweep visits.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSample {
    All,
    Random { count: usize, seed: u64 },
    Explicit(Vec<(usize, usize)>),
}

impl PairSample {
    /// All pairs up to 30 vertices, otherwise 1000 uniformly sampled pairs.
    pub fn default_for(g: &WeightedGraph, seed: u64) -> Self {
        if g.len() <= 30 {
            PairSample::All
        } else {
            PairSample::Random { count: 1000, seed }
        }
    }

    pub fn pairs(&self, g: &WeightedGraph) -> Vec<(usize, usize)> {
        let n = g.len();
        match self {
            PairSample::All => (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect(),
            PairSample::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let total = n * n;
                sample(&mut rng, total, (*count).min(total)).into_iter().map(|i| (i / n, i % n)).collect()
            }
            PairSample::Explicit(p) => p.clone(),
        }
    }
}

/// Evolves `u0` and checks the Harnack inequality for each time pair and
/// each reachable vertex pair.
///
/// Records are in log form: `lhs = ln u(x,T1)`, `rhs = ln u(y,T2) + exponent`,
/// so the slack is the log-margin and stays finite when the factor overflows.
pub fn verify_harnack(
    g: &WeightedGraph,
    u0: &VertexFunction,
    time_pairs: &[(f64, f64)],
    pairs: &PairSample,
    tol: Tolerance,
) -> Result<Vec<BoundReport>> {
    u0.check_positive(g, POSITIVE_FLOOR)?;
    for &(t1, t2) in time_pairs {
        if !(t1 >= 0.0 && t1 < t2 && t2.is_finite()) {
            return Err(Error::InvalidParameter(format!("need 0 <= T1 < T2, got ({t1}, {t2})")));
        }
    }
    let mut times: Vec<f64> = time_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let solutions = evolve_at_times(g, u0, &times, EVOLVE_TOL)?;
    let solution_at = |t: f64| -> &VertexFunction {
        let i = times.binary_search_by(|s| s.total_cmp(&t)).expect("time was evolved");
        &solutions[i]
    };
    let pairs = pairs.pairs(g);
    let dist = g.distance_matrix();
    let mut reports = Vec::with_capacity(pairs.len() * time_pairs.len());
    for &(t1, t2) in time_pairs {
        let (u1, u2) = (solution_at(t1), solution_at(t2));
        for &(x, y) in &pairs {
            g.check_vertex(x)?;
            g.check_vertex(y)?;
            let Some(d) = dist[x][y] else { continue };
            let e = exponent_for(g, d, t2 - t1)?;
            let site = Site::Spacetime { x, t1, y, t2 };
            reports.push(BoundReport::new(HARNACK, site, u1[x].ln(), u2[y].ln() + e, tol));
        }
    }
    Ok(reports)
}

/// Minimizer and value of `s ↦ 2D_μ s + (4μ_max/w_min) t / s` over `s > 0`.
pub fn optimal_time_gap(d_mu: f64, mu_max: f64, w_min: f64, t: f64) -> Result<(f64, f64)> {
    for (name, v) in [("D_mu", d_mu), ("mu_max", mu_max), ("w_min", w_min), ("t", t)] {
        require_positive(name, v)?;
    }
    let gap = (2.0 * mu_max * t / (d_mu * w_min)).sqrt();
    let value = 4.0 * (2.0 * d_mu * mu_max * t / w_min).sqrt();
    Ok((gap, value))
}

/// `exp{4√(2D_μ μ_max t / w_min)} / Vol(B(x, √t))`. Needs symmetric weights.
pub fn heat_kernel_upper_bound(g: &WeightedGraph, t: f64, x: usize) -> Result<f64> {
    require_positive("t", t)?;
    require_symmetric(g)?;
    let vol = g.ball_volume(x, t.sqrt())?;
    if g.edge_count() == 0 {
        return Ok(1.0 / vol);
    }
    let c = g.constants()?;
    Ok((4.0 * (2.0 * c.d_mu * c.mu_max * t / c.w_min).sqrt()).exp() / vol)
}

/// `exp{−2t − (4μ_max/w_min) dist²/t} / deg(y)`. Needs μ = deg and symmetric weights.
pub fn heat_kernel_lower_bound(g: &WeightedGraph, t: f64, x: usize, y: usize) -> Result<f64> {
    require_positive("t", t)?;
    require_symmetric(g)?;
    require_degree_measure(g)?;
    let d = g.dist(x, y)? as f64;
    let c = g.constants()?;
    Ok((-2.0 * t - 4.0 * c.mu_max / c.w_min * d * d / t).exp() / g.degree(y))
}

/// `e^{−t} / deg(y)`, the first term of the random-walk series. Needs μ = deg.
pub fn diagonal_lower_bound(g: &WeightedGraph, t: f64, y: usize) -> Result<f64> {
    require_positive("t", t)?;
    require_degree_measure(g)?;
    g.check_vertex(y)?;
    Ok((-t).exp() / g.degree(y))
}

fn volume_factor(g: &WeightedGraph, t: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_symmetric(g)?;
    require_degree_measure(g)?;
    let c = g.constants()?;
    Ok((t + 4.0 * (2.0 * c.mu_max * t / c.w_min).sqrt()).exp())
}

/// `Vol(B(y,1)) · exp{t + 4√(2μ_max t / w_min)}`.
pub fn volume_growth_bound(g: &WeightedGraph, y: usize, t: f64) -> Result<f64> {
    let f = volume_factor(g, t)?;
    Ok(g.ball_volume(y, 1.0)? * f)
}

/// `deg(y) · exp{t + 4√(2μ_max t / w_min)}`, the stronger form with `deg(y)`
/// in place of `Vol(B(y,1))`.
pub fn volume_growth_degree_bound(g: &WeightedGraph, y: usize, t: f64) -> Result<f64> {
    let f = volume_factor(g, t)?;
    g.check_vertex(y)?;
    Ok(g.degree(y) * f)
}

/// `p(t,x,y) ≤ upper bound` for every pair.
pub fn verify_kernel_upper(kernel: &HeatKernel<'_>, tol: Tolerance) -> Result<Vec<BoundReport>> {
    let g = kernel.graph();
    let t = kernel.t();
    let mut out = Vec::with_capacity(g.len() * g.len());
    for x in 0..g.len() {
        let bound = heat_kernel_upper_bound(g, t, x)?;
        for y in 0..g.len() {
            out.push(BoundReport::new(KERNEL_UPPER, Site::PairTime(x, y, t), kernel.get(x, y), bound, tol));
        }
    }
    Ok(out)
}

/// `lower bound ≤ p(t,x,y)` for every pair in one component, stored as
/// `lhs = bound`, `rhs = p`.
pub fn verify_kernel_lower(kernel: &HeatKernel<'_>, tol: Tolerance) -> Result<Vec<BoundReport>> {
    let g = kernel.graph();
    let t = kernel.t();
    let dist = g.distance_matrix();
    let mut out = Vec::new();
    for x in 0..g.len() {
        for y in 0..g.len() {
            if dist[x][y].is_none() {
                continue;
            }
            let bound = heat_kernel_lower_bound(g, t, x, y)?;
            out.push(BoundReport::new(KERNEL_LOWER, Site::PairTime(x, y, t), bound, kernel.get(x, y), tol));
        }
    }
    Ok(out)
}

/// `e^{−t}/deg(y) ≤ p(t,y,y)` at every vertex.
pub fn verify_kernel_diagonal(kernel: &HeatKernel<'_>, tol: Tolerance) -> Result<Vec<BoundReport>> {
    let g = kernel.graph();
    let t = kernel.t();
    (0..g.len())
        .map(|y| {
            let bound = diagonal_lower_bound(g, t, y)?;
            Ok(BoundReport::new(KERNEL_DIAGONAL, Site::PairTime(y, y, t), bound, kernel.get(y, y), tol))
        })
        .collect()
}

/// Upper, lower and diagonal kernel bounds at each time. Needs symmetric
/// weights and μ = deg.
pub fn verify_kernel_bounds(g: &WeightedGraph, times: &[f64], tol: Tolerance) -> Result<Vec<BoundReport>> {
    require_symmetric(g)?;
    require_degree_measure(g)?;
    let mut out = Vec::new();
    for &t in times {
        require_positive("t", t)?;
        let kernel = heat_kernel(g, t, KERNEL_TOL)?;
        out.extend(verify_kernel_upper(&kernel, tol)?);
        out.extend(verify_kernel_lower(&kernel, tol)?);
        out.extend(verify_kernel_diagonal(&kernel, tol)?);
    }
    Ok(out)
}

/// Volume growth in both forms at every vertex and time.
pub fn verify_volume_growth(g: &WeightedGraph, times: &[f64], tol: Tolerance) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &t in times {
        for y in 0..g.len() {
            let vol = g.ball_volume(y, t.sqrt())?;
            let site = Site::VertexTime(y, t);
            out.push(BoundReport::new(VOLUME, site, vol, volume_growth_bound(g, y, t)?, tol));
            out.push(BoundReport::new(VOLUME_DEG, site, vol, volume_growth_degree_bound(g, y, t)?, tol));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenMeasure};
    use crate::graph::{GraphBuilder, Measure};

    fn k2() -> WeightedGraph {
        generate(&Family::Path { n: 2 }, GenMeasure::Unit, 0).unwrap()
    }

    fn vf(g: &WeightedGraph, v: &[f64]) -> VertexFunction {
        VertexFunction::new(g, v.to_vec()).unwrap()
    }

    const TOL: Tolerance = Tolerance { abs: 1e-10, rel: 1e-9 };

    #[test]
    fn gradient_k2_values() {
        let g = k2();
        let r = gradient_estimate(&g, &vf(&g, &[4.0, 1.0]), TOL).unwrap();
        assert!((r[0].lhs - 0.5).abs() < 1e-15);
        assert_eq!(r[0].rhs, 1.0);
        let c = gradient_estimate(&g, &VertexFunction::constant(&g, 2.0), TOL).unwrap();
        assert!(c.iter().all(|r| r.lhs == 0.0 && r.pass));
        for eps in [1e-2, 1e-4, 1e-6] {
            let r = gradient_estimate(&g, &vf(&g, &[1.0, eps]), TOL).unwrap();
            // lhs = (1 - 2√ε + ε)/2 - (ε - 1)/2 = 1 - √ε
            assert!((r[0].lhs - (1.0 - eps.sqrt())).abs() < 1e-14);
            assert!((r[0].slack - eps.sqrt()).abs() < 1e-14);
        }
        assert!(gradient_estimate(&g, &vf(&g, &[1.0, 0.0]), TOL).is_err());
    }

    #[test]
    fn previous_k2_values() {
        let g = k2();
        let eps = 1e-3;
        let p = previous_estimate(&g, &vf(&g, &[1.0, eps]), TOL).unwrap();
        assert!((p.reports[0].lhs - (1.0 - eps)).abs() < 1e-15);
        assert!((p.reports[0].rhs - (1.0 + eps)).abs() < 1e-15);
        assert!(p.reports.iter().all(|r| r.pass));
        assert_eq!(p.tighter[0], Tighter::Previous);
        let c = previous_estimate(&g, &VertexFunction::constant(&g, 3.0), TOL).unwrap();
        assert_eq!(c.reports[0].lhs, 0.0);
        assert_eq!(c.reports[0].rhs, 2.0);
    }

    #[test]
    fn gradient_tighter_on_star_leaf() {
        // leaf of a 5-star with μ ≡ 1, center value tiny: relative slacks 0.75 vs 0.8
        let g = generate(&Family::Star { n: 5 }, GenMeasure::Unit, 0).unwrap();
        let mut u = vec![1.0; 5];
        u[0] = 1e-12;
        let p = previous_estimate(&g, &vf(&g, &u), TOL).unwrap();
        assert_eq!(p.tighter[1], Tighter::Gradient);
    }

    #[test]
    fn min_form_formula() {
        let c = MinFormBound { d_mu: 1.0, n: 2.0, k: 1.0, alpha: 0.5, t: 1.0, radius: 2.0, d_w: 2.0 };
        assert_eq!(c.rhs().unwrap(), 1.0);
        let far = MinFormBound { d_mu: 1.0, n: 2.0, k: 1e-9, alpha: 0.5, t: 1e9, radius: 1e12, d_w: 2.0 };
        assert!(far.rhs().unwrap() < 1e-7);
        assert!(MinFormBound { alpha: 1.0, ..c }.rhs().is_err());
        assert!(MinFormBound { radius: 1.0, ..c }.rhs().is_err());
        assert!(MinFormBound { t: 0.0, ..c }.rhs().is_err());
        assert!(MinFormBound { k: 0.0, ..c }.rhs().is_err());
        let g = k2();
        let r = min_form_global(&g, &vf(&g, &[3.0, 0.5]), 0.3, TOL).unwrap();
        assert!(r.iter().all(|r| r.pass));
    }

    #[test]
    fn harnack_factor_values() {
        let g = k2();
        let f = harnack_factor(&g, 0, 0, 0.0, 1.5).unwrap().finite().unwrap();
        assert!((f - 3.0f64.exp()).abs() < 1e-12);
        let f = harnack_factor(&g, 0, 1, 2.0, 3.0).unwrap().finite().unwrap();
        assert!((f - 6.0f64.exp()).abs() < 1e-9);
        assert_eq!(harnack_factor(&g, 0, 1, 0.0, 1e-300).unwrap(), HarnackFactor::Unbounded);
        assert!(harnack_factor(&g, 0, 1, 1.0, 1.0).is_err());

        let mut b = GraphBuilder::with_vertices(3, true);
        b.edge_by_index(0, 1, 1.0).unwrap();
        let g = b.build(Measure::Unit).unwrap();
        assert!(matches!(harnack_factor(&g, 0, 2, 0.0, 1.0), Err(Error::Unreachable(..))));
    }

    #[test]
    fn harnack_k2_closed_form() {
        let g = k2();
        let u0 = vf(&g, &[4.0, 1.0]);
        let r = verify_harnack(&g, &u0, &[(0.0, 1.0)], &PairSample::Explicit(vec![(0, 1)]), TOL).unwrap();
        let ub1 = 2.5 - 1.5 * (-2.0f64).exp();
        assert!((r[0].lhs - 4.0f64.ln()).abs() < 1e-15);
        assert!((r[0].rhs - (ub1.ln() + 6.0)).abs() < 1e-12);
        assert!(r[0].pass);
    }

    #[test]
    fn optimal_gap_values() {
        let (gap, value) = optimal_time_gap(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((gap - 2.0).abs() < 1e-15 && (value - 8.0).abs() < 1e-15);
        let (_, value) = optimal_time_gap(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((value - 8.0).abs() < 1e-15);
        assert!(optimal_time_gap(1.0, 1.0, 1.0, 1e-20).unwrap().1 < 1e-9);
        assert!(optimal_time_gap(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn kernel_bound_values() {
        let g = k2();
        let up = heat_kernel_upper_bound(&g, 1.0, 0).unwrap();
        assert!((up - 0.5 * (4.0 * 2f64.sqrt()).exp()).abs() < 1e-10);
        assert!((up - 143.12).abs() < 0.01);
        let low = heat_kernel_lower_bound(&g, 1.0, 0, 1).unwrap();
        assert!((low - (-6.0f64).exp()).abs() < 1e-15);
        let diag = heat_kernel_lower_bound(&g, 1.0, 0, 0).unwrap();
        assert!(diag <= diagonal_lower_bound(&g, 1.0, 0).unwrap());
        assert!(heat_kernel_upper_bound(&g, 0.0, 0).is_err());
    }

    #[test]
    fn hypotheses_are_enforced() {
        let g = generate(&Family::Path { n: 3 }, GenMeasure::Unit, 0).unwrap();
        assert!(matches!(heat_kernel_lower_bound(&g, 1.0, 0, 1), Err(Error::Hypothesis(_))));
        assert!(matches!(volume_growth_bound(&g, 0, 1.0), Err(Error::Hypothesis(_))));
        assert!(matches!(verify_kernel_bounds(&g, &[1.0], TOL), Err(Error::Hypothesis(_))));

        let f = Family::Random { n: 6, p: 0.5, w_lo: 0.5, w_hi: 2.0, connected: true, symmetric: false };
        let g = generate(&f, GenMeasure::Degree, 1).unwrap();
        assert!(matches!(heat_kernel_upper_bound(&g, 1.0, 0), Err(Error::Hypothesis(_))));
        assert!(matches!(heat_kernel_lower_bound(&g, 1.0, 0, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn volume_growth_k2() {
        let g = k2();
        assert_eq!(g.ball_volume(0, 2.0).unwrap(), 2.0);
        let b = volume_growth_bound(&g, 0, 4.0).unwrap();
        assert!((b - 2.0 * (4.0 + 8.0 * 2f64.sqrt()).exp()).abs() < 1e-6 * b);
        let r = verify_volume_growth(&g, &[1.0, 4.0], TOL).unwrap();
        assert!(r.iter().all(|r| r.pass));
    }

    #[test]
    fn heat_gradient_k2() {
        let g = k2();
        let u0 = vf(&g, &[4.0, 1.0]);
        let r = heat_gradient_estimate(&g, &u0, &[0.0, 1.0], TOL).unwrap();
        assert!(r.iter().all(|r| r.pass), "{r:?}");
        // closed form at t = 1
        let t = 1.0f64;
        let (a, b) = (2.5 + 1.5 * (-2.0 * t).exp(), 2.5 - 1.5 * (-2.0 * t).exp());
        let lhs = 0.5 * (b.sqrt() - a.sqrt()).powi(2) / a - (b - a) / (2.0 * a);
        let got = r.iter().find(|r| r.check == HEAT_GRADIENT && r.site == Site::VertexTime(0, 1.0)).unwrap();
        assert!((got.lhs - lhs).abs() < 1e-12);
    }
}
