//! The μ-Laplacian and the gradient form.
//!
//! ```text
//! Δf(x)     = (1/μ(x))  Σ_{y~x} w_xy (f(y) - f(x))
//! Γ(f,h)(x) = (1/2μ(x)) Σ_{y~x} w_xy (f(y) - f(x)) (h(y) - h(x))
//! ```
//!
//! Both vanish at isolated vertices.

use crate::error::Result;
use crate::graph::{VertexFunction, WeightedGraph, POSITIVE_FLOOR};
use crate::report::{BoundReport, Site, Tolerance};

pub fn laplacian(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction> {
    f.check_domain(g)?;
    Ok(laplacian_of(g, f.values()))
}

pub(crate) fn laplacian_of(g: &WeightedGraph, f: &[f64]) -> VertexFunction {
    let values = (0..g.len())
        .map(|x| {
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (f[y] - f[x])).sum();
            s / g.mu(x)
        })
        .collect();
    VertexFunction::from_vec(values)
}

pub fn gamma(g: &WeightedGraph, f: &VertexFunction, h: &VertexFunction) -> Result<VertexFunction> {
    f.check_domain(g)?;
    h.check_domain(g)?;
    let values = (0..g.len())
        .map(|x| {
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (f[y] - f[x]) * (h[y] - h[x])).sum();
            s / (2.0 * g.mu(x))
        })
        .collect();
    Ok(VertexFunction::from_vec(values))
}

/// `Γ(f) = Γ(f, f)`.
pub fn gamma_self(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction> {
    gamma(g, f, f)
}

/// Per-vertex `2Γ(√u) - (Δu - 2√u Δ√u)`, identically zero in exact arithmetic.
pub fn sqrt_identity_residual(g: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    u.check_positive(g, POSITIVE_FLOOR)?;
    let s = u.map(f64::sqrt);
    let two_gamma = gamma_self(g, &s)?;
    let lap_u = laplacian(g, u)?;
    let lap_s = laplacian(g, &s)?;
    let values = (0..g.len()).map(|x| 2.0 * two_gamma[x] - (lap_u[x] - 2.0 * s[x] * lap_s[x])).collect();
    Ok(VertexFunction::from_vec(values))
}

/// Magnitude of the terms entering the identity at each vertex,
/// `(1/μ(x)) Σ_{y~x} w_xy (u(y) + u(x))`, which dominates all three of
/// `2Γ(√u)`, `Δu` and `2√u Δ√u`. Residuals are judged relative to it.
pub fn sqrt_identity_scale(g: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    u.check_domain(g)?;
    let values = (0..g.len())
        .map(|x| {
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y].abs() + u[x].abs())).sum();
            s / g.mu(x)
        })
        .collect();
    Ok(VertexFunction::from_vec(values))
}

/// Checks `-Δ√u(x) <= (deg(x)/μ(x)) √u(x)` at every vertex.
pub fn neg_sqrt_laplacian_bound(g: &WeightedGraph, u: &VertexFunction, tol: Tolerance) -> Result<Vec<BoundReport>> {
    u.check_positive(g, POSITIVE_FLOOR)?;
    let s = u.map(f64::sqrt);
    let lap_s = laplacian(g, &s)?;
    Ok((0..g.len())
        .map(|x| {
            let rhs = g.degree(x) / g.mu(x) * s[x];
            BoundReport::new(NEG_SQRT_LAPLACIAN, Site::Vertex(x), -lap_s[x], rhs, tol)
        })
        .collect())
}

pub const NEG_SQRT_LAPLACIAN: &str = "neg-sqrt-laplacian";
pub const SQRT_IDENTITY: &str = "sqrt-identity";
/// Residual allowed by [`sqrt_identity_check`], relative to [`sqrt_identity_scale`].
pub const IDENTITY_REL_TOL: f64 = 1e-12;

/// `|2Γ(√u) − (Δu − 2√uΔ√u)| ≤ IDENTITY_REL_TOL · scale` at every vertex.
pub fn sqrt_identity_check(g: &WeightedGraph, u: &VertexFunction, tol: Tolerance) -> Result<Vec<BoundReport>> {
    let r = sqrt_identity_residual(g, u)?;
    let scale = sqrt_identity_scale(g, u)?;
    Ok((0..g.len())
        .map(|x| BoundReport::new(SQRT_IDENTITY, Site::Vertex(x), r[x].abs(), IDENTITY_REL_TOL * scale[x], tol))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, log_uniform_function, Family, GenMeasure};
    use crate::graph::{GraphBuilder, Measure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k2() -> WeightedGraph {
        generate(&Family::Path { n: 2 }, GenMeasure::Unit, 0).unwrap()
    }

    fn vf(g: &WeightedGraph, v: &[f64]) -> VertexFunction {
        VertexFunction::new(g, v.to_vec()).unwrap()
    }

    #[test]
    fn laplacian_small_cases() {
        let g = k2();
        let lap = laplacian(&g, &vf(&g, &[0.0, 1.0])).unwrap();
        assert_eq!(lap.values(), &[1.0, -1.0]);

        let g = generate(&Family::Path { n: 3 }, GenMeasure::Unit, 0).unwrap();
        let lap = laplacian(&g, &vf(&g, &[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(lap[1], -2.0);

        let c = VertexFunction::constant(&g, 3.7);
        assert!(laplacian(&g, &c).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(laplacian(&g, &vf(&k2(), &[1.0, 2.0])).is_err());
    }

    #[test]
    fn gamma_small_cases() {
        let g = k2();
        let f = vf(&g, &[0.0, 1.0]);
        assert_eq!(gamma_self(&g, &f).unwrap()[0], 0.5);
        let c = VertexFunction::constant(&g, 2.0);
        assert!(gamma(&g, &c, &f).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn isolated_vertices_are_inert() {
        let mut b = GraphBuilder::with_vertices(3, true);
        b.edge_by_index(0, 1, 2.0).unwrap();
        let g = b.build(Measure::Unit).unwrap();
        let f = vf(&g, &[1.0, 5.0, 9.0]);
        assert_eq!(laplacian(&g, &f).unwrap()[2], 0.0);
        assert_eq!(gamma_self(&g, &f).unwrap()[2], 0.0);
        let r = neg_sqrt_laplacian_bound(&g, &f, Tolerance::default()).unwrap();
        assert_eq!((r[2].lhs, r[2].rhs), (0.0, 0.0));
        assert!(r[2].pass);
    }

    #[test]
    fn sqrt_identity_on_k2() {
        let g = k2();
        let u = vf(&g, &[4.0, 1.0]);
        let s = u.map(f64::sqrt);
        assert_eq!(2.0 * gamma_self(&g, &s).unwrap()[0], 1.0);
        assert_eq!(laplacian(&g, &u).unwrap()[0], -3.0);
        assert_eq!(2.0 * s[0] * laplacian(&g, &s).unwrap()[0], -4.0);
        assert_eq!(sqrt_identity_residual(&g, &u).unwrap().values(), &[0.0, 0.0]);

        let c = VertexFunction::constant(&g, 7.0);
        assert_eq!(sqrt_identity_residual(&g, &c).unwrap().values(), &[0.0, 0.0]);
        assert!(sqrt_identity_residual(&g, &vf(&g, &[1.0, 0.0])).is_err());
        assert!(sqrt_identity_residual(&g, &vf(&g, &[1.0, -2.0])).is_err());
    }

    #[test]
    fn sqrt_identity_random_graph() {
        let f = Family::Random { n: 30, p: 0.2, w_lo: 0.1, w_hi: 10.0, connected: true, symmetric: true };
        let g = generate(&f, GenMeasure::Explicit { lo: 0.1, hi: 10.0 }, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = log_uniform_function(&g, 1e-6, 1e6, &mut rng);
        let res = sqrt_identity_residual(&g, &u).unwrap();
        let lap_max = laplacian(&g, &u).unwrap().max_abs();
        assert!(res.max_abs() <= 1e-12 * lap_max);
    }

    #[test]
    fn neg_sqrt_bound_is_tight_as_neighbor_vanishes() {
        let g = k2();
        let c = neg_sqrt_laplacian_bound(&g, &VertexFunction::constant(&g, 4.0), Tolerance::default()).unwrap();
        assert_eq!((c[0].lhs, c[0].rhs), (0.0, 2.0));
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-8, 1e-12] {
            let r = neg_sqrt_laplacian_bound(&g, &vf(&g, &[1.0, eps]), Tolerance::default()).unwrap();
            assert!(r[0].pass);
            assert!((r[0].slack - eps.sqrt()).abs() < 1e-15);
            assert!(r[0].slack < last);
            last = r[0].slack;
        }
    }

    #[test]
    fn identity_check_reports_every_vertex() {
        let g = k2();
        let u = vf(&g, &[1.0, 1e-4]);
        let r = sqrt_identity_check(&g, &u, Tolerance::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|r| r.pass && r.check == SQRT_IDENTITY && r.lhs <= r.rhs));
    }
}
