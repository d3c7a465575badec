use graphheat::estimates::{
    gradient_estimate, gradient_lhs, harnack_exponent, harnack_factor, harnack_optimal_gap, heat_gradient_estimate,
    heat_kernel_lower_bound, heat_kernel_upper_bound, optimal_time_gap, previous_estimate, verify_harnack,
    verify_kernel_bounds, verify_volume_growth, HarnackFactor, IndependenceWitnesses, PairSample,
};
use graphheat::{
    generate, heat_kernel, log_uniform_function, simulate, Family, GenMeasure, Summary, Tolerance, WeightedGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(n: usize, seed: u64, measure: GenMeasure) -> WeightedGraph {
    let f = Family::Random { n, p: 0.3, w_lo: 0.25, w_hi: 4.0, connected: true, symmetric: true };
    generate(&f, measure, seed).unwrap()
}

/// Minimizes a unimodal function of `s > 0` by golden-section search on `ln s`.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    for _ in 0..300 {
        if f(c.exp()) < f(d.exp()) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    let s = ((a + b) / 2.0).exp();
    (s, f(s))
}

#[test]
fn gradient_lhs_matches_square_root_form() {
    // Γ(√u)/u − Δu/(2u) = deg/μ − (1/μ) Σ w √(u_y/u_x)
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..30 {
        let g = random(20, seed, GenMeasure::Explicit { lo: 0.2, hi: 5.0 });
        let u = log_uniform_function(&g, 1e-6, 1e6, &mut rng);
        let lhs = gradient_lhs(&g, &u).unwrap();
        for x in 0..g.len() {
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y] / u[x]).sqrt()).sum();
            let want = (g.degree(x) - s) / g.mu(x);
            // the operator form cancels terms of size w u_y / u_x
            let scale: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y] + u[x]) / u[x]).sum::<f64>() / g.mu(x);
            assert!((lhs[x] - want).abs() <= 1e-14 * scale, "seed {seed} x {x}");
            assert!(want <= g.d_mu());
        }
        let reports = gradient_estimate(&g, &u, Tolerance::default()).unwrap();
        assert!(reports.iter().all(|r| r.pass));
    }
}

#[test]
fn heat_form_passes_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..6 {
        let g = random(15, seed, GenMeasure::Unit);
        let u0 = log_uniform_function(&g, 1e-6, 1e6, &mut rng);
        let reports = heat_gradient_estimate(&g, &u0, &[0.0, 0.01, 0.1, 1.0, 10.0], Tolerance::default()).unwrap();
        let bad: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{:?}", bad.first());
    }
}

#[test]
fn previous_estimate_holds_and_is_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut witnesses = IndependenceWitnesses::default();
    for draw in 0..200 {
        let n = rng.random_range(2..=20);
        let g = random(n, draw as u64, if draw % 2 == 0 { GenMeasure::Unit } else { GenMeasure::Degree });
        let u = log_uniform_function(&g, 1e-6, 1e6, &mut rng);
        let est = previous_estimate(&g, &u, Tolerance::default()).unwrap();
        assert!(est.reports.iter().all(|r| r.pass));
        witnesses.record(draw, &g, &u, &est).unwrap();
    }
    assert!(witnesses.both_directions(), "{witnesses:?}");
}

#[test]
fn harnack_optimal_gap_matches_numeric_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let g = random(rng.random_range(3..15), rng.random(), GenMeasure::Explicit { lo: 0.1, hi: 10.0 });
        let c = g.constants().unwrap();
        let dist = rng.random_range(1..6);
        let (s, v) = golden_min(|s| harnack_exponent(&c, dist, s), 1e-9, 1e9);
        let gap = harnack_optimal_gap(&c, dist);
        assert!((gap - s).abs() <= 1e-6 * gap, "{gap} vs {s}");
        assert!((harnack_exponent(&c, dist, gap) - v).abs() <= 1e-10 * v);
    }
}

#[test]
fn optimal_time_gap_matches_numeric_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let d_mu = 10f64.powf(rng.random_range(-1.0..1.0));
        let mu_max = 10f64.powf(rng.random_range(-1.0..2.0));
        let w_min = 10f64.powf(rng.random_range(-2.0..1.0));
        let t = 10f64.powf(rng.random_range(-2.0..2.0));
        let (gap, value) = optimal_time_gap(d_mu, mu_max, w_min, t).unwrap();
        let (s, v) = golden_min(|s| 2.0 * d_mu * s + 4.0 * mu_max / w_min * t / s, 1e-12, 1e12);
        assert!((value - v).abs() <= 1e-8 * v, "{value} vs {v}");
        assert!((gap - s).abs() <= 1e-6 * gap);
    }
}

#[test]
fn harnack_sweep_passes_and_factor_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pairs = [(0.0, 0.1), (0.1, 1.0), (1.0, 1.0001), (0.5, 10.0)];
    for seed in 0..5 {
        let g = random(12, seed, GenMeasure::Explicit { lo: 0.5, hi: 2.0 });
        let u0 = log_uniform_function(&g, 1e-6, 1e6, &mut rng);
        let reports = verify_harnack(&g, &u0, &pairs, &PairSample::All, Tolerance::default()).unwrap();
        assert_eq!(reports.len(), 144 * pairs.len());
        assert!(reports.iter().all(|r| r.pass));
        for (x, y) in [(0, 1), (2, 7)] {
            let d = g.dist(x, y).unwrap();
            let c = g.constants().unwrap();
            let f = harnack_factor(&g, x, y, 0.5, 2.0).unwrap().finite().unwrap();
            assert!((f.ln() - harnack_exponent(&c, d, 1.5)).abs() <= 1e-12 * f.ln().max(1.0));
        }
    }
    let g = random(6, 1, GenMeasure::Unit);
    assert_eq!(harnack_factor(&g, 0, 3, 0.0, 1e-300).unwrap(), HarnackFactor::Unbounded);
    assert!(harnack_factor(&g, 0, 3, 1.0, 1.0).is_err());
}

#[test]
fn kernel_and_volume_bounds_pass() {
    let times = [0.5, 1.0, 2.0, 5.0];
    for seed in 0..8 {
        let g = random(14, seed, GenMeasure::Degree);
        let mut all = verify_kernel_bounds(&g, &times, Tolerance::default()).unwrap();
        all.extend(verify_volume_growth(&g, &times, Tolerance::default()).unwrap());
        let summary = Summary::from_reports(&all);
        assert!(summary.all_pass(), "{summary:?}");
    }
}

#[test]
fn hypotheses_are_enforced() {
    let unit = random(8, 2, GenMeasure::Unit);
    assert!(verify_kernel_bounds(&unit, &[1.0], Tolerance::default()).is_err());
    assert!(heat_kernel_lower_bound(&unit, 1.0, 0, 1).is_err());
    assert!(heat_kernel_upper_bound(&unit, 1.0, 0).is_ok());
    let f = Family::Random { n: 8, p: 0.4, w_lo: 0.5, w_hi: 2.0, connected: true, symmetric: false };
    let asym = generate(&f, GenMeasure::Degree, 0).unwrap();
    assert!(heat_kernel_upper_bound(&asym, 1.0, 0).is_err());
    assert!(verify_volume_growth(&asym, &[1.0], Tolerance::default()).is_err());
}

#[test]
fn monte_carlo_matches_kernel() {
    let mut consistent = 0;
    let mut total = 0;
    for seed in 0..4u64 {
        let g = random(10, seed, GenMeasure::Explicit { lo: 0.5, hi: 2.0 });
        for t in [0.3, 1.5] {
            let p = heat_kernel(&g, t, 1e-12).unwrap();
            for walk_seed in 0..5u64 {
                let est = simulate(&g, 0, t, 20_000, walk_seed).unwrap();
                assert_eq!(est.counts.iter().sum::<u64>(), 20_000);
                for y in 0..g.len() {
                    total += 1;
                    consistent += est.consistent_with(y, p.get(0, y), 3.0) as usize;
                }
            }
        }
    }
    assert!(consistent as f64 >= 0.99 * total as f64, "{consistent}/{total}");
}

#[test]
fn monte_carlo_respects_kernel_bounds() {
    let g = generate(&Family::Cycle { n: 6 }, GenMeasure::Degree, 0).unwrap();
    for t in [0.5, 2.0] {
        let est = simulate(&g, 0, t, 50_000, 17).unwrap();
        for y in 0..g.len() {
            let lo = heat_kernel_lower_bound(&g, t, 0, y).unwrap();
            let hi = heat_kernel_upper_bound(&g, t, 0).unwrap();
            let hw = 3.0 * est.p_half_width(y);
            assert!(est.p_hat(y) + hw >= lo, "t {t} y {y}");
            assert!(est.p_hat(y) - hw <= hi, "t {t} y {y}");
        }
    }
}

#[test]
fn walk_with_degree_measure_has_unit_rate() {
    // μ = deg makes every holding rate one, so P(no jump by t) = e^{-t}
    let g = generate(&Family::Star { n: 5 }, GenMeasure::Degree, 0).unwrap();
    let t = 0.7;
    let est = simulate(&g, 1, t, 100_000, 3).unwrap();
    let p = heat_kernel(&g, t, 1e-12).unwrap();
    assert!(est.consistent_with(1, p.get(1, 1), 3.0));
    assert!(p.get(1, 1) * g.mu(1) >= (-t).exp());
}
