use graphheat::heat::{evolve_at_times, Uniformization};
use graphheat::{
    dense_oracle, evolve, generate, heat_kernel, jump_matrix, laplacian, log_uniform_function, Family, GenMeasure,
    VertexFunction, WeightedGraph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_symmetric(n: usize, seed: u64, measure: GenMeasure) -> WeightedGraph {
    let f = Family::Random { n, p: 0.25, w_lo: 0.2, w_hi: 5.0, connected: seed % 3 != 0, symmetric: true };
    generate(&f, measure, seed).unwrap()
}

fn measures() -> [GenMeasure; 3] {
    [GenMeasure::Unit, GenMeasure::Explicit { lo: 0.3, hi: 4.0 }, GenMeasure::Unit]
}

/// `e^{-t} Σ t^k/k! P^k(x,y) / deg(y)` with `P = D^{-1}W`, valid for μ = deg.
fn random_walk_series(g: &WeightedGraph, t: f64) -> Vec<Vec<f64>> {
    let n = g.len();
    let p: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut row = vec![0.0; n];
            for &(y, w) in g.neighbors(x) {
                row[y] = w / g.degree(x);
            }
            row
        })
        .collect();
    let mut power: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
    let mut coef = (-t).exp();
    let mut acc: Vec<Vec<f64>> = power.iter().map(|r| r.iter().map(|v| coef * v).collect()).collect();
    for k in 1..400 {
        coef *= t / k as f64;
        power = (0..n).map(|x| (0..n).map(|y| (0..n).map(|z| power[x][z] * p[z][y]).sum()).collect()).collect();
        for x in 0..n {
            for y in 0..n {
                acc[x][y] += coef * power[x][y];
            }
        }
        if coef < 1e-30 && k as f64 > t {
            break;
        }
    }
    for row in acc.iter_mut() {
        for (y, v) in row.iter_mut().enumerate() {
            *v /= g.degree(y);
        }
    }
    acc
}

#[test]
fn series_matches_dense_oracle() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize * 7) % 29;
        let g = random_symmetric(n, seed, measures()[seed as usize % 3]);
        for t in [0.1, 1.0, 10.0] {
            let series = heat_kernel(&g, t, 1e-10).unwrap();
            let dense = dense_oracle(&g, t).unwrap();
            let err = series.max_abs_diff(&dense);
            assert!(err <= 1e-8, "seed {seed} n {n} t {t}: {err}");
        }
    }
}

#[test]
fn asymmetric_weights_match_matrix_exponential() {
    for seed in 0..10u64 {
        let f = Family::Random { n: 12, p: 0.3, w_lo: 0.2, w_hi: 5.0, connected: true, symmetric: false };
        let g = generate(&f, GenMeasure::Explicit { lo: 0.5, hi: 2.0 }, seed).unwrap();
        for t in [0.1, 1.0, 3.0] {
            let err = heat_kernel(&g, t, 1e-11).unwrap().max_abs_diff(&dense_oracle(&g, t).unwrap());
            assert!(err <= 1e-8, "seed {seed} t {t}: {err}");
            // rows still integrate to one against μ
            let p = heat_kernel(&g, t, 1e-11).unwrap();
            for x in 0..g.len() {
                assert!((p.mass(x) - 1.0).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn degree_measure_matches_random_walk_series() {
    for seed in 0..10u64 {
        let g = random_symmetric(10, seed * 3 + 1, GenMeasure::Degree);
        for t in [0.1, 1.0, 5.0, 20.0] {
            let want = random_walk_series(&g, t);
            let got = heat_kernel(&g, t, 1e-12).unwrap();
            for x in 0..g.len() {
                for y in 0..g.len() {
                    assert!((got.get(x, y) - want[x][y]).abs() <= 1e-11, "seed {seed} t {t} ({x},{y})");
                }
            }
        }
    }
}

#[test]
fn uniformization_matrix_is_the_jump_matrix_at_degree_measure() {
    let g = random_symmetric(9, 4, GenMeasure::Degree);
    let q = Uniformization::new(&g).matrix();
    let p = jump_matrix(&g);
    assert!((q - p.matrix()).abs().max() <= 1e-15);
}

#[test]
fn semigroup_mass_symmetry() {
    for seed in 0..20u64 {
        let g = random_symmetric(15, seed, measures()[seed as usize % 3]);
        let (s, t) = (0.4, 1.3);
        let ps = heat_kernel(&g, s, 1e-12).unwrap();
        let pt = heat_kernel(&g, t, 1e-12).unwrap();
        let pst = heat_kernel(&g, s + t, 1e-12).unwrap();
        assert!(ps.compose(&pt).max_abs_diff(&pst) <= 1e-8);
        assert!(pst.asymmetry() <= 1e-10);
        for x in 0..g.len() {
            assert!((pst.mass(x) - 1.0).abs() <= 1e-9);
            assert!((pst.column_mass(x) - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn support_follows_components() {
    // two components: a 4-cycle and a path of 3
    let mut b = graphheat::GraphBuilder::with_vertices(7, true);
    for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6)] {
        b.edge_by_index(u, v, 1.5).unwrap();
    }
    let g = b.build(graphheat::Measure::Unit).unwrap();
    let comp = g.components();
    for t in [0.1, 1.0, 10.0] {
        let p = heat_kernel(&g, t, 1e-12).unwrap();
        for x in 0..7 {
            for y in 0..7 {
                if comp[x] == comp[y] {
                    assert!(p.get(x, y) > 0.0, "t {t} ({x},{y})");
                } else {
                    assert_eq!(p.get(x, y), 0.0);
                }
            }
        }
    }
}

#[test]
fn evolve_agrees_with_kernel() {
    let g = random_symmetric(14, 8, GenMeasure::Explicit { lo: 0.5, hi: 3.0 });
    let u0 = log_uniform_function(&g, 0.01, 100.0, &mut ChaCha8Rng::seed_from_u64(1));
    for t in [0.0, 0.3, 2.0] {
        let u = evolve(&g, &u0, t, 1e-13).unwrap();
        let p = heat_kernel(&g, t, 1e-13).unwrap();
        for x in 0..g.len() {
            let want: f64 = (0..g.len()).map(|y| g.mu(y) * p.get(x, y) * u0[y]).sum();
            assert!((u[x] - want).abs() <= 1e-10 * want, "t {t} x {x}");
        }
    }
}

#[test]
fn evolve_solves_the_heat_equation() {
    let h = 1e-5;
    for seed in 0..10u64 {
        let g = random_symmetric(12, seed, measures()[seed as usize % 3]);
        let u0 = log_uniform_function(&g, 1e-3, 1e3, &mut ChaCha8Rng::seed_from_u64(seed));
        for t in [0.05, 1.0, 4.0] {
            let us = evolve_at_times(&g, &u0, &[t - h, t, t + h], 1e-14).unwrap();
            let lap = laplacian(&g, &us[1]).unwrap();
            for x in 0..g.len() {
                let fd = (us[2][x] - us[0][x]) / (2.0 * h);
                let scale: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (us[1][y] + us[1][x])).sum::<f64>() / g.mu(x);
                let rounding = 8.0 * f64::EPSILON * us[1][x] / h;
                assert!((fd - lap[x]).abs() <= 1e-6 * scale + rounding, "seed {seed} t {t} x {x}: {fd} vs {}", lap[x]);
            }
        }
    }
}

#[test]
fn evolve_keeps_relative_accuracy_for_tiny_values() {
    // values spanning 12 orders of magnitude still come out to relative tolerance
    let g = generate(&Family::Path { n: 2 }, GenMeasure::Unit, 0).unwrap();
    let u0 = VertexFunction::new(&g, vec![1e6, 1e-6]).unwrap();
    let t = 1e-3;
    let u = evolve(&g, &u0, t, 1e-12).unwrap();
    let e = (-2.0 * t).exp();
    let want = [(1e6 + 1e-6) / 2.0 + (1e6 - 1e-6) / 2.0 * e, (1e6 + 1e-6) / 2.0 - (1e6 - 1e-6) / 2.0 * e];
    for x in 0..2 {
        assert!((u[x] - want[x]).abs() <= 1e-9 * want[x], "{} vs {}", u[x], want[x]);
    }
}

#[test]
fn large_rate_times_do_not_underflow() {
    let g = generate(&Family::Complete { n: 6 }, GenMeasure::Unit, 0).unwrap();
    // λt = 5 · 400, far past where e^{-λt} underflows
    let p = heat_kernel(&g, 400.0, 1e-10).unwrap();
    for x in 0..6 {
        for y in 0..6 {
            assert!((p.get(x, y) - 1.0 / 6.0).abs() <= 1e-10);
        }
    }
}
