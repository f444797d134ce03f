use fragsim_core::predictors::*;
use fragsim_core::ModelParams;

fn binary() -> ModelParams {
    ModelParams::new(2, 1.0).unwrap()
}

fn z_by_bisection(p: &ModelParams, n: u32) -> f64 {
    let kappa = p.kappa();
    let rhs = (2.0 * p.gamma() * f64::from(n) / kappa).sqrt();
    let f = |z: f64| z + z.ln() + 1.0 / (2.0 * kappa) + kappa.ln() - 1.0 - rhs;
    let (mut lo, mut hi) = (1e-9, 10.0 * rhs + 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn newton_and_bisection_agree() {
    let p = binary();
    assert!((z_by_bisection(&p, 100) - 8.009).abs() < 1e-3);
    for n in [1, 2, 10, 100, 1000, 100_000] {
        let z = z_solve(&p, n, 1e-12).unwrap();
        assert!((z - z_by_bisection(&p, n)).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn z_minus_w_decays_like_log_over_root() {
    // Fitted constant: (z_n - w_n) sqrt(n) / ln n stays below 0.5 on the grid.
    let p = binary();
    let mut prev = f64::INFINITY;
    for n in [100u32, 1000, 10_000, 100_000] {
        let gap = z_solve(&p, n, 1e-13).unwrap() - w_n(&p, n).unwrap();
        let nf = f64::from(n);
        assert!(gap.abs() * nf.sqrt() / nf.ln() <= 0.5, "n={n}");
        assert!(gap.abs() < prev);
        prev = gap.abs();
    }
}

#[test]
fn windows_never_overlap_on_default_grid() {
    for k in [2, 3, 4] {
        for alpha in [0.5, 1.0, 2.0] {
            let p = ModelParams::new(k, alpha).unwrap();
            for i in 0..60 {
                let t = (10.0 + 5.0 * f64::from(i)).exp();
                let m = m_window(&p, t).unwrap();
                let big = M_window(&p, t).unwrap();
                assert!(m.center + m.half_width < big.center - big.half_width, "k={k} a={alpha} i={i}");
            }
        }
    }
}

#[test]
fn inverse_expansions() {
    let p = binary();
    // Both jump-time bounds bracket the largest-fragment centre.
    let t = 20f64.exp();
    let (a_inv, b_inv) = ab_inverses(&p, t).unwrap();
    let g = g_of_t(&p, t).unwrap();
    assert!(b_inv <= g && g <= a_inv);
    // Leading correction ratio approaches 1 slowly.
    let mut prev = f64::INFINITY;
    for l in [40.0f64, 80.0, 160.0, 320.0] {
        let t = l.exp();
        let (a_inv, _) = ab_inverses(&p, t).unwrap();
        let g = g_of_t(&p, t).unwrap();
        let ratio = (a_inv - g) / (p.kappa() * l.ln() / l);
        assert!((ratio - 1.0).abs() < prev);
        prev = (ratio - 1.0).abs();
    }
}

#[test]
fn jump_conversion_on_smallest_fragment_bounds() {
    // Tabulate p_{-1} <= T_n <= p_{+1}; the resulting windows at t track h(t).
    let p = binary();
    let n0 = 20i64;
    let a: Vec<f64> = (n0..200).map(|n| p_sigma(&p, n as f64, -1).unwrap()).collect();
    let b: Vec<f64> = (n0..200).map(|n| p_sigma(&p, n as f64, 1).unwrap()).collect();
    let bounds = JumpBounds::new(n0, a, b).unwrap();
    for l in [30.0f64, 60.0, 100.0] {
        let w = jump_window_convert(&bounds, l.exp()).unwrap();
        let h = h_of_t(&p, l.exp()).unwrap();
        assert!(w.lo <= w.hi && w.hi <= w.lo + 1);
        assert!((w.lo as f64 - h).abs() < 3.0, "L={l}: {w:?} vs {h}");
    }
}
