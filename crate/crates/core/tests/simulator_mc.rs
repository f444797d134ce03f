use fragsim_core::analytic::{gumbel_limit_mean, survival_kn, survival_sn};
use fragsim_core::simulator::*;
use fragsim_core::statistics::{proportion, Moments};
use fragsim_core::ModelParams;

fn binary() -> ModelParams {
    ModelParams::new(2, 1.0).unwrap()
}

#[test]
fn spine_mean_and_tail() {
    let p = binary();
    let paths = replicate(100_000, 17, |s| spine_sample(&p, 10, s).split_times);
    let m: Moments = paths.iter().map(|s| s[10]).collect();
    let expected: f64 = (0..=10).map(|i| 2f64.powi(i)).sum();
    assert!((m.mean() - expected).abs() < 3.0 * m.std_error());

    for t in [32.0, 64.0] {
        let hits = paths.iter().filter(|s| s[5] > t).count() as u64;
        let (emp, se) = proportion(hits, paths.len() as u64);
        let exact = survival_sn(&p, 5, t).unwrap().value;
        assert!((emp - exact).abs() < 3.0 * se, "t={t}: {emp} vs {exact} (se {se})");
    }
}

#[test]
fn perpetuity_samples_match_survival() {
    let q = 0.5;
    let draws = replicate(64, 3, |s| {
        let mut rng = s.rng();
        (0..4000).map(|_| kn_sample(q, 5, &mut rng)).collect::<Vec<f64>>()
    });
    let all: Vec<f64> = draws.into_iter().flatten().collect();
    for t in [0.5, 1.0, 2.0, 5.0] {
        let hits = all.iter().filter(|&&k| k > t).count() as u64;
        let (emp, se) = proportion(hits, all.len() as u64);
        let exact = survival_kn(q, 5, t).unwrap().value;
        assert!((emp - exact).abs() < 3.0 * se.max(1e-4), "t={t}");
    }
}

#[test]
fn centred_maximum_mean_near_gumbel_mean() {
    let p = binary();
    let records = kmin_kmax_sweep(&p, 18, 2000, 42, DEFAULT_BUDGET_BYTES).unwrap();
    let m: Moments = records.iter().filter(|r| r.n == 18).map(|r| r.tau).collect();
    let limit = gumbel_limit_mean(p.q()).unwrap();
    assert!((m.mean() - limit).abs() < 0.15, "{} vs {limit}", m.mean());
    assert!(records.iter().all(|r| r.k_min <= r.k_max));
}

#[test]
fn engines_agree_on_largest_fragment_law() {
    // {m_t <= n} = {q^{-n} K_n^max > t}.
    let p = binary();
    let reps = 3000;
    let n = 6u32;
    let qn = p.q().powi(n as i32);
    let times: Vec<f64> = [-1.0, 1.0]
        .iter()
        .map(|d| (p.gamma() * f64::from(n) + d) / qn)
        .collect();
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let gill = replicate(reps, 100, |s| {
        let run = gillespie_run(&p, t_max, s, DEFAULT_BUDGET_BYTES).unwrap();
        times.iter().map(|&t| run.depths_at(t).0 <= n).collect::<Vec<bool>>()
    });
    let brw = kmin_kmax_sweep(&p, n, reps, 200, DEFAULT_BUDGET_BYTES).unwrap();
    for (i, &t) in times.iter().enumerate() {
        let a = gill.iter().filter(|v| v[i]).count() as u64;
        let b = brw
            .iter()
            .filter(|r| r.n == n && r.k_max / qn > t)
            .count() as u64;
        let (pa, sa) = proportion(a, reps);
        let (pb, sb) = proportion(b, reps);
        let se = (sa * sa + sb * sb).sqrt();
        assert!((pa - pb).abs() <= 3.0 * se, "t={t}: {pa} vs {pb}");
    }
}

#[test]
fn fkg_and_sibling_decoupling_small_tree() {
    let p = binary();
    let reps = 20_000u64;
    let leaves = replicate(reps, 9, |s| {
        let mut f = BrwFrames::new(&p, 3, s, DEFAULT_BUDGET_BYTES).unwrap();
        while f.advance() {}
        f.current().values.clone()
    });
    // All eight split times beyond t = 8 x, i.e. K(v) > x for every leaf.
    let x = 0.5;
    let all = leaves.iter().filter(|v| v.iter().all(|&k| k > x)).count() as u64;
    let (joint, se_joint) = proportion(all, reps);
    let marginals: Vec<(f64, f64)> = (0..8)
        .map(|i| proportion(leaves.iter().filter(|v| v[i] > x).count() as u64, reps))
        .collect();
    let product: f64 = marginals.iter().map(|m| m.0).product();
    let rel: f64 = marginals.iter().map(|m| (m.1 / m.0).powi(2)).sum::<f64>().sqrt();
    let se = (se_joint.powi(2) + (product * rel).powi(2)).sqrt();
    assert!(joint >= product - 3.0 * se);

    let both = leaves.iter().filter(|v| v[0] <= 1.0 && v[1] <= 1.0).count() as u64;
    let (pj, sj) = proportion(both, reps);
    let bound = (1.0 - survival_kn(p.q(), 3, 1.0).unwrap().value)
        * (1.0 - survival_kn(p.q(), 0, 1.0).unwrap().value);
    assert!(pj <= bound + 3.0 * sj);
}
