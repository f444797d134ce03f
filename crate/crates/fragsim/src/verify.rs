//! Named acceptance suites. Each check reports an observed value against
//! its pinned expectation; Monte Carlo expectations are golden values
//! recorded from the default seed.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use fragsim_core::analytic::*;
use fragsim_core::predictors::{m_window, w_n};
use fragsim_core::simulator::{
    brw_replicas, gillespie_run, kmin_kmax_sweep, kn_sample, replicate, BrwFrames,
};
use fragsim_core::statistics::*;
use fragsim_core::ModelParams;

use crate::config::{Engine, ExperimentSpec};
use crate::error::{HarnessError, Result};
use crate::run::write_simulation;

pub const DEFAULT_VERIFY_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Tails,
    Leftail,
    Extremes,
    Pointprocess,
    Coverage,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Tails => &[1, 2, 3],
            Suite::Leftail => &[4],
            Suite::Extremes => &[5, 8, 10, 11],
            Suite::Pointprocess => &[6, 7],
            Suite::Coverage => &[9],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        <Suite as clap::ValueEnum>::from_str(s, false)
            .map_err(|_| HarnessError::Usage(format!("unknown suite {s:?}")))
    }
}

/// One comparison. `informational` checks are reported but never fail.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub observed: f64,
    pub expected: String,
    pub pass: bool,
    pub informational: bool,
}

impl CheckResult {
    fn new(criterion: u8, name: impl Into<String>, observed: f64, expected: impl Into<String>, pass: bool) -> Self {
        CheckResult { criterion, name: name.into(), observed, expected: expected.into(), pass, informational: false }
    }

    fn info(criterion: u8, name: impl Into<String>, observed: f64, note: impl Into<String>) -> Self {
        CheckResult { informational: true, ..Self::new(criterion, name, observed, note, true) }
    }

    fn within(criterion: u8, name: impl Into<String>, observed: f64, target: f64, tol: f64) -> Self {
        let pass = (observed - target).abs() <= tol;
        Self::new(criterion, name, observed, format!("{target:.6} +/- {tol:.3e}"), pass)
    }

    fn at_most(criterion: u8, name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(criterion, name, observed, format!("<= {bound}"), observed <= bound)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.informational, self.pass) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        write!(
            f,
            "[{tag}] {:>2} {}: observed {:.6}, expected {}",
            self.criterion, self.name, self.observed, self.expected
        )
    }
}

pub fn all_pass(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Maxima over `t in [2, 20]` (step 1/2) of
/// `|P(K_n > t) phi_n e^t - 1| e^{(1/q - 1) t}`, from a 40-digit
/// evaluation of the hypoexponential form.
pub const ENVELOPE_GOLDENS: [(f64, Option<usize>, f64); 6] = [
    (0.5, Some(5), 0.968_75),
    (0.5, Some(20), 0.999_999_046_325_683_6),
    (0.5, None, 1.0),
    (0.8, Some(5), 2.683_832_097_233_313_8),
    (0.8, Some(20), 3.940_514_866_302_384_9),
    (0.8, None, 3.986_278_153_935_946_4),
];

/// Smallest-fragment concentration rate at k=2, alpha=1, generation 20,
/// 200 replicas, slack 0.5, seed 42.
pub const MIN_CONCENTRATION_GOLDEN: f64 = 0.965;

/// Points of generation 16 and 17 and centred maxima of the shared sweep.
struct DefaultSweep {
    tau: [Vec<f64>; 3],
    points_16: Vec<Vec<f64>>,
    points_17: Vec<Vec<f64>>,
}

pub struct Verifier {
    seed: u64,
    budget: u64,
    sweep: Mutex<Option<Arc<DefaultSweep>>>,
}

fn binary() -> ModelParams {
    ModelParams::new(2, 1.0).expect("k=2, alpha=1 is valid")
}

impl Verifier {
    pub fn new(seed: u64, budget: u64) -> Self {
        Verifier { seed, budget, sweep: Mutex::new(None) }
    }

    pub fn run_suite(&self, suite: Suite) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        for &c in suite.criteria() {
            out.extend(self.criterion(c)?);
        }
        Ok(out)
    }

    pub fn criterion(&self, id: u8) -> Result<Vec<CheckResult>> {
        match id {
            1 => tails_vs_convolution(),
            2 => tails_vs_monte_carlo(self.seed),
            3 => tail_envelope(),
            4 => left_tail(),
            5 => self.gumbel_fit(),
            6 => self.intensity(),
            7 => first_factorial_moment(self.seed),
            8 => engine_equivalence(self.seed, self.budget),
            9 => coverage(self.seed, self.budget),
            10 => concentration(self.seed, self.budget),
            11 => fkg_and_decoupling(self.seed, self.budget),
            12 => determinism(self.seed, self.budget),
            _ => Err(HarnessError::Usage(format!("no criterion {id}"))),
        }
    }

    fn sweep(&self) -> Result<Arc<DefaultSweep>> {
        let mut slot = self.sweep.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = slot.as_ref() {
            return Ok(Arc::clone(s));
        }
        let runs = brw_replicas(&binary(), 17, 2000, self.seed, 0.0, self.budget)?;
        let at = |n: usize| runs.iter().map(|g| g[n].tau).collect::<Vec<f64>>();
        let pts = |n: usize| runs.iter().map(|g| g[n].points_above.clone()).collect::<Vec<_>>();
        let s = Arc::new(DefaultSweep {
            tau: [at(8), at(12), at(16)],
            points_16: pts(16),
            points_17: pts(17),
        });
        *slot = Some(Arc::clone(&s));
        Ok(s)
    }

    fn gumbel_fit(&self) -> Result<Vec<CheckResult>> {
        let s = self.sweep()?;
        let q = binary().q();
        let ks: Vec<f64> = s
            .tau
            .iter()
            .map(|t| ks_gumbel(t, q).map(|r| r.statistic))
            .collect::<std::result::Result<_, _>>()?;
        let inversions = ks.windows(2).filter(|w| w[1] > w[0]).count();
        Ok(vec![
            CheckResult::at_most(5, "ks_n16", ks[2], 0.08),
            CheckResult::at_most(5, "ks_n16_minus_ks_n8", ks[2] - ks[0], 0.01),
            CheckResult::info(5, "ks_n12", ks[1], "trend over n=8,12,16"),
            CheckResult::at_most(5, "ks_trend_inversions", inversions as f64, 1.0),
        ])
    }

    fn intensity(&self) -> Result<Vec<CheckResult>> {
        let s = self.sweep()?;
        let q = binary().q();
        let r = &intensity_profile(&s.points_16, &[(0.0, f64::INFINITY)], q)?[0];
        let corr = neighbor_independence(&s.points_16, &s.points_17)?;
        Ok(vec![
            CheckResult::within(6, "mean_count_n16", r.mean_count, r.expected, 0.05 * r.expected),
            CheckResult::new(
                6,
                "var_over_mean_n16",
                r.var_count / r.mean_count,
                "in [0.8, 1.2]",
                (0.8..=1.2).contains(&(r.var_count / r.mean_count)),
            ),
            CheckResult::at_most(6, "abs_corr_n16_n17", corr.correlation.abs(), 0.1),
        ])
    }
}

// Independent oracle for P(sum_i q^i W_i > t): the sum is split in two
// halves and convolved by double-exponential quadrature, recursively.
const QUAD_TOL: f64 = 1e-13;

fn conv_density(scales: &[f64], x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if let [s] = scales {
        return (-x / s).exp() / s;
    }
    let (a, b) = scales.split_at(scales.len() / 2);
    quadrature::double_exponential::integrate(|y| conv_density(a, y) * conv_density(b, x - y), 0.0, x, QUAD_TOL)
        .integral
}

fn conv_survival(scales: &[f64], t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if let [s] = scales {
        return (-t / s).exp();
    }
    let (a, b) = scales.split_at(scales.len() / 2);
    conv_survival(a, t)
        + quadrature::double_exponential::integrate(|x| conv_density(a, x) * conv_survival(b, t - x), 0.0, t, QUAD_TOL)
            .integral
}

/// `P(K_n > t)` by numerical convolution of the `n + 1` exponential laws.
pub fn convolution_survival(q: f64, n: usize, t: f64) -> f64 {
    let scales: Vec<f64> = (0..=n).map(|i| q.powi(i as i32)).collect();
    conv_survival(&scales, t)
}

fn tails_vs_convolution() -> Result<Vec<CheckResult>> {
    let mut worst: f64 = 0.0;
    for q in [0.3, 0.5, 0.8] {
        for n in 1..=4 {
            for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
                let got = survival_kn(q, n, t)?.value;
                worst = worst.max((got - convolution_survival(q, n, t)).abs());
            }
        }
    }
    Ok(vec![CheckResult::at_most(1, "max_abs_error_vs_convolution", worst, 1e-8)])
}

fn tails_vs_monte_carlo(seed: u64) -> Result<Vec<CheckResult>> {
    let q = 0.5;
    let samples = 1_000_000u64;
    let mut out = Vec::new();
    for n in [5u32, 10] {
        let draws = replicate(samples, seed, |s| kn_sample(q, n, &mut s.rng()));
        for t in [0.5, 1.0, 2.0, 5.0] {
            let exact = survival_kn(q, n as usize, t)?.value;
            let (p, se) = proportion(draws.iter().filter(|&&k| k > t).count() as u64, samples);
            out.push(CheckResult::within(2, format!("survival_n{n}_t{t}"), p, exact, 3.0 * se));
        }
    }
    Ok(out)
}

/// The envelope maximum for one `(q, n)`; `n = None` is the limit law.
pub fn envelope_max(q: f64, n: Option<usize>) -> Result<f64> {
    let phi = match n {
        Some(n) => phi_n(q, n)?,
        None => phi_inf(q, DEFAULT_PHI_TOL)?,
    };
    let mut worst: f64 = 0.0;
    for i in 0..=36 {
        let t = 2.0 + 0.5 * f64::from(i);
        let s = match n {
            Some(n) => survival_kn(q, n, t)?.value,
            None => survival_kinf(q, t, DEFAULT_KINF_TOL)?.value,
        };
        worst = worst.max((s * phi * t.exp() - 1.0).abs() * ((1.0 / q - 1.0) * t).exp());
    }
    Ok(worst)
}

fn tail_envelope() -> Result<Vec<CheckResult>> {
    ENVELOPE_GOLDENS
        .iter()
        .map(|&(q, n, want)| {
            let got = envelope_max(q, n)?;
            let label = n.map_or("inf".to_string(), |n| n.to_string());
            Ok(CheckResult::within(3, format!("envelope_q{q}_n{label}"), got, want, 0.01 * want))
        })
        .collect()
}

/// `P(sum_{i<=n} q^i W_i <= s)` from partial fractions, with `expm1` to
/// keep small `s` accurate.
fn hypoexp_cdf(q: f64, n: usize, s: f64) -> f64 {
    let rates: Vec<f64> = (0..=n).map(|i| q.powi(-(i as i32))).collect();
    rates
        .iter()
        .enumerate()
        .map(|(i, &li)| {
            let c: f64 = rates
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &lj)| lj / (lj - li))
                .product();
            -c * (-li * s).exp_m1()
        })
        .sum()
}

fn left_tail() -> Result<Vec<CheckResult>> {
    let p = binary();
    let mut lo_gap = f64::INFINITY;
    let mut hi_gap = f64::NEG_INFINITY;
    for i in 1..=6 {
        let s = (-5.0 * f64::from(i)).exp();
        let m = critical_m(&p, s)?;
        let gap = simplex_log_bounds(p.q(), m, s)?.1 + left_tail_f(&p, s)?;
        lo_gap = lo_gap.min(gap);
        hi_gap = hi_gap.max(gap);
    }
    let mut violations = 0u32;
    for q in [0.3, 0.5, 0.8] {
        for m in 1..=4 {
            for s in [1e-3, 0.01, 0.05, 0.1, 0.3] {
                let exact = hypoexp_cdf(q, m - 1, s);
                let (lo, hi) = simplex_bounds(q, m, s)?;
                let slack = 1e-8 * hi;
                if !(lo - slack <= exact && exact <= hi + slack) {
                    violations += 1;
                }
            }
        }
    }
    Ok(vec![
        CheckResult::new(4, "min_log_bound_gap", lo_gap, ">= -3", lo_gap >= -3.0),
        CheckResult::new(4, "max_log_bound_gap", hi_gap, "<= 3", hi_gap <= 3.0),
        CheckResult::new(4, "sandwich_violations", f64::from(violations), "0", violations == 0),
    ])
}

fn first_factorial_moment(seed: u64) -> Result<Vec<CheckResult>> {
    let p = binary();
    let n = 3;
    let mut out = Vec::new();
    for t in [-2.0, 0.0, 1.0] {
        let r = factorial_moment_bruteforce(&p, n, &[vec![t]], 100_000, seed)?;
        let exact = 8.0 * survival_kn(p.q(), n as usize, t + 3.0 * p.gamma())?.value;
        out.push(CheckResult::within(7, format!("first_moment_t{t}"), r.estimate, exact, 3.0 * r.std_error));
    }
    Ok(out)
}

fn engine_equivalence(seed: u64, budget: u64) -> Result<Vec<CheckResult>> {
    // {m_t <= n} = {q^{-n} K_n^max > t}.
    let p = binary();
    let reps = 10_000u64;
    let probes: Vec<(u32, f64)> = [6u32, 8]
        .iter()
        .flat_map(|&n| {
            let scale = p.q().powi(-(n as i32));
            [-1.0, 1.0].map(move |d| (n, scale * (p.gamma() * f64::from(n) + d)))
        })
        .collect();
    let t_max = probes.iter().map(|x| x.1).fold(0.0, f64::max);
    let gill = replicate(reps, seed, |s| {
        gillespie_run(&p, t_max, s, budget)
            .map(|run| probes.iter().map(|&(n, t)| run.depths_at(t).0 <= n).collect::<Vec<bool>>())
    })
    .into_iter()
    .collect::<std::result::Result<Vec<_>, _>>()?;
    let brw = kmin_kmax_sweep(&p, 8, reps, seed.wrapping_add(1), budget)?;
    let mut out = Vec::new();
    for (i, &(n, t)) in probes.iter().enumerate() {
        let a = gill.iter().filter(|v| v[i]).count() as u64;
        let scale = p.q().powi(-(n as i32));
        let b = brw.iter().filter(|r| r.n == n && r.k_max * scale > t).count() as u64;
        let (pa, sa) = proportion(a, reps);
        let (pb, sb) = proportion(b, reps);
        let se = (sa * sa + sb * sb).sqrt();
        out.push(CheckResult::within(8, format!("p_mt_le_{n}_at_t{t:.1}"), pa, pb, 3.0 * se));
    }
    Ok(out)
}

fn coverage(seed: u64, budget: u64) -> Result<Vec<CheckResult>> {
    let p = binary();
    let t_end = 12f64.exp();
    let runs = replicate(100, seed, |s| gillespie_run(&p, t_end, s, budget))
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut m_rep = CoverageReport::new(0, 0);
    let mut big_rep = CoverageReport::new(0, 0);
    let (mut interval_hits, mut probes_total) = (0u64, 0u64);
    let probes = geometric_probes(t_end, DEFAULT_BURN_IN, DEFAULT_PROBE_RATIO)?;
    for run in &runs {
        m_rep = m_rep.merge(coverage_m(run, &p, DEFAULT_BURN_IN)?);
        big_rep = big_rep.merge(coverage_M(run, &p, DEFAULT_BURN_IN)?);
        for &t in &probes {
            let w = m_window(&p, t)?;
            let m = i64::from(run.depths_at(t).0);
            probes_total += 1;
            if (w.lo_int..=w.hi_int).contains(&m) {
                interval_hits += 1;
            }
        }
    }
    Ok(vec![
        CheckResult::new(9, "m_window_coverage", m_rep.rate, ">= 0.9", m_rep.rate >= 0.9),
        CheckResult::info(9, "m_interval_coverage", interval_hits as f64 / probes_total as f64, "m_t in [lo_int, hi_int]"),
        CheckResult::info(9, "M_window_coverage", big_rep.rate, "smallest-fragment window"),
    ])
}

fn concentration(seed: u64, budget: u64) -> Result<Vec<CheckResult>> {
    let p = binary();
    let n = 20;
    let records: Vec<_> = kmin_kmax_sweep(&p, n, 200, seed, budget)?
        .into_iter()
        .filter(|r| r.n == n)
        .collect();
    let rate = min_concentration(&records, &p, DEFAULT_MIN_SLACK)?.rate;
    let mut last: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| -r.k_min.ln()).collect();
    last.sort_by(f64::total_cmp);
    let mid = last.len() / 2;
    let median = if last.len() % 2 == 0 { 0.5 * (last[mid - 1] + last[mid]) } else { last[mid] };
    Ok(vec![
        CheckResult::within(10, "min_concentration_rate", rate, MIN_CONCENTRATION_GOLDEN, 0.05),
        CheckResult::within(10, "median_neg_log_kmin_n20", median, w_n(&p, n)?, 0.75),
    ])
}

fn fkg_and_decoupling(seed: u64, budget: u64) -> Result<Vec<CheckResult>> {
    let p = binary();
    let reps = 100_000u64;
    let leaves = replicate(reps, seed, |s| -> fragsim_core::Result<Vec<f64>> {
        let mut f = BrwFrames::new(&p, 3, s, budget)?;
        while f.advance() {}
        Ok(f.current().values.clone())
    })
    .into_iter()
    .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for x in [0.5, 1.0] {
        // All eight split times beyond 8x, i.e. every leaf K(v) > x.
        let (joint, se_joint) = proportion(leaves.iter().filter(|v| v.iter().all(|&k| k > x)).count() as u64, reps);
        let marginals: Vec<(f64, f64)> = (0..8)
            .map(|i| proportion(leaves.iter().filter(|v| v[i] > x).count() as u64, reps))
            .collect();
        let product: f64 = marginals.iter().map(|m| m.0).product();
        let rel = marginals.iter().map(|m| (m.1 / m.0).powi(2)).sum::<f64>().sqrt();
        let se = (se_joint.powi(2) + (product * rel).powi(2)).sqrt();
        out.push(CheckResult::new(
            11,
            format!("fkg_all_leaves_x{x}"),
            joint,
            format!(">= {:.6}", product - 3.0 * se),
            joint >= product - 3.0 * se,
        ));
    }
    for x in [0.5, 1.0, 2.0] {
        let (pj, sj) = proportion(leaves.iter().filter(|v| v[0] <= x && v[1] <= x).count() as u64, reps);
        let bound = (1.0 - survival_kn(p.q(), 3, x)?.value) * (1.0 - survival_kn(p.q(), 0, x)?.value);
        out.push(CheckResult::new(
            11,
            format!("sibling_decoupling_x{x}"),
            pj,
            format!("<= {:.6}", bound + 3.0 * sj),
            pj <= bound + 3.0 * sj,
        ));
    }
    Ok(out)
}

/// Byte-identical bodies for every engine on one and on eight workers.
fn determinism(seed: u64, budget: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for engine in [Engine::Brw, Engine::Gillespie, Engine::Spine] {
        let spec = ExperimentSpec {
            k: 2,
            alpha: 1.0,
            engine,
            n_max: (engine != Engine::Gillespie).then_some(8),
            t_end: (engine == Engine::Gillespie).then_some(500.0),
            replicas: 300,
            seed,
            floor: fragsim_core::simulator::DEFAULT_FLOOR,
            out: "determinism.csv".into(),
            points: false,
        };
        let render = |jobs: usize| -> Result<Vec<u8>> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| HarnessError::Usage(e.to_string()))?;
            pool.install(|| {
                let mut buf = Vec::new();
                write_simulation(&spec, budget, &mut buf, None::<Vec<u8>>)?;
                Ok(buf)
            })
        };
        let same = render(1)? == render(8)?;
        out.push(CheckResult::new(12, format!("{}_jobs1_vs_jobs8", engine.name()), f64::from(u8::from(same)), "1", same));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_oracle_matches_two_term_closed_form() {
        // W_0 + W_1 / 2: P(> t) = 2 e^{-t} - e^{-2t}.
        for t in [0.1, 1.0, 3.0] {
            let want = 2.0 * (-t as f64).exp() - (-2.0 * t as f64).exp();
            assert!((convolution_survival(0.5, 1, t) - want).abs() < 1e-12);
        }
        assert_eq!(convolution_survival(0.5, 3, 0.0), 1.0);
    }

    #[test]
    fn suites_parse_and_cover_everything() {
        assert_eq!("tails".parse::<Suite>().unwrap(), Suite::Tails);
        assert!("nope".parse::<Suite>().is_err());
        let mut all: Vec<u8> = [Suite::Tails, Suite::Leftail, Suite::Extremes, Suite::Pointprocess, Suite::Coverage]
            .iter()
            .flat_map(|s| s.criteria().iter().copied())
            .collect();
        all.push(12);
        all.sort();
        assert_eq!(all, Suite::All.criteria());
    }

    #[test]
    fn analytic_criteria_pass() {
        let v = Verifier::new(DEFAULT_VERIFY_SEED, u64::MAX);
        for c in [1, 3, 4] {
            let checks = v.criterion(c).unwrap();
            assert!(all_pass(&checks), "{checks:?}");
        }
    }

    #[test]
    fn display_tags() {
        let c = CheckResult::at_most(1, "x", 2.0, 1.0);
        assert!(c.to_string().starts_with("[FAIL]  1 x"));
        assert!(CheckResult::info(9, "y", 0.5, "z").to_string().starts_with("[INFO]"));
    }
}
