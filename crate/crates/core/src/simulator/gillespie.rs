use super::seed::{ReplicaRng, SeedSpec};
use crate::predictors::M_window;
use crate::{Error, ModelParams, Result};

/// Per-depth fragment counts. A fragment at depth `d` has mass `k^-d` and
/// splits at rate `q^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthCensus {
    pub time: f64,
    pub counts: Vec<u64>,
    /// Time each depth first became occupied.
    pub first_seen: Vec<Option<f64>>,
    /// Time each depth last became empty; `None` while still occupied or
    /// never reached.
    pub last_seen: Vec<Option<f64>>,
    min_depth: usize,
}

impl DepthCensus {
    fn initial() -> Self {
        DepthCensus {
            time: 0.0,
            counts: vec![1],
            first_seen: vec![Some(0.0)],
            last_seen: vec![None],
            min_depth: 0,
        }
    }

    /// Depth of the largest fragment.
    pub fn m(&self) -> usize {
        self.min_depth
    }

    /// Depth of the smallest fragment.
    #[allow(non_snake_case)]
    pub fn M(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total_fragments(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact check of `sum_d counts[d] k^-d = 1` over the common
    /// denominator `k^M`. `None` when the numerators overflow `u128`.
    pub fn mass_is_conserved(&self, k: u32) -> Option<bool> {
        let k = u128::from(k);
        let top = self.M() as u32;
        let mut total: u128 = 0;
        for (d, &c) in self.counts.iter().enumerate() {
            let weight = k.checked_pow(top - d as u32)?;
            total = total.checked_add(u128::from(c).checked_mul(weight)?)?;
        }
        Some(total == k.checked_pow(top)?)
    }

    fn split(&mut self, depth: usize, k: u64, t: f64) {
        self.time = t;
        self.counts[depth] -= 1;
        if depth + 1 == self.counts.len() {
            self.counts.push(0);
            self.first_seen.push(Some(t));
            self.last_seen.push(None);
        }
        self.counts[depth + 1] += k;
        if self.counts[depth] == 0 {
            self.last_seen[depth] = Some(t);
            if depth == self.min_depth {
                while self.counts[self.min_depth] == 0 {
                    self.min_depth += 1;
                }
            }
        }
    }
}

/// A change of `(m_t, M_t)` at `time`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthJump {
    pub time: f64,
    pub m: u32,
    pub M: u32,
}

/// Outcome of one event-driven run on `[0, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GillespieRun {
    /// Starts with `(0, 0, 0)`; one entry per change of `m_t` or `M_t`.
    pub trajectory: Vec<DepthJump>,
    pub census: DepthCensus,
    pub events: u64,
    pub t_end: f64,
}

impl GillespieRun {
    /// `(m_t, M_t)` at time `t`; the step functions are right-continuous.
    pub fn depths_at(&self, t: f64) -> (u32, u32) {
        let idx = self.trajectory.partition_point(|j| j.time <= t);
        let j = self.trajectory[idx.saturating_sub(1)];
        (j.m, j.M)
    }
}

/// Projected memory of a run to `t_end`: 8 bytes per fragment at the upper
/// end of the smallest-fragment depth window. Horizons too short for the
/// predictor (`t_end <= e`) are always admitted.
pub fn projected_bytes(params: &ModelParams, t_end: f64) -> Result<u128> {
    if t_end <= std::f64::consts::E {
        return Ok(0);
    }
    let hi = M_window(params, t_end)?.hi_int.max(0) as u32;
    Ok(u128::from(params.k())
        .checked_pow(hi)
        .and_then(|c| c.checked_mul(8))
        .unwrap_or(u128::MAX))
}

fn check_horizon(params: &ModelParams, t_end: f64, budget: u64) -> Result<()> {
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::domain("t_end", format!("must be finite and >= 0, got {t_end}")));
    }
    let required = projected_bytes(params, t_end)?;
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Exact event-driven simulation of the depth census up to `t_end`.
pub fn gillespie_run(
    params: &ModelParams,
    t_end: f64,
    seed: SeedSpec,
    budget: u64,
) -> Result<GillespieRun> {
    gillespie_run_observed(params, t_end, seed, budget, |_| {})
}

/// As [`gillespie_run`], calling `observe` after every event.
///
/// Each event draws two uniforms: the first for the exponential waiting
/// time with total rate `R = sum_d counts[d] q^d`, the second to pick the
/// splitting depth with probability `counts[d] q^d / R`.
pub fn gillespie_run_observed<F: FnMut(&DepthCensus)>(
    params: &ModelParams,
    t_end: f64,
    seed: SeedSpec,
    budget: u64,
    observe: F,
) -> Result<GillespieRun> {
    check_horizon(params, t_end, budget)?;
    Ok(simulate(params, t_end, &mut seed.rng(), observe))
}

fn simulate<F: FnMut(&DepthCensus)>(
    params: &ModelParams,
    t_end: f64,
    rng: &mut ReplicaRng,
    mut observe: F,
) -> GillespieRun {
    let k = u64::from(params.k());
    let q = params.q();
    let mut rates = vec![1.0];
    let mut census = DepthCensus::initial();
    let mut trajectory = vec![DepthJump { time: 0.0, m: 0, M: 0 }];
    let mut events = 0u64;
    let mut t = 0.0;
    loop {
        let lo = census.min_depth;
        let total: f64 = census.counts[lo..]
            .iter()
            .zip(&rates[lo..])
            .map(|(&c, &r)| c as f64 * r)
            .sum();
        t += -rng.uniform_open().ln() / total;
        let target = rng.uniform_open() * total;
        if t > t_end {
            break;
        }
        let mut acc = 0.0;
        let mut depth = census.M();
        for (d, (&c, &r)) in census.counts.iter().zip(&rates).enumerate().skip(lo) {
            if c == 0 {
                continue;
            }
            acc += c as f64 * r;
            if target < acc {
                depth = d;
                break;
            }
        }
        // Rounding can leave `target` beyond the final partial sum; the last
        // occupied depth then takes the event.
        while census.counts[depth] == 0 {
            depth -= 1;
        }
        let before = (census.m(), census.M());
        census.split(depth, k, t);
        if rates.len() < census.counts.len() {
            rates.push(rates[rates.len() - 1] * q);
        }
        events += 1;
        if (census.m(), census.M()) != before {
            trajectory.push(DepthJump {
                time: t,
                m: census.m() as u32,
                M: census.M() as u32,
            });
        }
        observe(&census);
    }
    GillespieRun {
        trajectory,
        census,
        events,
        t_end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::brw::DEFAULT_BUDGET_BYTES;

    fn binary() -> ModelParams {
        ModelParams::new(2, 1.0).unwrap()
    }

    #[test]
    fn zero_horizon_is_initial_state() {
        let run = gillespie_run(&binary(), 0.0, SeedSpec::new(1, 0), DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(run.census.counts, vec![1]);
        assert_eq!(run.events, 0);
        assert_eq!(run.trajectory, vec![DepthJump { time: 0.0, m: 0, M: 0 }]);
    }

    #[test]
    fn first_event_is_first_exponential() {
        let seed = SeedSpec::new(77, 3);
        let first = seed.rng().exp1();
        let run = gillespie_run(&binary(), 50.0, seed, DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(run.trajectory[1].time, first);
        assert_eq!((run.trajectory[1].m, run.trajectory[1].M), (1, 1));
    }

    #[test]
    fn mass_conserved_at_every_event() {
        let p = ModelParams::new(3, 0.8).unwrap();
        let mut checked = 0;
        gillespie_run_observed(&p, 400.0, SeedSpec::new(2, 2), DEFAULT_BUDGET_BYTES, |c| {
            assert_eq!(c.mass_is_conserved(3), Some(true));
            assert!(c.counts[c.m()] > 0 && c.counts[c.M()] > 0);
            assert!(c.counts[..c.m()].iter().all(|&x| x == 0));
            checked += 1;
        })
        .unwrap();
        assert!(checked > 100);
    }

    #[test]
    fn trajectory_monotone_and_queryable() {
        let run = gillespie_run(&binary(), 2000.0, SeedSpec::new(4, 0), DEFAULT_BUDGET_BYTES).unwrap();
        for w in run.trajectory.windows(2) {
            assert!(w[0].time <= w[1].time);
            assert!(w[0].m <= w[1].m && w[0].M <= w[1].M);
            assert!((w[0].m, w[0].M) != (w[1].m, w[1].M));
        }
        let last = *run.trajectory.last().unwrap();
        assert_eq!(run.depths_at(last.time), (last.m, last.M));
        assert_eq!(run.depths_at(2000.0), (run.census.m() as u32, run.census.M() as u32));
        assert_eq!(run.depths_at(0.0), (0, 0));
        for (d, seen) in run.census.first_seen.iter().enumerate() {
            let first = seen.unwrap();
            if let Some(gone) = run.census.last_seen[d] {
                assert!(gone >= first);
                assert_eq!(run.census.counts[d], 0);
            } else {
                assert!(run.census.counts[d] > 0);
            }
        }
    }

    #[test]
    fn reproducible() {
        let p = binary();
        let a = gillespie_run(&p, 500.0, SeedSpec::new(8, 1), DEFAULT_BUDGET_BYTES).unwrap();
        let b = gillespie_run(&p, 500.0, SeedSpec::new(8, 1), DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_and_domain() {
        let p = binary();
        assert!(matches!(
            gillespie_run(&p, 1e30, SeedSpec::new(0, 0), DEFAULT_BUDGET_BYTES),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(gillespie_run(&p, -1.0, SeedSpec::new(0, 0), DEFAULT_BUDGET_BYTES).is_err());
        assert!(gillespie_run(&p, f64::NAN, SeedSpec::new(0, 0), DEFAULT_BUDGET_BYTES).is_err());
        assert!(projected_bytes(&p, 12f64.exp()).unwrap() < u128::from(DEFAULT_BUDGET_BYTES));
    }
}
