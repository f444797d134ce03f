use super::moments::proportion;
use crate::predictors::{m_window, w_n, M_window, PredictorWindow};
use crate::simulator::{DepthJump, ExtremesRecord, GillespieRun};
use crate::{Error, ModelParams, Result};

/// Default ratio between consecutive probe times.
pub const DEFAULT_PROBE_RATIO: f64 = 1.05;

/// Default burn-in: the first tenth of the horizon is discarded.
pub const DEFAULT_BURN_IN: f64 = 0.1;

/// Default extra slack around `w_n +/- n^{-1/3}`.
pub const DEFAULT_MIN_SLACK: f64 = 0.5;

/// Fraction of probes falling inside a predicted window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub probes: u64,
    pub hits: u64,
    pub rate: f64,
}

impl CoverageReport {
    pub fn new(probes: u64, hits: u64) -> Self {
        CoverageReport {
            probes,
            hits,
            rate: proportion(hits, probes).0,
        }
    }

    pub fn merge(self, other: CoverageReport) -> CoverageReport {
        CoverageReport::new(self.probes + other.probes, self.hits + other.hits)
    }

    /// Binomial standard error of `rate`.
    pub fn std_error(&self) -> f64 {
        proportion(self.hits, self.probes).1
    }
}

/// Probe times `t0 r^j <= t_end` with `t0 = burn_in_fraction * t_end`.
/// The first probe must exceed `e`, where the predictors are defined.
pub fn geometric_probes(t_end: f64, burn_in_fraction: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::domain("burn_in_fraction", format!("must lie in [0, 1), got {burn_in_fraction}")));
    }
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(Error::domain("ratio", format!("must exceed 1, got {ratio}")));
    }
    let t0 = burn_in_fraction * t_end;
    if !(t0 > std::f64::consts::E) || !t_end.is_finite() {
        return Err(Error::domain(
            "t_end",
            format!("horizon {t_end} leaves no probe past the burn-in above e"),
        ));
    }
    let mut probes = Vec::new();
    let mut j = 0;
    loop {
        let t = t0 * ratio.powi(j);
        if t > t_end {
            return Ok(probes);
        }
        probes.push(t);
        j += 1;
    }
}

fn coverage_of<V, W>(probes: &[f64], value_at: V, window: W) -> Result<CoverageReport>
where
    V: Fn(f64) -> i64,
    W: Fn(f64) -> Result<PredictorWindow>,
{
    let mut hits = 0;
    for &t in probes {
        if window(t)?.contains(value_at(t)) {
            hits += 1;
        }
    }
    Ok(CoverageReport::new(probes.len() as u64, hits))
}

fn value_at(trajectory: &[DepthJump], t: f64, pick: fn(&DepthJump) -> u32) -> i64 {
    let idx = trajectory.partition_point(|j| j.time <= t);
    trajectory
        .get(idx.wrapping_sub(1))
        .map_or(0, |j| i64::from(pick(j)))
}

/// Coverage of a `(t, m_t, M_t)` staircase by the largest-fragment window.
pub fn coverage_m_trajectory(
    trajectory: &[DepthJump],
    t_end: f64,
    params: &ModelParams,
    burn_in_fraction: f64,
    ratio: f64,
) -> Result<CoverageReport> {
    let probes = geometric_probes(t_end, burn_in_fraction, ratio)?;
    coverage_of(&probes, |t| value_at(trajectory, t, |j| j.m), |t| m_window(params, t))
}

/// Coverage of a `(t, m_t, M_t)` staircase by the smallest-fragment window.
#[allow(non_snake_case)]
pub fn coverage_M_trajectory(
    trajectory: &[DepthJump],
    t_end: f64,
    params: &ModelParams,
    burn_in_fraction: f64,
    ratio: f64,
) -> Result<CoverageReport> {
    let probes = geometric_probes(t_end, burn_in_fraction, ratio)?;
    coverage_of(&probes, |t| value_at(trajectory, t, |j| j.M), |t| M_window(params, t))
}

/// [`coverage_m_trajectory`] for one event-driven run, default probe ratio.
pub fn coverage_m(run: &GillespieRun, params: &ModelParams, burn_in_fraction: f64) -> Result<CoverageReport> {
    coverage_m_trajectory(&run.trajectory, run.t_end, params, burn_in_fraction, DEFAULT_PROBE_RATIO)
}

/// [`coverage_M_trajectory`] for one event-driven run, default probe ratio.
#[allow(non_snake_case)]
pub fn coverage_M(run: &GillespieRun, params: &ModelParams, burn_in_fraction: f64) -> Result<CoverageReport> {
    coverage_M_trajectory(&run.trajectory, run.t_end, params, burn_in_fraction, DEFAULT_PROBE_RATIO)
}

/// Fraction of records with `n >= 2` and
/// `-ln K_n^min` in `[w_n - n^{-1/3} - slack, w_n + n^{-1/3} + slack]`.
pub fn min_concentration(
    records: &[ExtremesRecord],
    params: &ModelParams,
    slack: f64,
) -> Result<CoverageReport> {
    if !(slack >= 0.0) {
        return Err(Error::domain("slack", format!("must be >= 0, got {slack}")));
    }
    let mut probes = 0;
    let mut hits = 0;
    for r in records.iter().filter(|r| r.n >= 2) {
        let w = w_n(params, r.n)?;
        let half = f64::from(r.n).powf(-1.0 / 3.0) + slack;
        probes += 1;
        if (-r.k_min.ln() - w).abs() <= half {
            hits += 1;
        }
    }
    Ok(CoverageReport::new(probes, hits))
}
