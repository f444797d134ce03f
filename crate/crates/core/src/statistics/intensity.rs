use super::moments::Moments;
use crate::analytic::{phi_inf, DEFAULT_PHI_TOL};
use crate::{Error, Result};

/// Count statistics of points falling in `[lo, hi)` across replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalCountReport {
    pub interval: (f64, f64),
    pub mean_count: f64,
    pub var_count: f64,
    /// Poisson limit `(e^{-lo} - e^{-hi}) / phi_inf(q)`.
    pub expected: f64,
    /// Standard error of `mean_count`.
    pub std_error: f64,
    /// `|var/mean - 1|`; infinite when the mean is zero.
    pub dispersion_gap: f64,
}

/// Limit intensity mass of `[lo, hi)`: `integral e^{-s} ds / phi_inf(q)`.
pub fn expected_count(q: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi})")));
    }
    let phi = phi_inf(q, DEFAULT_PHI_TOL)?;
    let upper = if hi == f64::INFINITY { 0.0 } else { (-hi).exp() };
    Ok(((-lo).exp() - upper) / phi)
}

/// Per-interval counts over replicas. `point_samples[r]` holds the J-values
/// of replica `r`; intervals are half-open `[lo, hi)`.
pub fn intensity_profile(
    point_samples: &[Vec<f64>],
    grid: &[(f64, f64)],
    q: f64,
) -> Result<Vec<IntervalCountReport>> {
    if point_samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    grid.iter()
        .map(|&(lo, hi)| {
            let expected = expected_count(q, lo, hi)?;
            let m: Moments = point_samples
                .iter()
                .map(|pts| pts.iter().filter(|&&j| j >= lo && j < hi).count() as f64)
                .collect();
            let (mean, var) = (m.mean(), m.variance());
            Ok(IntervalCountReport {
                interval: (lo, hi),
                mean_count: mean,
                var_count: var,
                expected,
                std_error: m.std_error(),
                dispersion_gap: if mean > 0.0 {
                    (var / mean - 1.0).abs()
                } else {
                    f64::INFINITY
                },
            })
        })
        .collect()
}
