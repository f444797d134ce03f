//! Reports that turn simulator output into checks of the limit theorems:
//! Gumbel fit of the centred maximum, Poisson intensity of the extremal
//! points, factorial moments, predictor coverage and cross-generation
//! correlation.

mod correlation;
mod coverage;
mod factorial;
mod intensity;
mod ks;
mod moments;

pub use correlation::{neighbor_independence, pearson, CorrelationReport};
pub use coverage::{
    coverage_M, coverage_M_trajectory, coverage_m, coverage_m_trajectory, geometric_probes,
    min_concentration, CoverageReport, DEFAULT_BURN_IN, DEFAULT_MIN_SLACK, DEFAULT_PROBE_RATIO,
};
pub use factorial::{
    factorial_moment_bruteforce, ordered_tuple_count, ordered_tuple_count_nested,
    FactorialMomentReport, MAX_ENUMERATED_LEAVES,
};
pub use intensity::{expected_count, intensity_profile, IntervalCountReport};
pub use ks::{ks_gumbel, ks_statistic, KSReport, KS_MIN_SAMPLES};
pub use moments::{proportion, Moments};
