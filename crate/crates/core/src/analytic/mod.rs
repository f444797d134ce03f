//! Exact and asymptotic formulas for the laws of `K_n`, `K_inf`, the spine
//! chain `X_t` and the left-tail rate function.
//!
//! Everything here is a pure function of its arguments. Alternating series
//! are summed with compensation and return a [`TailEval`] carrying an
//! estimate of the accumulated floating-point error.

mod gumbel;
mod left_tail;
mod qseries;
mod tails;

pub use gumbel::{gumbel_limit_cdf, gumbel_limit_mean, gumbel_limit_quantile};
pub use left_tail::{
    critical_m, left_tail_f, ln_factorial, simplex_bounds, simplex_log_bounds, stirling_exponent,
};
pub use qseries::{phi_inf, phi_n, CompensatedSum, DEFAULT_PHI_TOL};
pub use tails::{
    cdf_kn, density_kn, occupancy_xt, survival_kinf, survival_kn, survival_sn,
    CANCELLATION_REL_THRESHOLD, DEFAULT_KINF_TOL,
};

use crate::{Error, Result};

/// A probability (or density) value with an estimate of its absolute
/// numerical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEval {
    pub value: f64,
    pub abs_error: f64,
}

impl TailEval {
    /// Clamps `value` into `[0, 1]`; any clamped excess is folded into the
    /// error so that `value ± abs_error` still covers the raw estimate.
    pub fn new(value: f64, abs_error: f64) -> Self {
        let clamped = value.clamp(0.0, 1.0);
        let abs_error = abs_error.abs() + (value - clamped).abs();
        TailEval {
            value: clamped,
            abs_error,
        }
    }

    pub fn exact(value: f64) -> Self {
        TailEval::new(value, 0.0)
    }

    /// `1 - self`, with the rounding of the subtraction added to the error.
    pub fn complement(self) -> Self {
        TailEval::new(1.0 - self.value, self.abs_error + f64::EPSILON)
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("q", format!("must lie in (0, 1), got {q}")))
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("t", format!("must be non-negative, got {t}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_eval_clamps_and_keeps_error() {
        let e = TailEval::new(1.0 + 1e-12, 1e-13);
        assert_eq!(e.value, 1.0);
        assert!(e.abs_error >= 1e-12);
        let e = TailEval::new(-3e-15, 0.0);
        assert_eq!(e.value, 0.0);
        assert!(e.abs_error > 0.0);
    }
}
