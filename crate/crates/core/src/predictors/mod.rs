//! Deterministic predictors for the depth of the largest (`m_t`) and
//! smallest (`M_t`) fragment, the location of `K_n^min`, and the inverses
//! they are derived from.
//!
//! All inverses are computed by monotone bisection; asymptotic expansions
//! only appear in tests.

mod inverses;
mod jump;
mod roots;

pub use inverses::{ab_inverses, p_sigma, p_sigma_inverse};
pub use jump::{jump_window_convert, JumpBounds, JumpWindow};

use crate::{ceil_strict, Error, ModelParams, Result};

/// Two-integer window `{ceil(center - half_width), ceil(center + half_width)}`
/// (strict ceilings).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorWindow {
    pub lo_int: i64,
    pub hi_int: i64,
    pub center: f64,
    pub half_width: f64,
}

impl PredictorWindow {
    pub fn new(center: f64, half_width: f64) -> Self {
        PredictorWindow {
            lo_int: ceil_strict(center - half_width),
            hi_int: ceil_strict(center + half_width),
            center,
            half_width,
        }
    }

    /// Membership in the two-element set `{lo_int, hi_int}`.
    pub fn contains(&self, value: i64) -> bool {
        value == self.lo_int || value == self.hi_int
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > std::f64::consts::E && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", format!("predictors need e < t < inf, got {t}")))
    }
}

/// `mu_1 = kappa + 2/gamma`.
pub fn mu1(params: &ModelParams) -> f64 {
    params.kappa() + 2.0 / params.gamma()
}

/// `mu_2 = 2 kappa^(2/3)`.
pub fn mu2(params: &ModelParams) -> f64 {
    2.0 * params.kappa().powf(2.0 / 3.0)
}

/// Constant in `h(t)`: `-1/(2 kappa) - ln kappa + gamma - ln(2 gamma)/2 + 1`.
pub fn smallest_fragment_constant(params: &ModelParams) -> f64 {
    let (kappa, gamma) = (params.kappa(), params.gamma());
    -1.0 / (2.0 * kappa) - kappa.ln() + gamma - 0.5 * (2.0 * gamma).ln() + 1.0
}

/// Centre for the largest-fragment depth:
/// `g(t) = kappa (ln t - ln ln t - ln(gamma kappa))`.
pub fn g_of_t(params: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let l = t.ln();
    Ok(params.kappa() * (l - l.ln() - (params.gamma() * params.kappa()).ln()))
}

/// Window for `m_t`: centre `g(t)`, half-width `mu_1 ln ln t / ln t`.
pub fn m_window(params: &ModelParams, t: f64) -> Result<PredictorWindow> {
    let center = g_of_t(params, t)?;
    let l = t.ln();
    Ok(PredictorWindow::new(center, mu1(params) * l.ln() / l))
}

/// Centre for the smallest-fragment depth:
/// `h(t) = kappa (ln t + sqrt(2 gamma ln t) - ln ln t / 2 + c)`.
pub fn h_of_t(params: &ModelParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let l = t.ln();
    let c = smallest_fragment_constant(params);
    Ok(params.kappa() * (l + (2.0 * params.gamma() * l).sqrt() - 0.5 * l.ln() + c))
}

/// Window for `M_t`: centre `h(t)`, half-width `mu_2 / (ln t)^(1/3)`.
#[allow(non_snake_case)]
pub fn M_window(params: &ModelParams, t: f64) -> Result<PredictorWindow> {
    let center = h_of_t(params, t)?;
    Ok(PredictorWindow::new(center, mu2(params) / t.ln().cbrt()))
}

/// Predicted location of `-ln K_n^min`:
///
/// ```text
/// w_n = sqrt(2 gamma n / kappa) - ln n / 2 - 1/(2 kappa) - ln kappa / 2 + 1 - ln(2 gamma) / 2
/// ```
pub fn w_n(params: &ModelParams, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", "w_n needs n >= 1"));
    }
    let (kappa, gamma) = (params.kappa(), params.gamma());
    let nf = f64::from(n);
    Ok((2.0 * gamma * nf / kappa).sqrt() - 0.5 * nf.ln() - 1.0 / (2.0 * kappa) - 0.5 * kappa.ln()
        + 1.0
        - 0.5 * (2.0 * gamma).ln())
}

/// Unique positive root `z_n` of
/// `z + ln z + 1/(2 kappa) + ln kappa - 1 = sqrt(2 gamma n / kappa)`.
///
/// Newton from `z0 = sqrt(2 gamma n / kappa)`, falling back to bisection
/// whenever an iterate leaves `(0, 2 z0)` or fails to shrink the bracket.
pub fn z_solve(params: &ModelParams, n: u32, tol: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", "z_n needs n >= 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    let kappa = params.kappa();
    let rhs = (2.0 * params.gamma() * f64::from(n) / kappa).sqrt();
    let shift = 1.0 / (2.0 * kappa) + kappa.ln() - 1.0;
    let residual = |z: f64| z + z.ln() + shift - rhs;

    let z0 = rhs;
    let mut lo = f64::MIN_POSITIVE;
    let mut hi = roots::expand_upper(residual, 2.0 * z0)?;
    let mut z = z0;
    const MAX_ITER: usize = 100;
    for _ in 0..MAX_ITER {
        let r = residual(z);
        if r.abs() < tol {
            return Ok(z);
        }
        if r < 0.0 {
            lo = lo.max(z);
        } else {
            hi = hi.min(z);
        }
        let step = z - r / (1.0 + 1.0 / z);
        z = if step > lo && step < hi && step > 0.0 && step < 2.0 * z0 {
            step
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NonConvergence {
        what: "z_n Newton iteration",
        iterations: MAX_ITER,
    })
}

/// `s_n^-/+ = exp(-z_n -/+ ln^2(z_n) / z_n)`.
pub fn s_n_bounds(params: &ModelParams, n: u32) -> Result<(f64, f64)> {
    let z = z_solve(params, n, 1e-13)?;
    let spread = z.ln().powi(2) / z;
    Ok(((-z - spread).exp(), (-z + spread).exp()))
}
