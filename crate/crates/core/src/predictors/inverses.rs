use super::roots::{bisect_increasing, expand_upper};
use crate::{Error, ModelParams, Result};

const REL_TOL: f64 = 1e-15;

/// Smallest argument of `a` and `b`.
const AB_MIN_X: f64 = 2.0;

/// `ln a(x)` with `a(x) = q^{-x}(gamma x - ln(2 ln x))`.
fn ln_a(params: &ModelParams, x: f64) -> f64 {
    x / params.kappa() + (params.gamma() * x - (2.0 * x.ln()).ln()).ln()
}

/// `ln b(x)` with `b(x) = q^{-x}(gamma x + 2 ln x)`.
fn ln_b(params: &ModelParams, x: f64) -> f64 {
    x / params.kappa() + (params.gamma() * x + 2.0 * x.ln()).ln()
}

fn invert_log<F: Fn(f64) -> f64>(ln_f: F, x_min: f64, ln_t: f64) -> Result<f64> {
    let g = |x: f64| ln_f(x) - ln_t;
    let hi = expand_upper(g, 2.0 * x_min.max(1.0))?;
    if g(x_min) >= 0.0 {
        return Ok(x_min);
    }
    bisect_increasing(g, x_min, hi, REL_TOL)
}

fn check_positive_time(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t.ln())
    } else {
        Err(Error::domain("t", format!("must be positive and finite, got {t}")))
    }
}

/// Inverses `(a^{-1}(t), b^{-1}(t))` of the jump-time bounds for the
/// largest fragment, found by bisection on `x >= 2`.
///
/// Both inverses must exist, so `t` must be at least `b(2)` (which exceeds
/// `a(2)`).
pub fn ab_inverses(params: &ModelParams, t: f64) -> Result<(f64, f64)> {
    let ln_t = check_positive_time(t)?;
    let floor = ln_b(params, AB_MIN_X);
    if ln_t < floor {
        return Err(Error::domain(
            "t",
            format!("below the monotone regime: need t >= b(2) = {}", floor.exp()),
        ));
    }
    let a_inv = invert_log(|x| ln_a(params, x), AB_MIN_X, ln_t)?;
    let b_inv = invert_log(|x| ln_b(params, x), AB_MIN_X, ln_t)?;
    Ok((a_inv, b_inv))
}

fn sigma_sign(sigma: i32) -> Result<f64> {
    match sigma {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::domain("sigma", format!("must be +1 or -1, got {sigma}"))),
    }
}

fn p_constant(params: &ModelParams) -> f64 {
    let (kappa, gamma) = (params.kappa(), params.gamma());
    1.0 / (2.0 * kappa) + 0.5 * kappa.ln() - 1.0 + 0.5 * (2.0 * gamma).ln()
}

fn ln_p(params: &ModelParams, x: f64, sign: f64) -> f64 {
    let kappa = params.kappa();
    x / kappa - (2.0 * params.gamma() * x / kappa).sqrt()
        + 0.5 * x.ln()
        + p_constant(params)
        + sign * x.powf(-1.0 / 3.0)
}

/// Start of the regime where `ln p_sigma` is strictly increasing for both
/// signs: each negative derivative term is at most a fraction of `1/kappa`.
fn p_min_x(params: &ModelParams) -> f64 {
    let kappa = params.kappa();
    let alpha = 1.0 / (kappa * params.gamma());
    1f64.max(2.0 / alpha).max((4.0 * kappa / 3.0).powf(0.75))
}

/// Jump-time bound for the smallest fragment,
/// `p_sigma(x) = exp(x/kappa - sqrt(2 gamma x / kappa) + ln(x)/2 + c_hat + sigma x^{-1/3})`
/// with `c_hat = 1/(2 kappa) + ln(kappa)/2 - 1 + ln(2 gamma)/2`.
pub fn p_sigma(params: &ModelParams, x: f64, sigma: i32) -> Result<f64> {
    let sign = sigma_sign(sigma)?;
    if !(x > 0.0) {
        return Err(Error::domain("x", format!("must be positive, got {x}")));
    }
    Ok(ln_p(params, x, sign).exp())
}

/// Inverse of [`p_sigma`] by bisection inside its monotone regime.
pub fn p_sigma_inverse(params: &ModelParams, t: f64, sigma: i32) -> Result<f64> {
    let sign = sigma_sign(sigma)?;
    let ln_t = check_positive_time(t)?;
    let x_min = p_min_x(params);
    let floor = ln_p(params, x_min, sign);
    if ln_t < floor {
        return Err(Error::domain(
            "t",
            format!("below the monotone regime: need t >= {}", floor.exp()),
        ));
    }
    invert_log(|x| ln_p(params, x, sign), x_min, ln_t)
}
