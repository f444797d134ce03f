//! Left tail of `K_n` as `s -> 0`: the simplex sandwich, the critical
//! truncation index `m(s)` and the rate function `F_q(s)`.

use super::check_q;
use crate::{ceil_strict, Error, ModelParams, Result};

/// `ln m!`, summed exactly term by term.
pub fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

fn check_small_s(s: f64) -> Result<f64> {
    // Largest admissible s is 1/e^2, where log log(1/s) = ln 2 > 0.
    let bound = (-2.0f64).exp();
    if s > 0.0 && s <= bound {
        Ok((1.0 / s).ln())
    } else {
        Err(Error::domain(
            "s",
            format!("must lie in (0, 1/e^2], got {s}"),
        ))
    }
}

/// Rate function
///
/// ```text
/// F_q(s) = kappa/2 (L + ln L + 1/(2 kappa) + ln kappa - 1)^2 + (1/2 + kappa) ln L
/// ```
///
/// with `L = ln(1/s)`; `-ln P(K_n <= s)` stays within a constant of it once
/// `n >= m(s)`.
pub fn left_tail_f(params: &ModelParams, s: f64) -> Result<f64> {
    let l = check_small_s(s)?;
    let kappa = params.kappa();
    let ll = l.ln();
    let inner = l + ll + 1.0 / (2.0 * kappa) + kappa.ln() - 1.0;
    Ok(0.5 * kappa * inner * inner + (0.5 + kappa) * ll)
}

/// Sandwich for `P(K_{m-1} <= s)` from integrating over the scaled simplex:
///
/// ```text
/// U = s^m q^{-m(m-1)/2} / m!,   L = U exp(-s q^-m / ((1/q - 1) m))
/// ```
///
/// Both are formed in log space.
pub fn simplex_bounds(q: f64, m: usize, s: f64) -> Result<(f64, f64)> {
    let (ln_lo, ln_hi) = simplex_log_bounds(q, m, s)?;
    Ok((ln_lo.exp(), ln_hi.exp()))
}

/// Natural logarithms of the [`simplex_bounds`] pair; `-inf` at `s = 0`.
pub fn simplex_log_bounds(q: f64, m: usize, s: f64) -> Result<(f64, f64)> {
    check_q(q)?;
    if m == 0 {
        return Err(Error::domain("m", "must be at least 1"));
    }
    if !(s >= 0.0) {
        return Err(Error::domain("s", format!("must be non-negative, got {s}")));
    }
    if s == 0.0 {
        return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let mf = m as f64;
    let ln_q = q.ln();
    let ln_upper = mf * s.ln() - 0.5 * mf * (mf - 1.0) * ln_q - ln_factorial(m);
    let penalty = (s.ln() - mf * ln_q).exp() / ((1.0 / q - 1.0) * mf);
    Ok((ln_upper - penalty, ln_upper))
}

/// `m(s)`, the least integer strictly greater than `kappa (L + ln L)`.
pub fn critical_m(params: &ModelParams, s: f64) -> Result<usize> {
    let l = check_small_s(s)?;
    Ok(ceil_strict(params.kappa() * (l + l.ln())) as usize)
}

/// Stirling form of `ln(s^y q^{-y(y-1)/2} / y!)`:
///
/// ```text
/// f(x, y) = y^2/(2 kappa) - (ln(1/x) - 1 + 1/(2 kappa)) y - (y + 1/2) ln y
/// ```
pub fn stirling_exponent(x: f64, y: f64, kappa: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0 && kappa > 0.0) {
        return Err(Error::domain(
            "stirling_exponent",
            format!("x, y, kappa must be positive, got ({x}, {y}, {kappa})"),
        ));
    }
    Ok(y * y / (2.0 * kappa)
        - ((1.0 / x).ln() - 1.0 + 1.0 / (2.0 * kappa)) * y
        - (y + 0.5) * y.ln())
}
