use super::qseries::{phi_inf, DEFAULT_PHI_TOL};
use crate::{Error, Result};

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Limit law of the centred maximum `tau_n`: `exp(-e^-s / phi_inf(q))`.
pub fn gumbel_limit_cdf(q: f64, s: f64) -> Result<f64> {
    let phi = phi_inf(q, DEFAULT_PHI_TOL)?;
    Ok((-(-s).exp() / phi).exp())
}

/// Inverse of [`gumbel_limit_cdf`] on `(0, 1)`.
pub fn gumbel_limit_quantile(q: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain("u", format!("must lie in (0, 1), got {u}")));
    }
    let phi = phi_inf(q, DEFAULT_PHI_TOL)?;
    Ok(-(-phi * u.ln()).ln())
}

/// Mean of the limit law, `-ln phi_inf(q) + gamma_E`.
pub fn gumbel_limit_mean(q: f64) -> Result<f64> {
    Ok(-phi_inf(q, DEFAULT_PHI_TOL)?.ln() + EULER_GAMMA)
}
