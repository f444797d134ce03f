//! Laws of `K_n = sum_{i<=n} q^i W_i`, its limit `K_inf`, the spine split
//! time `S_n = q^-n K_n` (in law) and the birth chain occupancy `P(X_t = n)`.
//!
//! With `a_j = q^{j(j+1)/2} / (phi_j phi_{n-j})`,
//!
//! ```text
//! P(K_n > t) = sum_{j=0..n} (-1)^j a_j exp(-q^-j t)
//! f_n(t)     = sum_{j=0..n} (-1)^j q^-j a_j exp(-q^-j t)
//! ```
//!
//! Each term is evaluated as `exp(log|term|)` so that `q^-j` overflowing and
//! `q^{j(j+1)/2}` underflowing never meet as `inf * 0`.

use super::left_tail::simplex_bounds;
use super::qseries::{ln_phi_table, phi_inf, CompensatedSum, DEFAULT_PHI_TOL};
use super::{check_q, check_t, TailEval};
use crate::{Error, ModelParams, Result};

/// Default truncation tolerance for the `K_inf` series.
pub const DEFAULT_KINF_TOL: f64 = 1e-14;

/// Relative error (against the smaller of the two tails) above which the
/// survival series hands over to the simplex sandwich.
pub const CANCELLATION_REL_THRESHOLD: f64 = 1e-8;

// exp(x) == 0 for x below this.
const EXP_UNDERFLOW: f64 = -746.0;

struct SeriesTerm {
    log_mag: f64,
    rel_err: f64,
}

/// `log |(-1)^j q^{tri} exp(-q^-j t) / (phi_j phi_{n-j})|` and its relative
/// error once exponentiated.
fn series_term(ln_q: f64, ln_t: f64, j: usize, tri: f64, ln_phi_sum: f64) -> SeriesTerm {
    let pow = tri * ln_q;
    let rate_t = if ln_t == f64::NEG_INFINITY {
        0.0
    } else {
        (ln_t - j as f64 * ln_q).exp()
    };
    let log_mag = pow - ln_phi_sum - rate_t;
    let rel_err = f64::EPSILON * (4.0 + pow.abs() + ln_phi_sum.abs() + rate_t);
    SeriesTerm { log_mag, rel_err }
}

fn push_term(sum: &mut CompensatedSum, j: usize, term: SeriesTerm) {
    if term.log_mag < EXP_UNDERFLOW {
        return;
    }
    let mag = term.log_mag.exp();
    let signed = if j % 2 == 0 { mag } else { -mag };
    sum.add_with_error(signed, mag * term.rel_err);
}

fn finite_series(q: f64, n: usize, t: f64, density: bool) -> CompensatedSum {
    let ln_phi = ln_phi_table(q, n);
    let ln_q = q.ln();
    let ln_t = t.ln();
    let mut sum = CompensatedSum::new();
    for j in 0..=n {
        let jf = j as f64;
        let tri = if density {
            jf * (jf - 1.0) / 2.0
        } else {
            jf * (jf + 1.0) / 2.0
        };
        push_term(
            &mut sum,
            j,
            series_term(ln_q, ln_t, j, tri, ln_phi[j] + ln_phi[n - j]),
        );
    }
    sum
}

/// `P(K_n > t)`.
///
/// For small `t` the series reaches its value near 1 through cancellation.
/// When the error estimate relative to the smaller tail exceeds
/// [`CANCELLATION_REL_THRESHOLD`], the simplex sandwich for `P(K_n <= t)`
/// is evaluated as well and whichever carries the smaller error bound wins.
pub fn survival_kn(q: f64, n: usize, t: f64) -> Result<TailEval> {
    check_q(q)?;
    check_t(t)?;
    if t == 0.0 {
        return Ok(TailEval::exact(1.0));
    }
    if t.is_infinite() {
        return Ok(TailEval::exact(0.0));
    }
    let series = finite_series(q, n, t, false);
    let raw = TailEval::new(series.value(), series.error_bound());
    let smaller_tail = raw.value.min(1.0 - raw.value);
    if raw.abs_error <= CANCELLATION_REL_THRESHOLD * smaller_tail {
        return Ok(raw);
    }
    let (lo, hi) = simplex_bounds(q, n + 1, t)?;
    let half_gap = 0.5 * (hi - lo);
    if half_gap < raw.abs_error {
        Ok(TailEval::new(
            1.0 - 0.5 * (lo + hi),
            half_gap + f64::EPSILON,
        ))
    } else {
        Ok(raw)
    }
}

/// `P(K_n <= t)`, computed without the `1 - survival` round-off when the
/// simplex sandwich is the sharper route.
pub fn cdf_kn(q: f64, n: usize, t: f64) -> Result<TailEval> {
    check_q(q)?;
    check_t(t)?;
    if t == 0.0 {
        return Ok(TailEval::exact(0.0));
    }
    let surv = survival_kn(q, n, t)?;
    let (lo, hi) = simplex_bounds(q, n + 1, t)?;
    let half_gap = 0.5 * (hi - lo);
    if half_gap < surv.abs_error + f64::EPSILON {
        Ok(TailEval::new(0.5 * (lo + hi), half_gap))
    } else {
        Ok(surv.complement())
    }
}

/// Density `f_n(t)` of `K_n`.
pub fn density_kn(q: f64, n: usize, t: f64) -> Result<TailEval> {
    check_q(q)?;
    check_t(t)?;
    if t.is_infinite() {
        return Ok(TailEval::exact(0.0));
    }
    if t == 0.0 {
        // f_0(0) = 1; for n >= 1 the density vanishes at the origin.
        return Ok(TailEval::exact(if n == 0 { 1.0 } else { 0.0 }));
    }
    let series = finite_series(q, n, t, true);
    Ok(TailEval::new(series.value(), series.error_bound()))
}

/// `P(K_inf > t)`, truncated once `q^{j(j+1)/2} / phi_j < tol * phi_inf`.
pub fn survival_kinf(q: f64, t: f64, tol: f64) -> Result<TailEval> {
    check_q(q)?;
    check_t(t)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    if t == 0.0 {
        return Ok(TailEval::exact(1.0));
    }
    if t.is_infinite() {
        return Ok(TailEval::exact(0.0));
    }
    let phi = phi_inf(q, DEFAULT_PHI_TOL)?;
    let ln_cut = (tol * phi).ln();
    let ln_q = q.ln();
    let ln_t = t.ln();
    let mut sum = CompensatedSum::new();
    let mut ln_phi_j = 0.0;
    let mut qj = 1.0;
    let mut j = 0usize;
    loop {
        let jf = j as f64;
        let tri = jf * (jf + 1.0) / 2.0;
        if tri * ln_q - ln_phi_j < ln_cut {
            break;
        }
        push_term(&mut sum, j, series_term(ln_q, ln_t, j, tri, ln_phi_j));
        j += 1;
        qj *= q;
        ln_phi_j += (-qj).ln_1p();
    }
    // Remaining coefficients decay super-geometrically past the cut, so the
    // tail is at most twice the first omitted one.
    let value = sum.value() / phi;
    let abs_error = sum.error_bound() / phi + 2.0 * tol + 2.0 * f64::EPSILON * value.abs();
    Ok(TailEval::new(value, abs_error))
}

/// `P(S_n > t)` for the spine split time, via `K_n = q^n S_n` in law.
pub fn survival_sn(params: &ModelParams, n: usize, t: f64) -> Result<TailEval> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(TailEval::exact(1.0));
    }
    // q^n t in log form; q^n alone underflows long before the product does.
    let scaled = (n as f64 * params.q().ln() + t.ln()).exp();
    survival_kn(params.q(), n, scaled)
}

/// `P(X_t = n)`, the chance the fragment containing 0 has size `k^-n` at time
/// `t`: `P(S_n > t) - P(S_{n-1} > t)`.
pub fn occupancy_xt(params: &ModelParams, n: usize, t: f64) -> Result<TailEval> {
    let upper = survival_sn(params, n, t)?;
    if n == 0 {
        return Ok(upper);
    }
    let lower = survival_sn(params, n - 1, t)?;
    Ok(TailEval::new(
        upper.value - lower.value,
        upper.abs_error + lower.abs_error + f64::EPSILON,
    ))
}
