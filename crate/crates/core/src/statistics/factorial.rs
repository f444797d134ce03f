use super::moments::Moments;
use crate::analytic::{phi_inf, DEFAULT_PHI_TOL};
use crate::simulator::{replicate, BrwFrames, SeedSpec};
use crate::{Error, ModelParams, Result};

/// Largest tree (in leaves) enumerated by [`factorial_moment_bruteforce`].
pub const MAX_ENUMERATED_LEAVES: u128 = 4096;

/// Monte Carlo estimate of a joint factorial moment with its limit value.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorialMomentReport {
    pub estimate: f64,
    pub std_error: f64,
    pub replicas: u64,
    /// `prod_{i,j} e^{-t_{i,j}} / phi_inf(q)`.
    pub limit: f64,
}

/// Number of ordered tuples of distinct points `(x_1, .., x_p)` from
/// `points` with `x_j > thresholds[j]`, by explicit enumeration.
pub fn ordered_tuple_count(points: &[f64], thresholds: &[f64]) -> u128 {
    fn rec(points: &[f64], thresholds: &[f64], used: &mut Vec<bool>) -> u128 {
        let Some((&t, rest)) = thresholds.split_first() else {
            return 1;
        };
        if rest.is_empty() {
            return points
                .iter()
                .zip(used.iter())
                .filter(|(&x, &u)| !u && x > t)
                .count() as u128;
        }
        let mut total = 0;
        for i in 0..points.len() {
            if !used[i] && points[i] > t {
                used[i] = true;
                total += rec(points, rest, used);
                used[i] = false;
            }
        }
        total
    }
    rec(points, thresholds, &mut vec![false; points.len()])
}

/// Closed form of [`ordered_tuple_count`]: with thresholds sorted
/// decreasingly the admissible sets are nested, so the count is
/// `prod_r (|A_(r)| - r)`.
pub fn ordered_tuple_count_nested(points: &[f64], thresholds: &[f64]) -> u128 {
    let mut ts = thresholds.to_vec();
    ts.sort_by(|a, b| b.total_cmp(a));
    let mut product: u128 = 1;
    for (r, &t) in ts.iter().enumerate() {
        let size = points.iter().filter(|&&x| x > t).count();
        if size <= r {
            return 0;
        }
        product *= (size - r) as u128;
    }
    product
}

/// Estimates `E[prod_i N_{n+i}^{[p_i]}([t_{i,1}, inf) x .. x [t_{i,p_i}, inf))]`
/// over `replicas` full trees. `thresholds[i]` lists the `p_i` thresholds for
/// generation `n + i`; counts use `J(v) > t`.
pub fn factorial_moment_bruteforce(
    params: &ModelParams,
    n: u32,
    thresholds: &[Vec<f64>],
    replicas: u64,
    master_seed: u64,
) -> Result<FactorialMomentReport> {
    let ell = thresholds.len() as u32;
    let leaves = u128::from(params.k()).checked_pow(n + ell);
    if leaves.is_none_or(|l| l > MAX_ENUMERATED_LEAVES) {
        return Err(Error::InvalidInput(format!(
            "full-tree enumeration needs k^(n+l) <= {MAX_ENUMERATED_LEAVES} (k={}, n={n}, l={ell})",
            params.k()
        )));
    }
    if replicas == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if thresholds.iter().flatten().any(|t| t.is_nan()) {
        return Err(Error::InvalidInput("NaN threshold".into()));
    }
    let phi = phi_inf(params.q(), DEFAULT_PHI_TOL)?;
    let limit: f64 = thresholds.iter().flatten().map(|t| (-t).exp() / phi).product();
    let deepest = n + ell.saturating_sub(1);
    let gamma = params.gamma();

    let per_replica = replicate(replicas, master_seed, |seed: SeedSpec| {
        let mut frames = BrwFrames::new(params, deepest, seed, u64::MAX)?;
        while frames.current().n < n {
            frames.advance();
        }
        let mut value = 1.0;
        for (i, ts) in thresholds.iter().enumerate() {
            if i > 0 {
                frames.advance();
            }
            let frame = frames.current();
            let shift = gamma * f64::from(frame.n);
            let points: Vec<f64> = frame.values.iter().map(|v| v - shift).collect();
            value *= ordered_tuple_count(&points, ts) as f64;
        }
        Ok::<f64, Error>(value)
    });
    let mut m = Moments::new();
    for v in per_replica {
        m.push(v?);
    }
    Ok(FactorialMomentReport {
        estimate: m.mean(),
        std_error: m.std_error(),
        replicas,
        limit,
    })
}
