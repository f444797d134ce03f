use crate::analytic::gumbel_limit_cdf;
use crate::{Error, Result};

/// Minimum sample size for a Gumbel fit.
pub const KS_MIN_SAMPLES: usize = 100;

/// Kolmogorov-Smirnov distance between a sample and a reference law.
#[derive(Debug, Clone, PartialEq)]
pub struct KSReport {
    pub statistic: f64,
    pub sample_size: usize,
    pub reference: String,
}

/// Sup-distance between the empirical CDF of `samples` and `cdf`, evaluated
/// on both sides of every jump.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidInput("NaN in KS sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// KS distance of `tau` samples from the shifted Gumbel limit
/// `exp(-e^{-s} / phi_inf(q))`.
pub fn ks_gumbel(tau_samples: &[f64], q: f64) -> Result<KSReport> {
    if tau_samples.len() < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: KS_MIN_SAMPLES,
            got: tau_samples.len(),
        });
    }
    // Validate q once so the closure below cannot fail.
    gumbel_limit_cdf(q, 0.0)?;
    let statistic = ks_statistic(tau_samples, |s| {
        gumbel_limit_cdf(q, s).expect("q validated above")
    })?;
    Ok(KSReport {
        statistic,
        sample_size: tau_samples.len(),
        reference: format!("gumbel_limit(q={q})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::gumbel_limit_quantile;

    #[test]
    fn constant_sample_is_far() {
        let r = ks_gumbel(&[0.3; 200], 0.5).unwrap();
        assert!(r.statistic >= 0.5 && r.statistic <= 1.0);
    }

    #[test]
    fn exact_quantiles_are_close() {
        let n = 10_000;
        let xs: Vec<f64> = (0..n)
            .map(|i| gumbel_limit_quantile(0.5, (f64::from(i) + 0.5) / f64::from(n)).unwrap())
            .collect();
        let r = ks_gumbel(&xs, 0.5).unwrap();
        assert!(r.statistic <= 0.5 / f64::from(n) + 1e-9);
        assert_eq!(r.sample_size, 10_000);
    }

    #[test]
    fn too_few_and_nan() {
        assert!(matches!(
            ks_gumbel(&[0.0; 99], 0.5),
            Err(Error::TooFewSamples { needed: 100, got: 99 })
        ));
        let mut xs = vec![0.0; 150];
        xs[3] = f64::NAN;
        assert!(ks_gumbel(&xs, 0.5).is_err());
        assert!(ks_gumbel(&[0.0; 150], 1.5).is_err());
    }

    #[test]
    fn uniform_reference() {
        let d = ks_statistic(&[0.5], |x| x).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }
}
