use crate::{Error, Result};

/// Pearson correlation with its large-sample standard error
/// `sqrt((1 - r^2) / (N - 2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub correlation: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationReport> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "paired samples differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    let correlation = if sxx > 0.0 && syy > 0.0 {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let std_error = if n > 2 {
        ((1.0 - correlation * correlation).max(0.0) / (nf - 2.0)).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(CorrelationReport {
        correlation,
        std_error,
        samples: n,
    })
}

/// Correlation across replicas between the number of points in `[0, inf)`
/// in generation `n` and in generation `n + 1`.
pub fn neighbor_independence(
    points_n: &[Vec<f64>],
    points_next: &[Vec<f64>],
) -> Result<CorrelationReport> {
    let count = |pts: &[Vec<f64>]| -> Vec<f64> {
        pts.iter()
            .map(|p| p.iter().filter(|&&j| j >= 0.0).count() as f64)
            .collect()
    };
    pearson(&count(points_n), &count(points_next))
}
