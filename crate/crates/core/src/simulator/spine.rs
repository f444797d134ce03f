use super::seed::{ReplicaRng, SeedSpec};
use crate::ModelParams;

/// Split times `S_0 < S_1 < ... < S_n` of the fragment containing 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinePath {
    pub split_times: Vec<f64>,
}

impl SpinePath {
    /// `q^n S_n`, a draw of `K_n`.
    pub fn rescaled_last(&self, q: f64) -> f64 {
        let n = self.split_times.len() - 1;
        q.powi(n as i32) * self.split_times[n]
    }
}

/// `S_i = sum_{j <= i} q^{-j} W_j` for `i = 0..=n`.
pub fn spine_sample(params: &ModelParams, n: u32, seed: SeedSpec) -> SpinePath {
    spine_sample_with(params.q(), n, &mut seed.rng())
}

/// As [`spine_sample`], drawing from an existing stream.
pub fn spine_sample_with(q: f64, n: u32, rng: &mut ReplicaRng) -> SpinePath {
    let inv_q = 1.0 / q;
    let mut scale = 1.0;
    let mut s = 0.0;
    let mut split_times = Vec::with_capacity(n as usize + 1);
    for _ in 0..=n {
        s += scale * rng.exp1();
        split_times.push(s);
        scale *= inv_q;
    }
    SpinePath { split_times }
}

/// A draw of `K_n` through the perpetuity recursion `K <- q K + W`, which
/// has the same law as `q^n S_n` but avoids large intermediate values.
pub fn kn_sample(q: f64, n: u32, rng: &mut ReplicaRng) -> f64 {
    let mut k = rng.exp1();
    for _ in 0..n {
        k = q * k + rng.exp1();
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_path_is_one_exponential() {
        let p = ModelParams::new(2, 1.0).unwrap();
        let seed = SeedSpec::new(3, 3);
        let path = spine_sample(&p, 0, seed);
        assert_eq!(path.split_times, vec![seed.rng().exp1()]);
    }

    #[test]
    fn strictly_increasing() {
        let p = ModelParams::new(3, 0.5).unwrap();
        for r in 0..100 {
            let path = spine_sample(&p, 12, SeedSpec::new(1, r));
            assert_eq!(path.split_times.len(), 13);
            assert!(path.split_times[0] > 0.0);
            assert!(path.split_times.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn mean_matches_geometric_sum() {
        let p = ModelParams::new(2, 1.0).unwrap();
        let reps = 20_000u64;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for r in 0..reps {
            let s = *spine_sample(&p, 6, SeedSpec::new(10, r)).split_times.last().unwrap();
            sum += s;
            sum2 += s * s;
        }
        let n = reps as f64;
        let mean = sum / n;
        let se = ((sum2 / n - mean * mean) / n).sqrt();
        let expected: f64 = (0..=6).map(|i| 2f64.powi(i)).sum();
        assert!((mean - expected).abs() < 4.0 * se, "{mean} vs {expected} (se {se})");
    }

    #[test]
    fn rescaled_matches_recursion_in_mean() {
        let q = 0.5;
        let mut rng = SeedSpec::new(4, 0).rng();
        let reps = 20_000;
        let m: f64 = (0..reps).map(|_| kn_sample(q, 8, &mut rng)).sum::<f64>() / f64::from(reps);
        let expected: f64 = (0..=8).map(|i| q.powi(i)).sum();
        assert!((m - expected).abs() < 0.05);
    }
}
