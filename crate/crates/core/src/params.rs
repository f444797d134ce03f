use crate::{Error, Result};

/// Branching factor and self-similarity index, with the constants derived
/// from them.
///
/// * `q = k^-alpha`, the per-generation contraction of the rescaled walk;
/// * `gamma = ln k`;
/// * `kappa = 1 / (gamma alpha)`, so that `q = exp(-1/kappa)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    k: u32,
    alpha: f64,
    q: f64,
    gamma: f64,
    kappa: f64,
}

impl ModelParams {
    pub fn new(k: u32, alpha: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(
                "k",
                format!("branching factor must be >= 2, got {k}"),
            ));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(
                "alpha",
                format!("self-similarity index must be positive and finite, got {alpha}"),
            ));
        }
        let gamma = f64::from(k).ln();
        let kappa = 1.0 / (gamma * alpha);
        // exp(-alpha ln k) rather than powf so that q == exp(-1/kappa) to the ulp.
        let q = (-alpha * gamma).exp();
        Ok(ModelParams {
            k,
            alpha,
            q,
            gamma,
            kappa,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}
