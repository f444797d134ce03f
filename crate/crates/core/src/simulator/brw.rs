use super::seed::{ReplicaRng, SeedSpec};
use super::replicate;
use crate::{Error, ModelParams, Result};

/// Default cap on frame memory: 2 GiB.
pub const DEFAULT_BUDGET_BYTES: u64 = 2 << 30;

/// Default floor for recorded points `J(v) = K(v) - gamma n`.
pub const DEFAULT_FLOOR: f64 = -5.0;

/// Bytes needed to step up to generation `n_max`: the last frame plus the
/// one it is built from, 8 bytes per value.
pub fn frame_bytes(k: u32, n_max: u32) -> Option<u128> {
    let k = u128::from(k);
    let last = k.checked_pow(n_max)?;
    let prev = if n_max == 0 { 0 } else { k.checked_pow(n_max - 1)? };
    last.checked_add(prev)?.checked_mul(8)
}

fn check_budget(k: u32, n_max: u32, budget: u64) -> Result<()> {
    let required = frame_bytes(k, n_max).unwrap_or(u128::MAX);
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Rescaled positions `K(v)` of one full generation. Vertex `i` of
/// generation `n` has children `i k .. i k + k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationFrame {
    pub n: u32,
    pub values: Vec<f64>,
}

/// Per-generation extremes and the points above the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationSummary {
    pub n: u32,
    pub k_min: f64,
    pub k_max: f64,
    /// `k_max - gamma n`.
    pub tau: f64,
    /// `J(v) = K(v) - gamma n` for every vertex with `J(v) >= floor`, in
    /// vertex order.
    pub points_above: Vec<f64>,
}

impl GenerationFrame {
    pub fn summarize(&self, gamma: f64, floor: f64) -> GenerationSummary {
        let shift = gamma * f64::from(self.n);
        let (mut k_min, mut k_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut points_above = Vec::new();
        for &v in &self.values {
            k_min = k_min.min(v);
            k_max = k_max.max(v);
            let j = v - shift;
            if j >= floor {
                points_above.push(j);
            }
        }
        GenerationSummary {
            n: self.n,
            k_min,
            k_max,
            tau: k_max - shift,
            points_above,
        }
    }
}

/// Streams generations of the rescaled walk, holding only the current frame.
///
/// Draw order: the root takes the first exponential; each later generation
/// draws one exponential per child in vertex order.
#[derive(Debug)]
pub struct BrwFrames {
    k: usize,
    q: f64,
    n_max: u32,
    rng: ReplicaRng,
    frame: GenerationFrame,
    scratch: Vec<f64>,
}

impl BrwFrames {
    /// Checks the budget for `n_max` before allocating anything.
    pub fn new(params: &ModelParams, n_max: u32, seed: SeedSpec, budget: u64) -> Result<Self> {
        check_budget(params.k(), n_max, budget)?;
        Ok(Self::with_rng(params, n_max, seed.rng()))
    }

    fn with_rng(params: &ModelParams, n_max: u32, mut rng: ReplicaRng) -> Self {
        let root = rng.exp1();
        BrwFrames {
            k: params.k() as usize,
            q: params.q(),
            n_max,
            rng,
            frame: GenerationFrame {
                n: 0,
                values: vec![root],
            },
            scratch: Vec::new(),
        }
    }

    pub fn current(&self) -> &GenerationFrame {
        &self.frame
    }

    /// Advances to the next generation; returns `false` once `n_max` is
    /// reached.
    pub fn advance(&mut self) -> bool {
        if self.frame.n >= self.n_max {
            return false;
        }
        let (k, q) = (self.k, self.q);
        self.scratch.clear();
        self.scratch.reserve(self.frame.values.len() * k);
        for &parent in &self.frame.values {
            let base = q * parent;
            for _ in 0..k {
                self.scratch.push(base + self.rng.exp1());
            }
        }
        std::mem::swap(&mut self.scratch, &mut self.frame.values);
        self.frame.n += 1;
        true
    }
}

/// One replica: summaries of generations `0..=n_max`.
pub fn brw_sweep(
    params: &ModelParams,
    n_max: u32,
    seed: SeedSpec,
    floor: f64,
    budget: u64,
) -> Result<Vec<GenerationSummary>> {
    let mut frames = BrwFrames::new(params, n_max, seed, budget)?;
    let gamma = params.gamma();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    loop {
        out.push(frames.current().summarize(gamma, floor));
        if !frames.advance() {
            return Ok(out);
        }
    }
}

/// Extremes of one (replica, generation) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremesRecord {
    pub replica: u64,
    pub n: u32,
    pub k_min: f64,
    pub k_max: f64,
    pub tau: f64,
}

/// Runs `replicas` independent sweeps in parallel and returns every
/// summary ordered by replica, then generation.
pub fn brw_replicas(
    params: &ModelParams,
    n_max: u32,
    replicas: u64,
    master_seed: u64,
    floor: f64,
    budget: u64,
) -> Result<Vec<Vec<GenerationSummary>>> {
    check_budget(params.k(), n_max, budget)?;
    replicate(replicas, master_seed, |seed| {
        brw_sweep(params, n_max, seed, floor, budget)
    })
    .into_iter()
    .collect()
}

/// `(k_min, k_max, tau)` for every replica and generation.
pub fn kmin_kmax_sweep(
    params: &ModelParams,
    n_max: u32,
    replicas: u64,
    master_seed: u64,
    budget: u64,
) -> Result<Vec<ExtremesRecord>> {
    let sweeps = brw_replicas(params, n_max, replicas, master_seed, f64::INFINITY, budget)?;
    Ok(sweeps
        .into_iter()
        .enumerate()
        .flat_map(|(r, gens)| {
            gens.into_iter().map(move |g| ExtremesRecord {
                replica: r as u64,
                n: g.n,
                k_min: g.k_min,
                k_max: g.k_max,
                tau: g.tau,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> ModelParams {
        ModelParams::new(2, 1.0).unwrap()
    }

    #[test]
    fn root_frame() {
        let p = binary();
        let s = brw_sweep(&p, 0, SeedSpec::new(5, 0), DEFAULT_FLOOR, DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(s.len(), 1);
        let root = SeedSpec::new(5, 0).rng().exp1();
        assert_eq!(s[0].k_min, root);
        assert_eq!(s[0].k_max, root);
        assert_eq!(s[0].tau, root);
    }

    #[test]
    fn frame_sizes_and_recursion() {
        let p = ModelParams::new(3, 0.7).unwrap();
        let mut f = BrwFrames::new(&p, 5, SeedSpec::new(1, 2), DEFAULT_BUDGET_BYTES).unwrap();
        let mut prev = f.current().clone();
        while f.advance() {
            let cur = f.current();
            assert_eq!(cur.values.len(), 3usize.pow(cur.n));
            for (i, &v) in cur.values.iter().enumerate() {
                assert!(v > 0.0);
                assert!(v - p.q() * prev.values[i / 3] > 0.0);
            }
            prev = cur.clone();
        }
        assert_eq!(prev.n, 5);
    }

    #[test]
    fn summary_invariants() {
        let p = binary();
        let s = brw_sweep(&p, 10, SeedSpec::new(3, 1), -1.0, DEFAULT_BUDGET_BYTES).unwrap();
        for g in &s {
            assert!(g.k_min <= g.k_max);
            assert_eq!(g.tau, g.k_max - p.gamma() * f64::from(g.n));
            assert!(g.points_above.iter().all(|&j| j >= -1.0));
        }
    }

    #[test]
    fn budget_rejected_before_allocation() {
        let p = binary();
        let err = brw_sweep(&p, 40, SeedSpec::new(0, 0), 0.0, DEFAULT_BUDGET_BYTES).unwrap_err();
        match err {
            Error::BudgetExceeded { required, budget } => {
                assert_eq!(required, 8 * ((1u128 << 40) + (1u128 << 39)));
                assert_eq!(budget, DEFAULT_BUDGET_BYTES);
            }
            e => panic!("unexpected {e}"),
        }
        assert!(frame_bytes(2, 27).unwrap() <= u128::from(DEFAULT_BUDGET_BYTES));
        assert!(frame_bytes(2, 28).unwrap() > u128::from(DEFAULT_BUDGET_BYTES));
        assert!(frame_bytes(1000, 200).is_none());
    }

    #[test]
    fn replicas_ordered_and_reproducible() {
        let p = binary();
        let a = kmin_kmax_sweep(&p, 6, 16, 11, DEFAULT_BUDGET_BYTES).unwrap();
        let b = kmin_kmax_sweep(&p, 6, 16, 11, DEFAULT_BUDGET_BYTES).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16 * 7);
        for (i, r) in a.iter().enumerate() {
            assert_eq!(r.replica, (i / 7) as u64);
            assert_eq!(r.n, (i % 7) as u32);
        }
        let single = brw_sweep(&p, 6, SeedSpec::new(11, 5), f64::INFINITY, DEFAULT_BUDGET_BYTES)
            .unwrap();
        assert_eq!(single[6].k_max, a[5 * 7 + 6].k_max);
    }
}
