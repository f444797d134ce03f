//! Seeded stochastic engines: the generation-frame branching random walk,
//! the event-driven depth census, and the single-spine chain.
//!
//! Every replica owns its stream; parallel helpers return results in
//! replica order so outputs do not depend on scheduling.

mod brw;
mod gillespie;
mod seed;
mod spine;

pub use brw::{
    brw_replicas, brw_sweep, frame_bytes, kmin_kmax_sweep, BrwFrames, ExtremesRecord,
    GenerationFrame, GenerationSummary, DEFAULT_BUDGET_BYTES, DEFAULT_FLOOR,
};
pub use gillespie::{
    gillespie_run, gillespie_run_observed, projected_bytes, DepthCensus, DepthJump, GillespieRun,
};
pub use seed::{mix_seed, ReplicaRng, SeedSpec};
pub use spine::{kn_sample, spine_sample, spine_sample_with, SpinePath};

use rayon::prelude::*;

/// Evaluates `f` for replicas `0..replicas` on the current rayon pool and
/// returns the results in replica order.
pub fn replicate<T, F>(replicas: u64, master_seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(SeedSpec) -> T + Sync,
{
    replicate_range(0..replicas, master_seed, f)
}

/// As [`replicate`] for the replica indices in `range`.
pub fn replicate_range<T, F>(range: std::ops::Range<u64>, master_seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(SeedSpec) -> T + Sync,
{
    range
        .into_par_iter()
        .map(|r| f(SeedSpec::new(master_seed, r)))
        .collect()
}
