//! Exact distribution formulas, stochastic engines, extreme-value predictors
//! and limit-law statistics for the k-regular self-similar fragmentation
//! process and its rescaled expanding branching random walk.
//!
//! An interval of size `u` splits into `k` equal pieces at rate `u^alpha`.
//! Fragments of size `k^-n` are the generation-`n` vertices of a `k`-ary
//! tree, and their rescaled split times `K(v) = q^n S(v)` obey the perpetuity
//! recursion `K(child) = q K(parent) + Exp(1)` with `q = k^-alpha`.
//!
//! The crate is organised in four layers:
//!
//! * [`analytic`]: the laws of `K_n`, `K_inf`, the spine chain and the left
//!   tail, all with tracked numerical error.
//! * [`simulator`]: a generation-frame BRW sampler, an event-driven per-depth
//!   fragmentation sampler and a spine sampler, all seeded and reproducible.
//! * [`predictors`]: deterministic windows for the largest and smallest
//!   fragment and the root finders behind them.
//! * [`statistics`]: reports that turn simulator output into checks of the
//!   limit theorems.

pub mod analytic;
mod error;
mod params;
pub mod predictors;
pub mod simulator;
pub mod statistics;

pub use error::{Error, Result};
pub use params::ModelParams;

/// Least integer strictly greater than `x`.
///
/// This is the ceiling convention used by every window in the crate; it
/// differs from [`f64::ceil`] only when `x` is an integer.
pub fn ceil_strict(x: f64) -> i64 {
    x.floor() as i64 + 1
}
