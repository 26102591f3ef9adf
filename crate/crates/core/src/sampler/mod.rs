//! Finite code instances drawn from either ensemble, exact minimum distance,
//! and Monte Carlo statistics of small distances.

mod code;
mod stats;

pub use code::{sample, sample_e1, sample_e2, CheckNode, SampledCode, DEFAULT_K_LIMIT};
pub use stats::{estimate_dmin_stats, trial_seed, wilson_ci_95, DminStats, WilsonIntervals};
