use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{Ensemble, EnsembleTag};
use crate::error::{GldpcError, Result};

use super::code::sample;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` at 95% confidence.
/// Returns `(0, 1)` when `n = 0`.
pub fn wilson_ci_95(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = Z95 * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    // the endpoints are exactly 0 and 1 at p = 0 and p = 1
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// splitmix64 finaliser.
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of trial `i`, a function of the master seed and `i` only.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    mix64(seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WilsonIntervals {
    /// Interval for `count_le_threshold / (trials - count_over_k_limit)`.
    pub le_threshold: (f64, f64),
    /// Interval for `count_eq_one / trials`.
    pub eq_one: (f64, f64),
}

/// Monte Carlo counts of small minimum distances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DminStats {
    pub ensemble: EnsembleTag,
    pub n: usize,
    pub trials: u64,
    pub threshold_alpha: f64,
    /// `floor(threshold_alpha * N)`.
    pub threshold_weight: usize,
    /// Trials with a nonzero codeword of weight `<= threshold_weight`, among
    /// those whose dimension allowed the check.
    pub count_le_threshold: u64,
    pub count_eq_one: u64,
    /// Trials whose code dimension exceeded `k_limit` and for which the
    /// threshold event could not be decided.
    pub count_over_k_limit: u64,
    pub k_limit: usize,
    pub wilson_ci_95: WilsonIntervals,
    pub seed: u64,
}

impl DminStats {
    pub fn evaluated_trials(&self) -> u64 {
        self.trials - self.count_over_k_limit
    }

    pub fn fraction_le_threshold(&self) -> Option<f64> {
        let n = self.evaluated_trials();
        (n > 0).then(|| self.count_le_threshold as f64 / n as f64)
    }

    pub fn fraction_eq_one(&self) -> f64 {
        self.count_eq_one as f64 / self.trials as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Threshold {
    Hit,
    Miss,
    OverLimit,
}

/// Samples `trials` codes of length `n` and counts `d_min = 1` and
/// `d_min <= floor(alpha N)`. Trial `i` uses [`trial_seed`]`(seed, i)`, so the
/// result does not depend on `threads` (`None` uses the global pool).
pub fn estimate_dmin_stats(
    ensemble: &Ensemble,
    n: usize,
    trials: u64,
    alpha: f64,
    seed: u64,
    k_limit: usize,
    threads: Option<usize>,
) -> Result<DminStats> {
    if trials == 0 {
        return Err(GldpcError::InvalidArgument("trials must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(GldpcError::InvalidArgument(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    ensemble.instance_plan(n)?;
    let threshold_weight = (alpha * n as f64).floor() as usize;

    let run_one = |i: u64| -> Result<(bool, Threshold)> {
        let code = sample(ensemble, n, trial_seed(seed, i))?;
        let eq_one = code.has_weight_one_codeword();
        let le = if threshold_weight == 0 {
            Threshold::Miss
        } else if eq_one {
            Threshold::Hit
        } else {
            match code.has_codeword_of_weight_at_most(threshold_weight, k_limit) {
                Ok(true) => Threshold::Hit,
                Ok(false) => Threshold::Miss,
                Err(GldpcError::DimensionLimit { .. }) => Threshold::OverLimit,
                Err(e) => return Err(e),
            }
        };
        Ok((eq_one, le))
    };
    let run_all = || (0..trials).into_par_iter().map(run_one).collect::<Result<Vec<_>>>();
    let outcomes = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| GldpcError::InvalidArgument(format!("cannot start thread pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };

    let count_eq_one = outcomes.iter().filter(|o| o.0).count() as u64;
    let count_le_threshold = outcomes.iter().filter(|o| o.1 == Threshold::Hit).count() as u64;
    let count_over_k_limit = outcomes.iter().filter(|o| o.1 == Threshold::OverLimit).count() as u64;
    Ok(DminStats {
        ensemble: ensemble.tag(),
        n,
        trials,
        threshold_alpha: alpha,
        threshold_weight,
        count_le_threshold,
        count_eq_one,
        count_over_k_limit,
        k_limit,
        wilson_ci_95: WilsonIntervals {
            le_threshold: wilson_ci_95(count_le_threshold, trials - count_over_k_limit),
            eq_one: wilson_ci_95(count_eq_one, trials),
        },
        seed,
    })
}
