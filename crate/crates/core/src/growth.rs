//! Growth rate of the VN-regular ensemble and its critical relative weight.
//!
//! For relative weight `alpha` the growth rate is
//!
//! ```text
//! G(alpha) = (1 - q) h(alpha) - q alpha ln z + q sum_t (rho_t / s_t) ln A_t(z),
//! f(z)     = sum_t (rho_t / s_t) z A_t'(z) / A_t(z),      z = f^-1(alpha)
//! ```
//!
//! with `h` the binary entropy in nats. `f` is the mean codeword weight under
//! exponential tilting, so it is strictly increasing in `z` and maps
//! `(0, inf)` onto `(0, alpha_max)`. All work is done in `t = ln z`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{ratio_to_f64, CheckNodeType, CnMixture, Ensemble1Spec, Rational};
use crate::error::{GldpcError, Result};
use crate::numfmt::csv_num;
use crate::specfile::parse_rational;

/// Grid and tolerance settings for [`alpha_star`].
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthOptions {
    /// Logarithmically spaced points in `[log_min, log_max]`.
    pub log_points: usize,
    pub log_min: f64,
    pub log_max: f64,
    /// Uniform points strictly inside `(0, alpha_max)`.
    pub uniform_points: usize,
    /// Bisection stops once the bracket on `alpha` is narrower than this.
    pub root_tol: f64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            log_points: 200,
            log_min: 1e-9,
            log_max: 1e-2,
            uniform_points: 2000,
            root_tol: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    /// `G < 0` on `(0, alpha_star)`.
    #[serde(rename = "exists")]
    Exists,
    /// `G >= 0` immediately above zero (the `q = 2`, `C >= 1` regime).
    #[serde(rename = "not_exists_q2_C_ge_1")]
    NotExistsQ2CGe1,
    /// `G` could not be evaluated to a finite value anywhere on the grid.
    #[serde(rename = "no_sign_change_found")]
    NoSignChangeFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exists => "exists",
            Verdict::NotExistsQ2CGe1 => "not_exists_q2_C_ge_1",
            Verdict::NoSignChangeFound => "no_sign_change_found",
        })
    }
}

/// Sampled growth rate together with the located critical ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthCurve {
    pub alphas: Vec<f64>,
    /// `G(alpha)` in nats per symbol.
    pub values: Vec<f64>,
    pub alpha_max: f64,
    pub alpha_star: Option<f64>,
    /// Set when `G < 0` on the whole open domain, in which case
    /// `alpha_star = alpha_max`.
    pub alpha_star_at_domain_edge: bool,
    pub verdict: Verdict,
}

/// Binary entropy in nats.
pub fn binary_entropy_nats(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (-a).ln_1p()
}

/// Binary entropy in bits.
pub fn binary_entropy_bits(a: f64) -> f64 {
    binary_entropy_nats(a) / std::f64::consts::LN_2
}

/// `(f, df/dt)` at `z = e^t`.
fn f_with_slope(mix: &CnMixture, ln_z: f64) -> (f64, f64) {
    mix.types()
        .iter()
        .zip(mix.edge_weights())
        .fold((0.0, 0.0), |(f, slope), (t, w)| {
            let m = t.wef().tilted_moments(ln_z);
            (f + w * m.mean, slope + w * m.variance)
        })
}

/// `f(z) = int_rho sum_t gamma_t z A_t'(z) / A_t(z)`.
pub fn f_eval(mix: &CnMixture, z: f64) -> f64 {
    assert!(z > 0.0, "f_eval requires z > 0, got {z}");
    f_with_slope(mix, z.ln()).0
}

/// `z` with `f(z) = alpha`, for `0 < alpha < alpha_max`.
pub fn f_inverse(mix: &CnMixture, alpha: f64) -> Result<f64> {
    f_inverse_ln(mix, alpha).map(f64::exp)
}

/// `ln f^-1(alpha)`, by Newton's method on `t = ln z` safeguarded with bisection.
pub fn f_inverse_ln(mix: &CnMixture, alpha: f64) -> Result<f64> {
    let alpha_max = mix.alpha_max();
    if !(alpha > 0.0 && alpha < alpha_max) {
        return Err(GldpcError::Domain { alpha, alpha_max });
    }
    let f = |t: f64| f_with_slope(mix, t);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let mut expansions = 0;
    while f(lo).0 >= alpha {
        lo *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(GldpcError::Domain { alpha, alpha_max });
        }
    }
    while f(hi).0 <= alpha {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(GldpcError::Domain { alpha, alpha_max });
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..300 {
        let (value, slope) = f(t);
        let g = value - alpha;
        if g == 0.0 {
            return Ok(t);
        }
        if g < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - g / slope;
        if !(slope > 0.0 && next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let scale = t.abs().max(1.0);
        if (next - t).abs() <= 1e-15 * scale || hi - lo <= 4.0 * f64::EPSILON * scale {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// The growth rate `G(alpha)` in nats per symbol.
///
/// For `alpha_max <= alpha < 1` the minimizing `z` diverges and `G = -inf`.
pub fn g_eval(spec: &Ensemble1Spec, alpha: f64) -> Result<f64> {
    let mix = spec.mixture();
    let alpha_max = mix.alpha_max();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GldpcError::Domain { alpha, alpha_max });
    }
    if alpha >= alpha_max {
        return Ok(f64::NEG_INFINITY);
    }
    let ln_z = f_inverse_ln(mix, alpha)?;
    Ok(g_at(spec, alpha, ln_z))
}

fn g_at(spec: &Ensemble1Spec, alpha: f64, ln_z: f64) -> f64 {
    let q = spec.q() as f64;
    let mix = spec.mixture();
    let log_a: f64 = mix
        .types()
        .iter()
        .zip(mix.edge_weights())
        .map(|(t, w)| w * t.wef().log_eval_ln(ln_z))
        .sum();
    (1.0 - q) * binary_entropy_nats(alpha) - q * alpha * ln_z + q * log_a
}

/// Grid on which [`alpha_star`] samples `G`: log-spaced points near zero
/// merged with a uniform grid over `(0, alpha_max)`.
pub fn growth_grid(alpha_max: f64, opts: &GrowthOptions) -> Vec<f64> {
    let mut grid = Vec::with_capacity(opts.log_points + opts.uniform_points);
    if opts.log_points > 0 {
        let (a, b) = (opts.log_min.log10(), opts.log_max.log10());
        let steps = opts.log_points.saturating_sub(1).max(1) as f64;
        grid.extend(
            (0..opts.log_points)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / steps))
                .filter(|&x| x > 0.0 && x < alpha_max),
        );
    }
    let denom = (opts.uniform_points + 1) as f64;
    grid.extend((1..=opts.uniform_points).map(|i| alpha_max * i as f64 / denom));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid
}

/// Locates the smallest root of `G` in `(0, alpha_max)`: the first sign
/// change from negative to nonnegative on the grid, refined by bisection.
pub fn alpha_star(spec: &Ensemble1Spec, opts: &GrowthOptions) -> GrowthCurve {
    let alpha_max = spec.mixture().alpha_max();
    let alphas = growth_grid(alpha_max, opts);
    let values: Vec<f64> = alphas
        .par_iter()
        .map(|&a| g_eval(spec, a).unwrap_or(f64::NAN))
        .collect();

    let mut curve = GrowthCurve {
        alphas,
        values,
        alpha_max,
        alpha_star: None,
        alpha_star_at_domain_edge: false,
        verdict: Verdict::NoSignChangeFound,
    };
    if curve.values.iter().all(|v| !v.is_finite()) {
        return curve;
    }
    match curve.values.iter().position(|&g| g >= 0.0) {
        Some(0) => curve.verdict = Verdict::NotExistsQ2CGe1,
        Some(i) => {
            let (mut lo, mut hi) = (curve.alphas[i - 1], curve.alphas[i]);
            while hi - lo > opts.root_tol {
                let mid = 0.5 * (lo + hi);
                if g_eval(spec, mid).unwrap_or(f64::NAN) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            curve.alpha_star = Some(0.5 * (lo + hi));
            curve.verdict = Verdict::Exists;
        }
        None => {
            curve.alpha_star = Some(alpha_max);
            curve.alpha_star_at_domain_edge = true;
            curve.verdict = Verdict::Exists;
        }
    }
    curve
}

/// Relative distance `delta` in `(0, 1/2)` with `R = 1 - h2(delta)`.
pub fn gv_relative_distance(rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(GldpcError::RateDomain(rate));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // 1 - h2(delta) decreases from 1 to 0 on [0, 1/2]
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - binary_entropy_bits(mid) > rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One point of a two-type mixture sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(serialize_with = "ser_ratio")]
    pub gamma1: Rational,
    pub rho1: f64,
    pub rate: f64,
    pub alpha_star: Option<f64>,
    pub alpha_star_at_domain_edge: bool,
    pub verdict: Verdict,
    pub delta_gv: Option<f64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// For each node-perspective fraction `gamma1` of `type_a` (the rest being
/// `type_b`), the design rate and critical ratio of the VN-regular ensemble.
/// Results follow the order of `gamma_grid`.
pub fn sweep_two_types(
    type_a: &CheckNodeType,
    type_b: &CheckNodeType,
    q: usize,
    gamma_grid: &[Rational],
    opts: &GrowthOptions,
) -> Result<Vec<SweepPoint>> {
    gamma_grid
        .par_iter()
        .map(|&g1| {
            if g1 < Rational::from_integer(0) || g1 > Rational::from_integer(1) {
                return Err(GldpcError::InvalidArgument(format!(
                    "gamma1 = {g1} is outside [0, 1]"
                )));
            }
            let g2 = Rational::from_integer(1) - g1;
            let (types, gammas): (Vec<_>, Vec<_>) = [(type_a, g1), (type_b, g2)]
                .into_iter()
                .filter(|(_, g)| *g > Rational::from_integer(0))
                .map(|(t, g)| (t.clone(), g))
                .unzip();
            let has_a = g1 > Rational::from_integer(0);
            let mixture = CnMixture::from_gamma(types, gammas)?;
            let rho1 = if has_a { ratio_to_f64(&mixture.rho()[0]) } else { 0.0 };
            let spec = Ensemble1Spec::new(mixture, q)?;
            let rate = spec.design_rate();
            let curve = alpha_star(&spec, opts);
            Ok(SweepPoint {
                gamma1: g1,
                rho1,
                rate,
                alpha_star: curve.alpha_star,
                alpha_star_at_domain_edge: curve.alpha_star_at_domain_edge,
                verdict: curve.verdict,
                delta_gv: gv_relative_distance(rate).ok(),
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "gamma1,rho1,R,alpha_star,verdict,delta_GV";

/// CSV with columns `gamma1,rho1,R,alpha_star,verdict,delta_GV`. Missing
/// values (no root, rate outside (0,1)) are empty fields. `delta_GV` uses
/// the entropy in bits; `alpha_star` comes from the growth rate in nats.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let opt = |v: Option<f64>| v.map(csv_num).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_num(ratio_to_f64(&p.gamma1)),
            csv_num(p.rho1),
            csv_num(p.rate),
            opt(p.alpha_star),
            p.verdict,
            opt(p.delta_gv),
        ));
    }
    out
}

/// Parses `a:b:step` into the exact grid `a, a + step, ..., <= b`.
pub fn parse_gamma_grid(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(GldpcError::InvalidArgument(format!(
            "gamma grid '{text}' must have the form start:stop:step"
        )));
    };
    let (a, b, step) = (parse_rational(a)?, parse_rational(b)?, parse_rational(step)?);
    if step <= Rational::from_integer(0) || b < a {
        return Err(GldpcError::InvalidArgument(format!(
            "gamma grid '{text}' needs step > 0 and start <= stop"
        )));
    }
    let count = ((b - a) / step).floor().to_integer() + 1;
    Ok((0..count)
        .map(|i| a + step * Rational::from_integer(i))
        .collect())
}
