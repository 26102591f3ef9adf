//! The `analyze` report. Every derived quantity carries the formula it comes
//! from, as plain text.

use gldpc_core::bounds::{prob_dmin_bound, prob_dmin_one};
use gldpc_core::growth::{alpha_star, gv_relative_distance, GrowthOptions};
use gldpc_core::specfile::SpecFile;
use gldpc_core::{CnMixture, Ensemble1Spec, Ensemble2Spec, Rational};
use serde_json::{json, Value};

use crate::commands::CliError;

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn exact(r: &Rational, formula: &str) -> Value {
    json!({ "exact": r.to_string(), "value": ratio_f64(r), "formula": formula })
}

fn exact_list(rs: &[Rational], formula: &str) -> Value {
    json!({
        "exact": rs.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "value": rs.iter().map(ratio_f64).collect::<Vec<_>>(),
        "formula": formula,
    })
}

fn mixture(mix: &CnMixture) -> Value {
    let types: Vec<Value> = mix
        .types()
        .iter()
        .map(|t| {
            json!({
                "label": t.label(),
                "s": t.length(),
                "k": t.dimension(),
                "r": t.min_distance(),
                "wef": t.wef().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "sampleable": t.parity().is_some(),
            })
        })
        .collect();
    json!({
        "cn_types": types,
        "rho": exact_list(mix.rho(), "edge-perspective fractions rho_t, normalized to sum 1"),
        "int_rho": exact(&mix.int_rho_exact(), "int_rho = sum_t rho_t / s_t"),
        "gamma": exact_list(&mix.gamma_exact(), "gamma_t = rho_t / (s_t * int_rho)"),
        "C": exact(&mix.param_c_exact(), "C = 2 * sum_{t: r_t = 2} rho_t * A2_t / s_t"),
        "alpha_max": {
            "value": mix.alpha_max(),
            "formula": "alpha_max = sum_t (rho_t / s_t) * deg A_t",
        },
    })
}

fn ensemble1(spec: &Ensemble1Spec) -> Value {
    let rate = spec.design_rate_exact();
    let curve = alpha_star(spec, &GrowthOptions::default());
    json!({
        "q": spec.q(),
        "design_rate": exact(&rate, "R = 1 - q * (1 - sum_t rho_t * k_t / s_t)"),
        "alpha_star": {
            "value": curve.alpha_star,
            "verdict": curve.verdict,
            "at_domain_edge": curve.alpha_star_at_domain_edge,
            "formula": "smallest root in (0, alpha_max) of G(alpha) = (1 - q) h(alpha) - q alpha ln z \
                        + q sum_t (rho_t / s_t) ln A_t(z), z = f^-1(alpha), f(z) = sum_t (rho_t / s_t) z A_t'(z) / A_t(z); \
                        for q = 2 it exists iff C < 1",
        },
        "delta_gv": {
            "value": gv_relative_distance(ratio_f64(&rate)).ok(),
            "formula": "R = 1 - h2(delta), h2 in bits",
        },
    })
}

fn ensemble2(spec: &Ensemble2Spec) -> Value {
    let lambda: serde_json::Map<String, Value> = spec
        .lambda()
        .iter()
        .map(|(d, l)| (d.to_string(), json!(l.to_string())))
        .collect();
    let lp0 = spec.lambda_prime_zero_exact();
    let lpc = lp0 * spec.mixture().param_c_exact();
    json!({
        "lambda": lambda,
        "int_lambda": exact(&spec.int_lambda_exact(), "int_lambda = sum_d lambda_d / d"),
        "lambda_prime_0": exact(&lp0, "lambda'(0) = lambda_2"),
        "lambda_prime_0_C": exact(&lpc, "lambda'(0) * C"),
        "prob_dmin_one": {
            "value": prob_dmin_one(spec),
            "formula": "lim Pr(d_min = 1) = 1 - exp(-lambda'(0) C / 2)",
        },
        "prob_dmin_bound": {
            "value": prob_dmin_bound(spec),
            "formula": "Pr(d_min <= alpha* N) <= 1 / sqrt(1 - lambda'(0) C) - 1, vacuous when lambda'(0) C >= 1",
        },
    })
}

pub fn analyze(spec: &SpecFile) -> Result<Value, CliError> {
    let mix = spec.mixture()?;
    Ok(json!({
        "mixture": mixture(&mix),
        "ensemble1": spec.ensemble1()?.as_ref().map(ensemble1),
        "ensemble2": spec.ensemble2()?.as_ref().map(ensemble2),
    }))
}
