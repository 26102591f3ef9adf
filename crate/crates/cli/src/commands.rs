use std::fmt;
use std::fs;
use std::path::Path;

use gldpc_core::bounds::{lemma1_convergence, lemma1_csv, prob_dmin_bound, prob_dmin_one};
use gldpc_core::growth::{alpha_star, parse_gamma_grid, sweep_csv, sweep_two_types, GrowthOptions};
use gldpc_core::sampler::estimate_dmin_stats;
use gldpc_core::specfile::SpecFile;
use gldpc_core::{Ensemble, GldpcError};
use serde_json::{json, Value};

use crate::report;
use crate::EnsembleChoice;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: malformed spec, infeasible N, out-of-range arguments.
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<GldpcError> for CliError {
    fn from(e: GldpcError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn notice(msg: &str) {
    eprintln!("notice: {msg}");
}

fn load_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    SpecFile::from_json(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn analyze(spec_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let text = json_text(&report::analyze(&spec)?);
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sweep(spec_path: &Path, grid: &str, out: &Path) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let e1 = spec
        .ensemble1()?
        .ok_or_else(|| CliError::Validation("sweep needs the VN-regular view: set vn.q".into()))?;
    if spec.vn.lambda.is_some() {
        notice("sweep uses vn.q; vn.lambda is ignored");
    }
    let types = e1.mixture().types();
    if types.len() != 2 {
        return Err(CliError::Validation(format!(
            "sweep needs exactly 2 cn_types, the spec file has {}",
            types.len()
        )));
    }
    notice("sweep varies the node-perspective share gamma1 of cn_types[0]; rho from the spec file is not used");
    let grid = parse_gamma_grid(grid)?;
    let points = sweep_two_types(&types[0], &types[1], e1.q(), &grid, &GrowthOptions::default())?;
    write_file(out, &sweep_csv(&points))
}

fn pick_ensemble(spec: &SpecFile, choice: Option<EnsembleChoice>) -> Result<Ensemble, CliError> {
    let e1 = spec.ensemble1()?;
    let e2 = spec.ensemble2()?;
    match (choice, e1, e2) {
        (Some(EnsembleChoice::E1), Some(s), _) => Ok(Ensemble::One(s)),
        (Some(EnsembleChoice::E2), _, Some(s)) => Ok(Ensemble::Two(s)),
        (Some(EnsembleChoice::E1), None, _) => Err(CliError::Validation("--ensemble e1 needs vn.q in the spec file".into())),
        (Some(EnsembleChoice::E2), _, None) => {
            Err(CliError::Validation("--ensemble e2 needs vn.lambda in the spec file".into()))
        }
        (None, Some(_), Some(s)) => {
            notice("spec has both vn.q and vn.lambda; sampling the lambda ensemble (use --ensemble e1 for the other)");
            Ok(Ensemble::Two(s))
        }
        (None, Some(s), None) => Ok(Ensemble::One(s)),
        (None, None, Some(s)) => Ok(Ensemble::Two(s)),
        (None, None, None) => unreachable!("validated spec files carry q or lambda"),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    spec_path: &Path,
    n: usize,
    trials: u64,
    alpha: f64,
    seed: u64,
    out: &Path,
    choice: Option<EnsembleChoice>,
    k_limit: usize,
) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let ensemble = pick_ensemble(&spec, choice)?;
    ensemble.instance_plan(n)?;

    let mut extra = serde_json::Map::new();
    match &ensemble {
        Ensemble::One(s) => {
            let curve = alpha_star(s, &GrowthOptions::default());
            if let Some(a) = curve.alpha_star.filter(|&a| alpha > a) {
                eprintln!(
                    "warning: alpha = {alpha} exceeds alpha* = {a:.6}; the growth-rate guarantee does not cover this threshold"
                );
            }
            extra.insert("alpha_star".into(), json!(curve.alpha_star));
            extra.insert("alpha_star_verdict".into(), json!(curve.verdict));
            extra.insert("prob_dmin_one".into(), Value::Null);
            extra.insert("prob_dmin_bound".into(), Value::Null);
        }
        Ensemble::Two(s) => {
            extra.insert("prob_dmin_one".into(), json!(prob_dmin_one(s)));
            extra.insert("prob_dmin_bound".into(), json!(prob_dmin_bound(s)));
        }
    }

    let stats = estimate_dmin_stats(&ensemble, n, trials, alpha, seed, k_limit, None)?;
    let mut value = serde_json::to_value(&stats).expect("stats serialize");
    value.as_object_mut().expect("stats are a JSON object").extend(extra);
    write_file(out, &json_text(&value))
}

pub fn lemma1(spec_path: &Path, j: usize, ns: &[usize], out: &Path) -> Result<(), CliError> {
    let spec = load_spec(spec_path)?;
    let e2 = spec
        .ensemble2()?
        .ok_or_else(|| CliError::Validation("lemma1 needs the unstructured view: set vn.lambda".into()))?;
    if spec.vn.q.is_some() {
        notice("lemma1 uses vn.lambda; vn.q is ignored");
    }
    let reports = lemma1_convergence(&e2, j, ns)?;
    write_file(out, &lemma1_csv(&reports))
}
