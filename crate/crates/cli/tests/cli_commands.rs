//! End-to-end checks of the `gldpc` binary: schemas, exit codes, determinism
//! and the spec-file corpus.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gldpc_core::specfile::SpecFile;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_gldpc");

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/specs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli_commands");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gldpc(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("GLDPC_THREADS").output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = gldpc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn analyze(name: &str) -> Value {
    let out = ok(&["analyze", spec(name).to_str().unwrap()]);
    serde_json::from_slice(&out.stdout).unwrap()
}

fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(spec(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    assert!(files.len() >= 6);
    files
}

#[test]
fn analyze_reports_c_and_verdict() {
    let report = analyze("spc3_q2.json");
    assert_eq!(report["mixture"]["C"]["exact"], "2");
    assert_eq!(report["ensemble1"]["alpha_star"]["verdict"], "not_exists_q2_C_ge_1");
    assert!(report["ensemble1"]["alpha_star"]["value"].is_null());
    assert!(report["ensemble2"].is_null());

    let report = analyze("hamming15_q2.json");
    assert_eq!(report["ensemble1"]["design_rate"]["exact"], "7/15");
    let r = report["ensemble1"]["design_rate"]["value"].as_f64().unwrap();
    assert!((r - 0.46667).abs() < 1e-5);
    assert_eq!(report["ensemble1"]["alpha_star"]["verdict"], "exists");

    let report = analyze("spc3_lambda_x.json");
    let p = report["ensemble2"]["prob_dmin_one"]["value"].as_f64().unwrap();
    assert!((p - 0.632_120_558_828_557_7).abs() < 1e-15);
    assert_eq!(report["ensemble2"]["prob_dmin_bound"]["value"]["kind"], "vacuous");
}

#[test]
fn analyze_tags_every_quantity_with_a_formula() {
    let report = analyze("spc3_hamming7_mixed.json");
    for path in [
        &["mixture", "int_rho"][..],
        &["mixture", "gamma"],
        &["mixture", "C"],
        &["ensemble1", "design_rate"],
        &["ensemble1", "alpha_star"],
        &["ensemble2", "lambda_prime_0"],
        &["ensemble2", "prob_dmin_one"],
        &["ensemble2", "prob_dmin_bound"],
    ] {
        let node = path.iter().fold(&report, |v, k| &v[*k]);
        assert!(node["formula"].as_str().is_some_and(|f| !f.is_empty()), "{path:?}");
    }
}

#[test]
fn malformed_rho_is_rejected_with_the_constraint() {
    let out = gldpc(&["analyze", spec("invalid/rho_sums_to_0_9.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rho") && err.contains("must sum to 1"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(gldpc(&["analyze", "/definitely/missing.json"]).status.code(), Some(3));
    let bad_json = scratch("broken.json");
    fs::write(&bad_json, "{\n  \"cn_types\": [\n  oops\n}").unwrap();
    let out = gldpc(&["analyze", bad_json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let sp = spec("hamming_63_31.json");
    let out = gldpc(&["sweep", sp.to_str().unwrap(), "--gamma-grid", "0:1:0.5", "--out", "/definitely/missing/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let out = gldpc(&["sweep", spec("spc3_q2.json").to_str().unwrap(), "--gamma-grid", "0:1:0.5", "--out", scratch("x.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = gldpc(&["sweep", sp.to_str().unwrap(), "--gamma-grid", "1:0:0.5", "--out", scratch("x.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(gldpc(&["frobnicate"]).status.code(), Some(2));

    let out = Command::new(BIN)
        .args(["analyze", spec("spc3_q2.json").to_str().unwrap()])
        .env("GLDPC_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_schema_and_determinism() {
    let sp = spec("hamming_31_15.json");
    let (a, b) = (scratch("sweep_a.csv"), scratch("sweep_b.csv"));
    for path in [&a, &b] {
        ok(&["sweep", sp.to_str().unwrap(), "--gamma-grid", "0:1:0.05", "--out", path.to_str().unwrap()]);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "gamma1,rho1,R,alpha_star,verdict,delta_GV");
    assert_eq!(lines.len(), 22);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6 && l.contains(",exists,")));
    // gamma1 = 1 is Hamming(31) alone: R = 1 - 10/31
    let last: Vec<&str> = lines[21].split(',').collect();
    assert_eq!(last[0], "1");
    assert_eq!(last[2], "0.677419354839");

    // endpoints reproduce the single-type analysis
    let single = analyze("hamming15_q2.json");
    let first: Vec<&str> = lines[1].split(',').collect();
    let alpha: f64 = first[3].parse().unwrap();
    let want = single["ensemble1"]["alpha_star"]["value"].as_f64().unwrap();
    assert!((alpha - want).abs() <= 1e-11 * want.max(1.0) + 5e-13, "{alpha} vs {want}");
    assert_eq!(first[2], "0.466666666667");
}

#[test]
fn lemma1_tables() {
    let sp = spec("spc3_lambda_x.json");
    let out = scratch("lemma1_j1.csv");
    ok(&["lemma1", sp.to_str().unwrap(), "--j", "1", "--n-list", "3,30,300,3000", "--out", out.to_str().unwrap()]);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,m,E,j,exact_coef,limit_value,ratio"));
    assert!(lines.all(|l| l.ends_with(",1")));

    ok(&["lemma1", sp.to_str().unwrap(), "--j", "2", "--n-list", "30,300,3000", "--out", out.to_str().unwrap()]);
    let ratios: Vec<f64> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios, vec![0.95, 0.995, 0.9995]);

    let bad = gldpc(&["lemma1", sp.to_str().unwrap(), "--j", "0", "--n-list", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let q_only = gldpc(&["lemma1", spec("spc3_q2.json").to_str().unwrap(), "--j", "1", "--n-list", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(q_only.status.code(), Some(2));
}

#[test]
fn sample_contracts() {
    let sp = spec("spc3_lambda_x.json");
    let (a, b) = (scratch("sample_a.json"), scratch("sample_b.json"));
    for path in [&a, &b] {
        ok(&["sample", sp.to_str().unwrap(), "--n", "60", "--trials", "100", "--alpha", "0.05", "--seed", "3", "--out", path.to_str().unwrap()]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let stats: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    for key in [
        "trials",
        "threshold_alpha",
        "count_le_threshold",
        "count_eq_one",
        "count_over_k_limit",
        "wilson_ci_95",
        "seed",
        "prob_dmin_one",
        "prob_dmin_bound",
    ] {
        assert!(stats.get(key).is_some(), "missing {key}");
    }
    assert_eq!(stats["trials"], 100);

    // infeasible N names the nearest feasible length
    let out = gldpc(&["sample", sp.to_str().unwrap(), "--n", "100", "--trials", "5", "--alpha", "0", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nearest feasible N is 102"));

    // thresholds above alpha* of the VN-regular ensemble draw a warning
    let out = ok(&["sample", spec("gallager_3_6.json").to_str().unwrap(), "--n", "60", "--trials", "4", "--alpha", "0.1", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let out = ok(&["sample", spec("gallager_3_6.json").to_str().unwrap(), "--n", "60", "--trials", "4", "--alpha", "0.01", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert!(!String::from_utf8_lossy(&out.stderr).contains("warning"));

    // both views present: explicit choice, and a notice when defaulted
    let mixed = spec("spc3_hamming7_mixed.json");
    let out = ok(&["sample", mixed.to_str().unwrap(), "--n", "147", "--trials", "4", "--alpha", "0", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("notice"));
    ok(&["sample", mixed.to_str().unwrap(), "--ensemble", "e1", "--n", "105", "--trials", "4", "--alpha", "0", "--seed", "1", "--out", a.to_str().unwrap()]);
    let stats: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(stats["ensemble"], "E1");
    assert!(stats["prob_dmin_one"].is_null());
}

#[test]
fn corpus_round_trips() {
    for path in corpus() {
        let text = fs::read_to_string(&path).unwrap();
        let parsed = SpecFile::from_json(&text).unwrap();
        let again = SpecFile::from_json(&parsed.to_json_pretty()).unwrap();
        assert_eq!(parsed, again, "{}", path.display());

        let rewritten = scratch(path.file_name().unwrap().to_str().unwrap());
        fs::write(&rewritten, parsed.to_json_pretty()).unwrap();
        let a = ok(&["analyze", path.to_str().unwrap()]).stdout;
        let b = ok(&["analyze", rewritten.to_str().unwrap()]).stdout;
        assert_eq!(a, b, "{}", path.display());
    }
}
