mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stbc_fsd::code::{abba, save_code, SymbolOrdering};
use stbc_fsd::structure::ZeroPattern;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stbc-fsd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn schema(name: &str) -> Value {
    let text = std::fs::read_to_string(manifest(&format!("schemas/{name}"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Resolves `$ref`s to sibling schema files by their last path segment.
struct LocalSchemas;

impl jsonschema::Retrieve for LocalSchemas {
    fn retrieve(
        &self,
        uri: &jsonschema::Uri<String>,
    ) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.path().as_str().rsplit('/').next().unwrap_or_default();
        Ok(schema(name))
    }
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let validator = jsonschema::options()
        .with_retriever(LocalSchemas)
        .build(&schema(schema_name))
        .unwrap();
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

/// Grid lines of a `pattern` ASCII output, without the header.
fn mask(text: &str) -> ZeroPattern {
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    ZeroPattern::from_ascii(&body).unwrap()
}

#[test]
fn analyze_abba_reports_two_groups() {
    let out = run(&["analyze", "--code", "abba"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with(
        "# stbc-fsd analyze code=abba n_t=2 T=2 kappa=2 n_r=2 trials=100 seed=42 q=4"
    ));
    assert!(text.contains("family: g_group"));
    assert!(text.contains("groups (g = 2): {1,2} {3,4}"));
    assert!(text.contains("[HRQF mismatches]\nnone"));
}

#[test]
fn analyze_golden_json_has_bo_params_and_validates() {
    let v = json(&["analyze", "--code", "golden", "--format", "json"]);
    assert_valid("analyze.schema.json", &v);
    let params = &v["report"]["bo"]["params"];
    assert_eq!(params["Gamma"], 2);
    assert_eq!(params["k"], 2);
    assert_eq!(params["gamma"], 2);
    assert_eq!(v["report"]["family"], "block_orthogonal");
}

#[test]
fn bad_code_file_exits_2() {
    let path = manifest("tests/fixtures/bad_code.json");
    let out = run(&["analyze", "--code", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
    let out = run(&["analyze", "--code", "no-such-code.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["analyze", "--code", "abba", "--q", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "--code", "abba", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["decode-sim", "--code", "abba", "--snr", "10:0:20"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn under_determined_exits_3() {
    let out = run(&["analyze", "--code", "silver", "--nr", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn pattern_abba_matches_fixture_and_is_channel_independent() {
    let fixture = ZeroPattern::from_ascii(
        &std::fs::read_to_string(manifest("tests/fixtures/abba.pattern.txt")).unwrap(),
    )
    .unwrap();
    let default = mask(&stdout(&run(&["pattern", "--code", "abba"])));
    let other = mask(&stdout(&run(&[
        "pattern", "--code", "abba", "--nr", "8", "--seed", "7",
    ])));
    assert_eq!(default, fixture);
    assert_eq!(other, fixture);
}

#[test]
fn pattern_silver_predicted_shows_three_masks() {
    let text = stdout(&run(&["pattern", "--code", "silver", "--predicted"]));
    assert!(text.lines().nth(1).unwrap().starts_with("measured"));
    assert!(text.contains("HRQF"));
    assert!(text.contains("predicted vs measured: missing none, extra none"));
    assert!(
        text.contains("HRQF vs measured: missing (5,6) (5,7) (5,8) (6,7) (6,8) (7,8), extra none")
    );
}

#[test]
fn pattern_ascii_and_json_agree() {
    for code in ["abba", "silver", "golden", "golden-canonical"] {
        let ascii = mask(&stdout(&run(&["pattern", "--code", code])));
        let v = json(&["pattern", "--code", code, "--format", "json"]);
        assert_valid("pattern.schema.json", &v["empirical"]);
        assert_eq!(
            ZeroPattern::from_json_value(&v["empirical"]).unwrap(),
            ascii,
            "{code}"
        );
    }
}

#[test]
fn order_search_recovers_scrambled_abba() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scrambled.json");
    let order = SymbolOrdering::from_one_based(&[3, 1, 4, 2]).unwrap();
    save_code(&abba().apply_ordering(&order).unwrap(), &path).unwrap();
    let v = json(&[
        "order-search",
        "--code",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(v["outcome"]["best_exponent"], 5.0);
    assert_valid("report.schema.json", &v["outcome"]["report"]);
}

#[test]
fn order_search_golden_keeps_standard_order() {
    let v = json(&["order-search", "--code", "golden", "--format", "json"]);
    assert_eq!(
        v["outcome"]["ordering"],
        serde_json::json!([1, 2, 3, 4, 5, 6, 7, 8])
    );
    assert_eq!(
        v["outcome"]["best_exponent"],
        v["outcome"]["baseline_exponent"]
    );
}

#[test]
fn order_search_overflow_and_heuristic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.json");
    save_code(&common::random_code(16, 2, 4, 3), &path).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["order-search", "--code", p]).status.code(), Some(4));
    let v = json(&[
        "order-search",
        "--code",
        p,
        "--heuristic",
        "--format",
        "json",
    ]);
    let trace: Vec<f64> = v["outcome"]["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(!trace.is_empty());
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn decode_sim_silver_oracle_agreement() {
    let args = [
        "decode-sim",
        "--code",
        "silver",
        "--q",
        "4",
        "--snr",
        "0:5:20",
        "--trials",
        "1000",
        "--oracle-check",
        "--format",
        "json",
    ];
    let v = json(&args);
    assert_valid("sim-rows.schema.json", &v);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert_eq!(r["oracle_agreement"], 1.0);
        assert_eq!(r["oracle_mismatches"], 0);
    }
}

#[test]
fn decode_sim_is_deterministic_and_noiseless_is_error_free() {
    let args = [
        "decode-sim",
        "--code",
        "golden",
        "--q",
        "2",
        "--snr",
        "300",
        "--trials",
        "200",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(v["rows"][0]["ber"], 0.0);
    assert_eq!(v["rows"][0]["ser"], 0.0);
}

#[test]
fn decode_sim_skips_oversized_oracle_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let out = run(&[
        "decode-sim",
        "--code",
        "golden",
        "--q",
        "6",
        "--snr",
        "10",
        "--trials",
        "20",
        "--oracle-check",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle check skipped"));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("snr_db,ber,ser,mean_nodes,p95_nodes"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn code_file_schema_accepts_saved_builtins() {
    let dir = tempfile::tempdir().unwrap();
    for code in [abba(), stbc_fsd::code::golden()] {
        let path = dir.path().join("c.json");
        save_code(&code, &path).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid("code.schema.json", &v);
    }
}
