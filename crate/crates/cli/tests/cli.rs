//! End-to-end tests of the qdx binary: output shapes, exit codes, error
//! records, determinism, config-file precedence.

use std::path::Path;
use std::process::{Command, Output};

fn qdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn footer_value<'a>(csv: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key} = ");
    csv.lines()
        .find(|l| l.starts_with(&prefix))
        .map(|l| &l[prefix.len()..])
}

fn table_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/xxz_nn.csv")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn correlators_polarized_point() {
    let out = qdx(&["correlators", "--lambda", "0", "--gamma", "0.7", "--r", "1"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("kind,lambda,gamma,r,mz,sxx,syy,szz"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    let mz: f64 = rows[0][4].parse().unwrap();
    let sxx: f64 = rows[0][5].parse().unwrap();
    let syy: f64 = rows[0][6].parse().unwrap();
    let szz: f64 = rows[0][7].parse().unwrap();
    assert!((mz + 1.0).abs() < 1e-12);
    assert!(sxx.abs() < 1e-12 && syy.abs() < 1e-12);
    assert!((szz - 1.0).abs() < 1e-12);
}

#[test]
fn correlators_output_round_trips_through_the_table_loader() {
    let out = qdx(&[
        "correlators",
        "--lambda-grid",
        "0.5:0.7:0.1",
        "--gamma",
        "0.7",
        "--r",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let table = qdx_core::load_correlator_table(&text).unwrap();
    assert_eq!(table.len(), 3);
    assert_eq!(table[0].0.kind(), qdx_core::ModelKind::Xy);
    assert_eq!(table[1].0.lambda(), 0.6);
    // values identical to direct library calls
    let quad = qdx_core::QuadratureConfig::default();
    let point = qdx_core::ModelPoint::xy(0.5, 0.7, 1).unwrap();
    let direct = qdx_core::correlator_set(&point, &quad).unwrap();
    assert_eq!(table[0].1.mz, direct.mz);
    assert_eq!(table[0].1.sxx, direct.sxx);
}

#[test]
fn malformed_flag_exits_2_with_no_rows() {
    let out = qdx(&["correlators", "--lambda", "abc", "--gamma", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_str(&out).is_empty());

    // domain validation also exits 2 and emits the one-line record
    let out = qdx(&["correlators", "--lambda", "-1", "--gamma", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_str(&out).is_empty());
    let err = stderr_str(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error code=2 kind=invalid-parameter msg="));
}

#[test]
fn trajectory_bpf_has_kink_near_reference() {
    let out = qdx(&[
        "trajectory",
        "--channel",
        "bpf",
        "--lambda",
        "0.7",
        "--gamma",
        "0.7",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("p,mutual,classical,discord,branch"));
    assert_eq!(data_rows(&text).len(), 1001);
    let p_sc: f64 = footer_value(&text, "p_sc").unwrap().parse().unwrap();
    assert!((p_sc - 0.114).abs() < 0.005, "p_sc = {p_sc}");
    assert_eq!(footer_value(&text, "p_sc_method"), Some("branch-crossing"));
    assert_eq!(footer_value(&text, "classification"), Some("type-ii"));
}

#[test]
fn trajectory_ad_decays_to_zero() {
    let out = qdx(&[
        "trajectory",
        "--channel",
        "ad",
        "--lambda",
        "0.5",
        "--gamma",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows = data_rows(&text);
    let last = rows.last().unwrap();
    for (idx, cell) in last.iter().enumerate().take(4).skip(1) {
        let v: f64 = cell.parse().unwrap();
        assert!(v < 1e-3, "column {idx} = {v}");
    }
    assert_eq!(footer_value(&text, "classification"), Some("type-iii"));
}

#[test]
fn trajectory_pf_has_discord_above_classical_rows() {
    let out = qdx(&[
        "trajectory",
        "--channel",
        "pf",
        "--lambda",
        "0.5",
        "--gamma",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows = data_rows(&text);
    let exceeding = rows
        .iter()
        .filter(|r| {
            let c: f64 = r[2].parse().unwrap();
            let q: f64 = r[3].parse().unwrap();
            q > c
        })
        .count();
    assert!(exceeding > 0);
    assert!(footer_value(&text, "q_exceeds_c").unwrap() != "null");
}

#[test]
fn trajectory_xxz_through_table() {
    let out = qdx(&[
        "trajectory",
        "--model",
        "xxz",
        "--channel",
        "pf",
        "--delta",
        "0.5",
        "--table",
        &table_path(),
        "--p-points",
        "101",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = stdout_str(&out);
    assert_eq!(data_rows(&text).len(), 101);
    let p_sc: f64 = footer_value(&text, "p_sc").unwrap().parse().unwrap();
    assert!(p_sc > 0.0 && p_sc < 1.0);
}

#[test]
fn scan_produces_derivative_column_and_summary() {
    let out = qdx(&[
        "scan",
        "--parameter",
        "lambda",
        "--channel",
        "bpf",
        "--gamma",
        "0.5",
        "--from",
        "0.6",
        "--to",
        "0.7",
        "--step",
        "0.02",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.starts_with("lambda,p_sc,dp_sc_dlambda"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!(!r[1].is_empty(), "p_sc missing in {r:?}");
        assert!(!r[2].is_empty(), "derivative missing in {r:?}");
    }
    assert!(stderr_str(&out).starts_with("scan divergence:"));
}

#[test]
fn exhausted_quadrature_exits_3() {
    let out = qdx(&[
        "correlators",
        "--lambda",
        "0.7",
        "--gamma",
        "0.7",
        "--abs-tol",
        "1e-15",
        "--rel-tol",
        "1e-15",
        "--max-subdivisions",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).starts_with("error code=3 kind=quadrature-failure"));
}

#[test]
fn scan_without_sudden_changes_exits_4() {
    // BF never produces a sudden change at positive anisotropy.
    let out = qdx(&[
        "scan",
        "--parameter",
        "lambda",
        "--channel",
        "bf",
        "--gamma",
        "0.5",
        "--from",
        "0.6",
        "--to",
        "0.7",
        "--step",
        "0.02",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr_str(&out);
    assert!(err.starts_with("error code=4 kind=insufficient-data"));
}

#[test]
fn scan_delta_uses_table_grid_and_respects_regions() {
    let out = qdx(&[
        "scan",
        "--parameter",
        "delta",
        "--channel",
        "pf",
        "--table",
        &table_path(),
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = stdout_str(&out);
    for r in data_rows(&text) {
        let delta: f64 = r[0].parse().unwrap();
        let has_p_sc = !r[1].is_empty();
        assert_eq!(has_p_sc, delta > -1.0 && delta < 1.0, "delta {delta}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "trajectory",
        "--channel",
        "bpf",
        "--lambda",
        "0.7",
        "--gamma",
        "0.7",
        "--p-points",
        "201",
        "--format",
        "json",
    ];
    let a = qdx(&args);
    let b = qdx(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_has_config_rows_footer() {
    let out = qdx(&[
        "correlators",
        "--lambda",
        "0.7",
        "--gamma",
        "0.7",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(doc.get("config").is_some());
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert!(doc.get("footer").is_some());
    let row = &doc["rows"][0];
    let direct = qdx_core::correlator_set(
        &qdx_core::ModelPoint::xy(0.7, 0.7, 1).unwrap(),
        &qdx_core::QuadratureConfig::default(),
    )
    .unwrap();
    assert_eq!(row["mz"].as_f64().unwrap(), direct.mz);
}

#[test]
fn oracle_passes_and_corrupt_negative_control_fails() {
    let out = qdx(&["oracle", "--states", "40", "--discord-states", "8"]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.starts_with("oracle,statistic,value,tolerance,pass"));
    assert_eq!(footer_value(&text, "all_within_tolerance"), Some("true"));

    let out = qdx(&[
        "oracle",
        "--states",
        "40",
        "--discord-states",
        "8",
        "--corrupt",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr_str(&out).contains("kind=oracle-tolerance"));
    let text = stdout_str(&out);
    assert_eq!(footer_value(&text, "all_within_tolerance"), Some("false"));
}

#[test]
fn oracle_seed_variation_stays_within_tolerance() {
    for seed in ["7", "1234"] {
        let out = qdx(&[
            "oracle",
            "--seed",
            seed,
            "--states",
            "30",
            "--discord-states",
            "6",
        ]);
        assert!(out.status.success(), "seed {seed}: {}", stderr_str(&out));
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    std::fs::write(&path, "[correlators]\nlambda = 0.5\ngamma = 0.7\nr = 1\n").unwrap();
    let cfg = path.to_string_lossy().into_owned();

    let from_file = qdx(&["correlators", "--config", &cfg]);
    assert!(from_file.status.success(), "{}", stderr_str(&from_file));
    let rows = data_rows(&stdout_str(&from_file));
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.5);

    let overridden = qdx(&["correlators", "--config", &cfg, "--lambda", "0.8"]);
    let rows = data_rows(&stdout_str(&overridden));
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.8);

    let bad = qdx(&["correlators", "--config", "/nonexistent.toml"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args_file = [
        "correlators",
        "--lambda",
        "0.7",
        "--gamma",
        "0.3",
        "--output",
        path.to_str().unwrap(),
    ];
    let out = qdx(&args_file);
    assert!(out.status.success());
    assert!(stdout_str(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let direct = qdx(&["correlators", "--lambda", "0.7", "--gamma", "0.3"]);
    assert_eq!(written, stdout_str(&direct));
}
