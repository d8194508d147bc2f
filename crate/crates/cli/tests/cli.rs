use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use torivan::cohomology::CohomologyReport;

fn torivan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torivan"))
        .args(args)
        .env_remove("TORIVAN_CACHE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn dims(v: &Value) -> Vec<u64> {
    v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn coh_examples() {
    let out = torivan(&["coh", "--n", "3", "--points", "1", "--a", "2", "--b", "0"]);
    assert!(out.stderr.is_empty());
    let v = json_of(&out);
    assert_eq!(dims(&v), vec![0, 3, 0, 0]);
    let report = CohomologyReport::from_json(&v).expect("report re-validates");
    assert_eq!(report.contributions.len(), 3);

    let v = json_of(&torivan(&["coh", "--a", "1", "--b", "0"]));
    assert_eq!(dims(&v)[1], 0);

    let v = json_of(&torivan(&["coh", "--a", "0", "--b", "-1"]));
    assert!(dims(&v)[1..].iter().all(|&h| h == 0));
}

#[test]
fn coh_formats() {
    let csv = torivan(&["coh", "--a", "2", "--b", "0", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,m,h0,h1,h2,h3");
    assert_eq!(lines[1], "dims,,0,3,0,0");
    assert_eq!(lines.len(), 5);

    let txt = torivan(&["coh", "--a", "2", "--b", "0", "--format", "text"]);
    assert!(String::from_utf8(txt.stdout).unwrap().contains("h^1 = 3"));
}

#[test]
fn coh_from_divisor_file_with_fan_path() {
    let dir = tempfile::tempdir().unwrap();
    let fan = json_of(&torivan(&["fan", "--n", "3", "--points", "0"]));
    fs::write(dir.path().join("p3.json"), fan["fan"].to_string()).unwrap();
    let divisor = r#"{"fan": "p3.json", "coeffs": {"1": -4}}"#;
    let path = dir.path().join("d.json");
    fs::write(&path, divisor).unwrap();
    let v = json_of(&torivan(&["coh", "--divisor", path.to_str().unwrap()]));
    assert_eq!(dims(&v), vec![0, 0, 0, 1]);
    assert_eq!(v["contributions"][0]["m"], serde_json::json!([3, -1, -1]));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| torivan(args).status.code();
    assert_eq!(code(&["coh", "--a", "1,2", "--b", "0"]), Some(2));
    assert_eq!(code(&["coh", "--n", "2", "--a", "1", "--b", "0"]), Some(2));
    assert_eq!(code(&["coh", "--a", "1"]), Some(2));
    assert_eq!(
        code(&["coh", "--a", "1", "--b", "0", "--format", "xml"]),
        Some(2)
    );
    assert_eq!(
        code(&["verify", "--a-range", "3..1", "--b-range", "0..1"]),
        Some(2)
    );
    assert_eq!(
        code(&["verify", "--a-range", "x", "--b-range", "0..1"]),
        Some(2)
    );
    assert_eq!(code(&["frobnicate"]), Some(2));

    let out = torivan(&["coh", "--a", "2", "--b", "0", "--cap", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn positivity_examples() {
    let v = json_of(&torivan(&[
        "positivity",
        "--a",
        "1",
        "--b",
        "2",
        "--closed-form",
    ]));
    assert_eq!(v["nef"], true);
    assert_eq!(v["ample"], true);
    assert_eq!(v["closed_form"]["agree"], true);

    let v = json_of(&torivan(&[
        "positivity",
        "--a",
        "2",
        "--b",
        "1",
        "--closed-form",
    ]));
    assert_eq!(v["nef"], false);
    assert!(v["nef_witness"]["wall"].is_object());
    assert_eq!(v["closed_form"]["agree"], true);

    let v = json_of(&torivan(&["positivity", "--a", "0", "--b", "0"]));
    assert_eq!(
        (v["nef"].as_bool(), v["ample"].as_bool()),
        (Some(true), Some(false))
    );

    assert_eq!(
        torivan(&[
            "positivity",
            "--points",
            "2",
            "--a",
            "1,1",
            "--b",
            "3",
            "--closed-form"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn verify_reports_and_strict_mode() {
    let v = json_of(&torivan(&[
        "verify",
        "--a-range",
        "-5..5",
        "--b-range",
        "-5..5",
        "--jobs",
        "2",
    ]));
    assert_eq!(v["summary"]["total"], 121);
    assert_eq!(v["summary"]["disagree"], 0);

    let v = json_of(&torivan(&[
        "verify",
        "--points",
        "2",
        "--a-range",
        "-1..1",
        "--b-range",
        "0..2",
    ]));
    assert_eq!(v["summary"]["disagree"], 0);

    let args = [
        "verify",
        "--points",
        "2",
        "--a-range",
        "0..0",
        "--b-range",
        "-4..-1",
    ];
    let out = torivan(&args);
    let v = json_of(&out);
    let rows = v["verdicts"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["agree"].is_boolean()));
    assert!(rows.iter().any(|r| r["agree"] == false));

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(torivan(&strict).status.code(), Some(1));
}

#[test]
fn fan_command() {
    let v = json_of(&torivan(&["fan", "--n", "3", "--points", "2"]));
    assert_eq!(v["fan"]["rays"].as_array().unwrap().len(), 6);
    for check in ["primitive", "smooth", "complete", "intersections"] {
        assert_eq!(v["validation"][check]["ok"], true, "{check}");
    }

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"dim": 2, "rays": [[1,0],[0,1]], "max_cones": [[0,1]]}"#,
    )
    .unwrap();
    let v = json_of(&torivan(&["fan", "--input", bad.to_str().unwrap()]));
    assert_eq!(v["validation"]["complete"]["ok"], false);
}

fn run_cached(cache: &Path, format: &str) -> Vec<u8> {
    let out = torivan(&[
        "coh",
        "--n",
        "3",
        "--points",
        "2",
        "--a",
        "2,1",
        "--b",
        "1",
        "--format",
        format,
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    out.stdout
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv", "text"] {
        let plain = torivan(&[
            "coh", "--n", "3", "--points", "2", "--a", "2,1", "--b", "1", "--format", format,
        ])
        .stdout;
        let first = run_cached(dir.path(), format);
        let second = run_cached(dir.path(), format);
        assert_eq!(plain, first, "{format}");
        assert_eq!(first, second, "{format}");
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn bench_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench",
        "--n",
        "4",
        "--a-range",
        "3..3",
        "--b-range",
        "0..0",
        "--cache",
        dir.path().to_str().unwrap(),
    ];
    let first = json_of(&torivan(&args));
    let rows = first["rows"].as_array().unwrap();
    let (closed, enumerated) = (&rows[0], &rows[1]);
    assert_eq!(closed["pipeline"], "closed_form");
    assert_eq!(closed["characters"], 0);
    assert_eq!(closed["h1"], enumerated["h1"]);
    assert_eq!(enumerated["cache_hit"], false);

    let second = json_of(&torivan(&args));
    let again = &second["rows"][1];
    assert_eq!(again["cache_hit"], true);
    assert_eq!(again["report_sha256"], enumerated["report_sha256"]);

    let grid = json_of(&torivan(&["bench", "--n", "3", "--format", "json"]));
    let rows = grid["rows"].as_array().unwrap();
    for pair in rows.chunks(2) {
        assert_eq!(pair[0]["characters"], 0);
        assert_eq!(pair[0]["h1"], pair[1]["h1"]);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = torivan(&[
        "coh",
        "--a",
        "2",
        "--b",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(dims(&v)[1], 3);
}
