use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gksiegel_core::lift::synthetic_table;
use gksiegel_core::quadratic::global_discriminant;
use gksiegel_core::HalfIntegralMatrix;
use num_bigint::BigInt;

fn gksiegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gksiegel")).args(args).env_remove("GKSIEGEL_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_matrix(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn json_of(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn gk_prints_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path(), "diag139.json", r#"{"n":3,"two_b":[[2,0,0],[0,6,0],[0,0,18]]}"#);
    let o = gksiegel(&["gk", "--prime", "3", "--matrix", &m]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(0,1,2)"));
    let o = gksiegel(&["gk", "--prime", "3", "--matrix", &m, "--json"]);
    let v = json_of(&o);
    assert_eq!(v["a"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["ledger_matches_e_B"], true);
}

#[test]
fn siegel_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path(), "b3.json", r#"{"n":3,"two_b":[[2,0,0],[0,2,0],[0,0,6]]}"#);
    let o = gksiegel(&["siegel", "--prime", "3", "--matrix", &m, "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["equal"], true);
    assert_eq!(v["F"], v["F_egk"]);
    let oracle = json_of(&gksiegel(&["siegel", "--prime", "3", "--matrix", &m, "--method", "oracle", "--level", "2"]));
    assert_eq!(oracle["F"], v["F"]);
    assert_eq!(oracle["S"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path(), "b.json", r#"{"n":2,"two_b":[[2,1],[1,4]]}"#);
    let bad = write_matrix(dir.path(), "bad.json", r#"{"n":2,"two_b":[[2,3],[3,2]]}"#);
    let missing = dir.path().join("missing.json");
    let code = |args: &[&str]| gksiegel(args).status.code();
    assert_eq!(code(&["lift", "coeff", "--form", missing.to_str().unwrap(), "--matrix", &m]), Some(1));
    assert_eq!(code(&["gk", "--prime", "4", "--matrix", &m]), Some(1));
    assert_eq!(code(&["gk", "--prime", "3", "--matrix", &bad]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(
        code(&["siegel", "--prime", "7", "--matrix", &m, "--method", "oracle", "--level", "3", "--budget", "100"]),
        Some(2)
    );
    assert_eq!(code(&["negk", "eval", "--a", "2,1", "--eps", "1,1"]), Some(1));
    assert_eq!(code(&["--version"]), Some(0));
}

#[test]
fn budget_env_var_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path(), "b.json", r#"{"n":2,"two_b":[[2,1],[1,4]]}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_gksiegel"))
        .args(["siegel", "--prime", "7", "--matrix", &m, "--method", "oracle", "--level", "3"])
        .env("GKSIEGEL_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn negk_commands() {
    let o = gksiegel(&["negk", "eval", "--a", "1,1", "--eps", "1,1", "--q", "3", "--x", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["value"], "5/2 + 2/3*sqrt(3)");
    let o = gksiegel(&["negk", "check", "--count", "30", "--max-n", "4", "--max-a", "3", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert!(v["bound_violations"].as_array().unwrap().is_empty());
    assert_eq!(
        stdout(&o),
        stdout(&gksiegel(&["negk", "check", "--count", "30", "--max-n", "4", "--max-a", "3", "--seed", "9"]))
    );
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (d, t) in [(&a, "1"), (&b, "4")] {
        let o = gksiegel(&[
            "--threads",
            t,
            "gen-corpus",
            "--seed",
            "1",
            "--count",
            "10",
            "--n",
            "2",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let files = read_dir_bytes(&a);
    assert_eq!(files.len(), 10);
    assert_eq!(files, read_dir_bytes(&b));
    let mats: Vec<HalfIntegralMatrix> = files
        .iter()
        .map(|(_, bytes)| HalfIntegralMatrix::from_json(std::str::from_utf8(bytes).unwrap()).unwrap())
        .collect();
    assert!(mats.iter().all(HalfIntegralMatrix::is_positive_definite));
    assert!(mats.iter().any(|m| global_discriminant(m).unwrap().f_b > BigInt::from(1)));
    assert_eq!(
        gksiegel(&["gen-corpus", "--seed", "1", "--count", "1", "--n", "5", "--out", a.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn lift_bounds_report() {
    let dir = tempfile::tempdir().unwrap();
    let mats = dir.path().join("mats");
    let o = gksiegel(&[
        "gen-corpus",
        "--seed",
        "5",
        "--count",
        "12",
        "--n",
        "2",
        "--entry-bound",
        "5",
        "--out",
        mats.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let ms: Vec<HalfIntegralMatrix> = read_dir_bytes(&mats)
        .iter()
        .map(|(_, b)| HalfIntegralMatrix::from_json(std::str::from_utf8(b).unwrap()).unwrap())
        .collect();
    let form = dir.path().join("form.json");
    fs::write(&form, synthetic_table(10, 2, &ms).unwrap().to_json()).unwrap();

    let mut reports = Vec::new();
    for t in ["1", "8"] {
        let out = dir.path().join(format!("report{t}.csv"));
        let o = gksiegel(&[
            "--threads",
            t,
            "lift",
            "bounds",
            "--form",
            form.to_str().unwrap(),
            "--matrices",
            mats.to_str().unwrap(),
            "--eps",
            "1/100",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(fs::read_to_string(out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let lines: Vec<&str> = reports[0].lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[0].starts_with("matrix-id,det2B,dB,fB,c,"));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 14));

    let m = mats.join("m0000.json");
    let o = gksiegel(&["lift", "coeff", "--form", form.to_str().unwrap(), "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let c = json_of(&o)["c"].as_str().unwrap().to_string();
    assert!(lines[1].split(',').nth(4) == Some(c.as_str()));
}

#[test]
fn attach_reports_method() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path(), "b.json", r#"{"n":2,"two_b":[[4,2],[2,4]]}"#);
    let o = gksiegel(&["attach", "--prime", "2", "--matrix", &m, "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert!(v["oracle"]["F"].is_array());
    assert!(["forced", "fast-path", "oracle-matched"].contains(&v["method"].as_str().unwrap()));
}
