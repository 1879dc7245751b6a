use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmk")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(&format!("{key} "))).unwrap_or_else(|| panic!("no {key} in {text}"));
    line[key.len() + 1..].parse().unwrap()
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn mathieu_tables_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m1.json");
    let o = lmk(&["coeffs", "--family", "mathieu", "--m", "1", "--order", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    // The generated second coefficient is -9/128 (see the README).
    assert_eq!(strings(&v["mu"]), ["3/2", "-5/16", "-9/128"]);
    assert_eq!(v["family"], "mathieu");
}

#[test]
fn lame_first_a_column() {
    let o = lmk(&["coeffs", "--family", "lame", "--m", "0", "--k2", "1/2", "--order", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(strings(&v["a"][1]), ["0", "0", "3/64"]);
    let csv = lmk(&["coeffs", "--family", "lame", "--m", "0", "--k2", "1/2", "--order", "1", "--format", "csv"]);
    let text = stdout(&csv);
    assert!(text.starts_with("series,s,power,value\n"));
    assert!(text.contains("a,1,2,3/64\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["coeffs", "--family", "lame", "--m", "0", "--k2", "3/2", "--order", "1"][..],
        &["coeffs", "--family", "lame", "--m", "0", "--k2", "one", "--order", "1"],
        &["coeffs", "--family", "bessel", "--m", "0", "--order", "1"],
        &["coeffs", "--family", "lame", "--m", "0"],
        &["eigen", "--family", "lame", "--m", "0", "--k2", "1/2", "--kappa", "100", "--order", "9"],
        &["eigen", "--family", "lame", "--m", "0", "--kappa", "100", "--order", "1"],
        &["eigen", "--family", "mathieu", "--m", "0", "--kappa", "100", "--order", "1"],
        &["eigen", "--family", "mathieu", "--m", "0", "--h", "-1", "--order", "1"],
        &["uniform", "--family", "mathieu", "--m", "0", "--h", "100", "--terms", "3"],
        &["verify", "everything"],
    ] {
        let o = lmk(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn eigen_examples() {
    let o = lmk(&["eigen", "--family", "mathieu", "--m", "0", "--branch", "a", "--h", "10", "--order", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "series"), -180.25);
    let o = lmk(&["eigen", "--family", "lame", "--m", "0", "--branch", "a", "--k", "0.7071067811865476", "--kappa", "100", "--order", "2"]);
    assert_eq!(code(&o), 0);
    assert!((field(&stdout(&o), "series") - 99.62546875).abs() < 1e-10);
}

#[test]
fn eigen_with_oracle_as_json() {
    let o = lmk(&["eigen", "--family", "lame", "--m", "1", "--branch", "b", "--k2", "1/2", "--kappa", "200", "--order", "3", "--oracle", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let series = v["series"].as_f64().unwrap();
    let oracle = v["oracle"].as_f64().unwrap();
    assert!((series - oracle).abs() < 1e-4, "{series} vs {oracle}");
    assert!((v["difference"].as_f64().unwrap() - (series - oracle)).abs() < 1e-12);
}

#[test]
fn eigen_respects_table_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let p = path.to_str().unwrap();
    let o = lmk(&["coeffs", "--family", "lame", "--m", "2", "--k2", "1/4", "--order", "4", "--out", p]);
    assert_eq!(code(&o), 0);
    let base = ["eigen", "--family", "lame", "--m", "2", "--k2", "1/4", "--kappa", "50", "--tables", p, "--order"];
    let too_far = lmk(&[&base[..], &["9"]].concat());
    assert_eq!(code(&too_far), 2);
    let from_file = lmk(&[&base[..], &["3"]].concat());
    let generated = lmk(&["eigen", "--family", "lame", "--m", "2", "--k2", "1/4", "--kappa", "50", "--order", "3"]);
    assert_eq!(field(&stdout(&from_file), "series"), field(&stdout(&generated), "series"));
    let wrong = lmk(&["eigen", "--family", "lame", "--m", "1", "--k2", "1/4", "--kappa", "50", "--tables", p, "--order", "1"]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn eval_against_oracle() {
    let o = lmk(&["eval", "--family", "mathieu", "--m", "1", "--h", "400", "--order", "2", "--z", "1.5,1.5707963267948966,1.6", "--oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z,t,series,oracle"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r[2] - r[3]).abs() < 1e-3 * r[3].abs().max(1.0), "{r:?}");
    }
    assert!(rows[1][2].abs() < 1e-12);
}

#[test]
fn uniform_grid() {
    let o = lmk(&["uniform", "--family", "lame", "--m", "0", "--k2", "1/2", "--kappa", "400", "--points", "5", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["x"].as_f64(), Some(0.0));
    assert!(rows[0]["value"].as_f64().unwrap() > 0.0);
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_coeffs_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = lmk(&["verify", "coeffs", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let json = dir.path().join("coeffs.json");
    let first = fs::read(&json).unwrap();
    let v = read_json(&json);
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"C1") && ids.contains(&"C2"));
    assert!(dir.path().join("coeffs.csv").exists());
    lmk(&["verify", "coeffs", "--out", out]);
    assert_eq!(first, fs::read(&json).unwrap());
}

#[test]
fn verify_uniform_reports_the_sign() {
    let dir = tempfile::tempdir().unwrap();
    let o = lmk(&["verify", "uniform", "--fast", "--out", dir.path().to_str().unwrap()]);
    let v = read_json(&dir.path().join("uniform.json"));
    assert_eq!(code(&o) == 0, v["pass"] == true);
    let choices = v["resolved_choices"].as_array().unwrap();
    for family in ["lame", "mathieu"] {
        let key = format!("b0_sign.{family}");
        let c = choices.iter().find(|c| c["choice"] == key.as_str()).unwrap();
        assert!(c["value"] == "as-printed" || c["value"] == "flipped");
    }
    let csv = fs::read_to_string(dir.path().join("uniform.csv")).unwrap();
    assert!(csv.starts_with("experiment,x,y\n"));
}

#[test]
fn thread_cap_is_validated() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_lmk"))
            .env("LMK_THREADS", val)
            .args(["eigen", "--family", "mathieu", "--m", "0", "--h", "10", "--order", "1"])
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
}
