//! Verification reports: a JSON summary plus a CSV of raw measurements.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::format::{num, short, to_json_string};

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedSlope {
    pub experiment: String,
    pub slope: f64,
    /// Human-readable acceptance condition, e.g. `<= -0.75`.
    pub threshold: String,
}

/// A raw data point for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub experiment: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub fitted_slopes: Vec<FittedSlope>,
    pub resolved_choices: Vec<(String, String)>,
    pub measurements: Vec<Measurement>,
}

impl RunReport {
    pub fn new(suite: &str) -> Self {
        RunReport { suite: suite.to_string(), ..Default::default() }
    }

    pub fn pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, id: impl Into<String>, inputs: Value, expected: Value, got: Value, tolerance: Option<f64>, pass: bool) {
        self.cases.push(Case { id: id.into(), inputs, expected, got, tolerance, pass });
    }

    pub fn slope(&mut self, experiment: impl Into<String>, slope: f64, threshold: impl Into<String>) {
        self.fitted_slopes.push(FittedSlope { experiment: experiment.into(), slope, threshold: threshold.into() });
    }

    pub fn measure(&mut self, experiment: impl Into<String>, x: f64, y: f64) {
        self.measurements.push(Measurement { experiment: experiment.into(), x, y });
    }

    /// Adds the case named `criterion`, passing iff every case whose id
    /// starts with `criterion.` passes.
    pub fn summarize(&mut self, criterion: &str, statement: &str) {
        let prefix = format!("{criterion}.");
        let (total, passed) = self
            .cases
            .iter()
            .filter(|c| c.id.starts_with(&prefix))
            .fold((0usize, 0usize), |(t, p), c| (t + 1, p + c.pass as usize));
        self.push(
            criterion,
            json!({ "cases": total }),
            Value::String(statement.to_string()),
            Value::String(format!("{passed}/{total} cases pass")),
            None,
            total > 0 && passed == total,
        );
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    /// Failing cases under `criterion`, excluding the summary itself.
    pub fn failures(&self, criterion: &str) -> Vec<&Case> {
        let prefix = format!("{criterion}.");
        self.cases.iter().filter(|c| c.id.starts_with(&prefix) && !c.pass).collect()
    }

    pub fn to_json(&self) -> Value {
        let cases: Vec<Value> = self
            .cases
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "inputs": c.inputs,
                    "expected": c.expected,
                    "got": c.got,
                    "tolerance": c.tolerance.map(num).unwrap_or(Value::Null),
                    "pass": c.pass,
                })
            })
            .collect();
        let slopes: Vec<Value> = self
            .fitted_slopes
            .iter()
            .map(|s| json!({ "experiment": s.experiment, "slope": num(s.slope), "threshold": s.threshold }))
            .collect();
        let choices: Vec<Value> =
            self.resolved_choices.iter().map(|(k, v)| json!({ "choice": k, "value": v })).collect();
        json!({
            "suite": self.suite,
            "pass": self.pass(),
            "cases": cases,
            "fitted_slopes": slopes,
            "resolved_choices": choices,
        })
    }

    pub fn measurements_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["experiment", "x", "y"]).expect("in-memory write");
        for m in &self.measurements {
            w.write_record([m.experiment.as_str(), &short(m.x), &short(m.y)]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
    }

    /// Writes `<suite>.json` and `<suite>.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let json_path = dir.join(format!("{}.json", self.suite));
        let csv_path = dir.join(format!("{}.csv", self.suite));
        fs::write(&json_path, to_json_string(&self.to_json()))?;
        fs::write(&csv_path, self.measurements_csv())?;
        Ok((json_path, csv_path))
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_slope(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes() {
        let x = [100.0, 200.0, 400.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.5)).collect();
        assert!((loglog_slope(&x, &y) + 2.5).abs() < 1e-12);
        assert!((fit_slope(&[1.0, 2.0, 3.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn summary_tracks_cases() {
        let mut r = RunReport::new("demo");
        r.push("C1.a", json!({}), json!(1), json!(1), None, true);
        r.summarize("C1", "all equal");
        assert!(r.case("C1").unwrap().pass);
        r.push("C2.a", json!({}), json!(1), json!(2), None, false);
        r.summarize("C2", "all equal");
        assert!(!r.case("C2").unwrap().pass);
        assert!(!r.pass());
        assert_eq!(r.failures("C2").len(), 1);
    }

    #[test]
    fn files_are_deterministic() {
        let dir = std::env::temp_dir().join(format!("lmk-report-{}", std::process::id()));
        let mut r = RunReport::new("demo");
        r.push("C1.a", json!({ "m": 1 }), json!(0.1), num(0.1), Some(1e-12), true);
        r.measure("e", 100.0, 1.5e-25);
        let (j, c) = r.write(&dir).unwrap();
        let first = fs::read(&j).unwrap();
        r.write(&dir).unwrap();
        assert_eq!(first, fs::read(&j).unwrap());
        assert_eq!(fs::read_to_string(&c).unwrap(), "experiment,x,y\ne,100,1.5e-25\n");
        fs::remove_dir_all(&dir).unwrap();
    }
}
