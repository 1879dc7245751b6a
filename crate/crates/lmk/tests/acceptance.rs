//! Runs every acceptance criterion on its full grid and prints one line per
//! criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use lmk::report::RunReport;
use lmk::suites::Suite;

fn main() {
    let mut reports: BTreeMap<&str, (RunReport, f64)> = BTreeMap::new();
    for suite in Suite::ALL {
        let start = Instant::now();
        let report = suite.run(false);
        reports.insert(suite.name(), (report, start.elapsed().as_secs_f64()));
    }
    println!();
    let mut failed = 0;
    for i in 1..=10 {
        let id = format!("C{i}");
        let suite = Suite::for_criterion(&id).expect("criterion has a suite");
        let (report, secs) = &reports[suite.name()];
        let case = report.case(&id).expect("criterion summary present");
        let verdict = if case.pass { "PASS" } else { "FAIL" };
        println!("{id:<4} {verdict}  [{} {secs:.1}s] {} ({})", suite.name(), case.expected, case.got);
        if !case.pass {
            failed += 1;
            for c in report.failures(&id) {
                println!("       {}: expected {}, got {}", c.id, c.expected, c.got);
            }
        }
    }
    for (report, _) in reports.values() {
        for (k, v) in &report.resolved_choices {
            println!("     {k} = {v}");
        }
    }
    println!("\n{} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
