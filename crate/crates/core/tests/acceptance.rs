//! Acceptance run: every criterion at its stated scale and tolerance, one
//! line each. Criterion 9 reruns the whole suite and compares the JSON.
//!
//! Runs without the libtest harness so the lines show in `cargo test`
//! output; the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use abelmod::check::{run_criterion, run_suite, CriterionReport, SuiteConfig, SuiteReport, CRITERIA};

fn line(c: &CriterionReport, secs: f64) {
    let verdict = if c.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {}: {verdict}  {} ({} cases, {} failures, max residual {:.2e}, tolerance {:.0e}, {secs:.1}s)",
        c.id, c.name, c.cases, c.failures, c.max_error, c.tolerance
    );
    if let Some(f) = &c.first_failure {
        println!("    first failure: {f}");
    }
}

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    let start = Instant::now();
    let mut criteria = Vec::new();
    for (id, _) in CRITERIA {
        let t = Instant::now();
        let report = run_criterion(id, &config);
        line(&report, t.elapsed().as_secs_f64());
        criteria.push(report);
    }
    let first = SuiteReport {
        schema: abelmod::io::SCHEMA,
        config,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    };

    let t = Instant::now();
    let a = serde_json::to_string(&first).expect("report serializes");
    let b = serde_json::to_string(&run_suite(&config)).expect("report serializes");
    let deterministic = a == b;
    println!(
        "criterion 9: {}  determinism (two exact-mode suite runs, {} vs {} bytes, {:.1}s)",
        if deterministic { "PASS" } else { "FAIL" },
        a.len(),
        b.len(),
        t.elapsed().as_secs_f64()
    );
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if first.passed && deterministic {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
