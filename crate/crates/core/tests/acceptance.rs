//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion. Set `CQED_ACCEPTANCE=1,5,11` to run a subset.

use std::process::ExitCode;

use cqed::acceptance::{acceptance_config, run_suite_with};

fn main() -> ExitCode {
    let ids: Vec<u8> = std::env::var("CQED_ACCEPTANCE")
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    let cfg = acceptance_config();
    let report = match run_suite_with(&cfg, &ids, |c| println!("{}", c.line())) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite could not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("acceptance: {} passed, {} failed", report.passed, report.failed);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
