use std::path::Path;

use cqed::acceptance::{run_suite_with, CRITERIA};
use cqed::dataio::{write_json, ExperimentConfig};

use crate::output::{print_rows, Format, Row};
use crate::{ensure_dir, CliResult, Failure};

pub fn run(cfg: &ExperimentConfig, only: &[u8], out: &Path, format: Format) -> CliResult {
    if let Some(bad) = only.iter().find(|id| !CRITERIA.iter().any(|(i, _)| i == *id)) {
        return Err(Failure::Validation(format!(
            "unknown criterion {bad}; ids run from 1 to {}",
            CRITERIA.len()
        )));
    }
    cfg.validate()?;
    ensure_dir(out)?;
    let report = run_suite_with(cfg, only, |c| {
        if format == Format::Table {
            println!("{}", c.line());
        }
    })?;
    write_json(&report, out.join("reproduce.json"))?;
    match format {
        Format::Table => println!("acceptance: {} passed, {} failed", report.passed, report.failed),
        Format::Csv => {
            let rows: Vec<Row> = report
                .criteria
                .iter()
                .map(|c| Row::other(format!("criterion_{}", c.id), if c.passed { "pass" } else { "fail" }, ""))
                .collect();
            print_rows(&rows, format);
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        let ids: Vec<String> = report.failures().iter().map(|c| c.id.to_string()).collect();
        Err(Failure::Acceptance(format!("failed criteria: {}", ids.join(", "))))
    }
}
