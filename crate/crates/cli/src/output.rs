use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use cqed::dataio::{tool_version, unix_now, write_json, ExperimentConfig};
use serde_json::Value;

use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

/// One printed result.
#[derive(Clone, Debug)]
pub struct Row {
    pub quantity: String,
    pub value: Value,
    pub unit: &'static str,
}

impl Row {
    pub fn num(quantity: impl Into<String>, value: f64, unit: &'static str) -> Self {
        Self {
            quantity: quantity.into(),
            value: Value::from(value),
            unit,
        }
    }

    pub fn other(quantity: impl Into<String>, value: impl Into<Value>, unit: &'static str) -> Self {
        Self {
            quantity: quantity.into(),
            value: value.into(),
            unit,
        }
    }
}

/// About four significant digits, switching to exponent form outside [1e-3, 1e5).
pub fn short(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() {
        format!("{v}")
    } else if (1e-3..1e5).contains(&a) {
        let decimals = (3 - a.log10().floor() as i32).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.3e}")
    }
}

fn render(v: &Value, full: bool) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !full && !n.is_u64() && !n.is_i64() => short(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "n/a".into(),
        other => other.to_string(),
    }
}

pub fn format_rows(rows: &[Row], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("quantity,value,unit\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{}", r.quantity, render(&r.value, true), r.unit);
            }
        }
        Format::Table => {
            let width = rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
            for r in rows {
                let line = format!("{:<width$}  {} {}", r.quantity, render(&r.value, false), r.unit);
                let _ = writeln!(out, "{}", line.trim_end());
            }
        }
    }
    out
}

pub fn print_rows(rows: &[Row], format: Format) {
    print!("{}", format_rows(rows, format));
}

/// `summary.json`: run metadata plus every row keyed by quantity.
pub fn write_summary(dir: &Path, kind: &str, cfg: &ExperimentConfig, rows: &[Row]) -> CliResult {
    let mut map: BTreeMap<String, Value> = BTreeMap::new();
    map.insert("generated_unix".into(), unix_now().into());
    map.insert("tool".into(), tool_version().into());
    map.insert("config_hash".into(), cfg.hash()?.into());
    map.insert("kind".into(), kind.into());
    let values: BTreeMap<&str, &Value> = rows.iter().map(|r| (r.quantity.as_str(), &r.value)).collect();
    map.insert("results".into(), serde_json::to_value(values).map_err(cqed::Error::from)?);
    write_json(&map, dir.join("summary.json"))?;
    Ok(())
}

/// Columns of equal length written as a headed CSV file.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> CliResult {
    let n = columns.first().map_or(0, |c| c.len());
    let mut text = header.join(",");
    text.push('\n');
    for i in 0..n {
        let row: Vec<String> = columns.iter().map(|c| format!("{:e}", c[i])).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| crate::Failure::Validation(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_numbers() {
        assert_eq!(short(0.09108), "0.09108");
        assert_eq!(short(0.8547), "0.8547");
        assert_eq!(short(25.565), "25.57");
        assert_eq!(short(3.76e8), "3.760e8");
        assert_eq!(short(0.0), "0");
    }

    #[test]
    fn csv_keeps_full_precision() {
        let rows = [Row::num("beta", 0.854_651_162_790_697_7, "")];
        assert_eq!(format_rows(&rows, Format::Csv), "quantity,value,unit\nbeta,0.8546511627906977,\n");
        assert_eq!(format_rows(&rows, Format::Table), "beta  0.8547\n");
    }
}
