//! JSON fit reports.
//!
//! Reports are pretty-printed with sorted keys; the only run-dependent line is
//! `"generated_unix": ...`, so two reports of the same run compare equal after
//! [`strip_timestamp`].

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::FitResult;

pub const TIMESTAMP_KEY: &str = "generated_unix";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub generated_unix: u64,
    pub tool: String,
    pub config_hash: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, f64>,
    /// `None` where the standard error could not be estimated.
    pub uncertainties: BTreeMap<String, Option<f64>>,
    pub residuals: BTreeMap<String, f64>,
    pub cost: f64,
    pub n_eval: usize,
    pub converged: bool,
    pub history: Vec<f64>,
    /// Free-form additions such as a fitted background.
    pub extra: BTreeMap<String, serde_json::Value>,
}

pub fn tool_version() -> String {
    format!("cqed {}", env!("CARGO_PKG_VERSION"))
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl FitReport {
    /// `names[i]` labels `fit.params[i]`.
    pub fn new(fit: &FitResult<f64>, names: &[&str], config_hash: &str, seed: u64) -> Result<Self> {
        if fit.params.is_empty() {
            return Err(Error::Fit("cannot report an empty fit".into()));
        }
        if names.len() != fit.params.len() {
            return Err(Error::DimensionMismatch {
                expected: fit.params.len(),
                found: names.len(),
            });
        }
        let uncertainties = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let u = fit.uncertainties.as_ref().map(|u| u[i]).filter(|v| v.is_finite());
                (n.to_string(), u)
            })
            .collect();
        Ok(Self {
            generated_unix: unix_now(),
            tool: tool_version(),
            config_hash: config_hash.to_string(),
            seed,
            parameters: names.iter().map(|n| n.to_string()).zip(fit.params.iter().copied()).collect(),
            uncertainties,
            residuals: fit.residuals.clone(),
            cost: fit.cost,
            n_eval: fit.n_eval,
            converged: fit.converged,
            history: fit.history.clone(),
            extra: BTreeMap::new(),
        })
    }

    pub fn with_extra(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

pub fn write_report(report: &FitReport, path: impl AsRef<Path>) -> Result<()> {
    write_json(report, path)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<FitReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// `text` without its timestamp line.
pub fn strip_timestamp(text: &str) -> String {
    let key = format!("\"{TIMESTAMP_KEY}\"");
    text.lines()
        .filter(|l| !l.trim_start().starts_with(&key))
        .map(|l| format!("{l}\n"))
        .collect()
}
