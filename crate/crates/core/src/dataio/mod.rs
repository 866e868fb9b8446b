//! Configuration documents, curve files and reports.

mod config;
mod curves;
mod report;
pub mod units;

pub use config::{
    load_config, load_config_with, parse_config, save_config, DriveSection, EfficiencySection, ExperimentConfig,
    FitSection, Grid, ParamBounds, SimulationSection, Spacing, Strictness, SweepSection, SyntheticSection,
    SystemSection, WeightSection,
};
pub use curves::{curve_to_string, parse_curve, read_curve, write_curve};
pub use report::{
    read_report, strip_timestamp, tool_version, unix_now, write_json, write_report, FitReport, TIMESTAMP_KEY,
};
