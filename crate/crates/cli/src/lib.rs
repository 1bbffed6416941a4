//! Batch front end for `qhopf-core`: reads a run configuration, executes the
//! requested construction and verification checks, and renders the report.

pub mod config;
pub mod output;
pub mod pipeline;

pub use config::{parse_config, ConfigError, RunConfig};
pub use output::Format;
pub use pipeline::{run_pipeline, Check, CheckOutcome, RunReport, SCHEMA};
