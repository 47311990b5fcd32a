//! Pipeline orchestration, configuration and report tables behind the
//! `esgpairs` command.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod tables;

pub use config::{PipelineConfig, Stage};
pub use error::CliError;
pub use pipeline::{run_pipeline, RunManifest};
