//! Configuration, pipelines and output files behind the `cryowire` binary.

pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod pipeline;

pub use config::{Pipeline, RunConfig};
pub use error::CliError;
pub use manifest::ResultManifest;
pub use pipeline::run_pipeline;
