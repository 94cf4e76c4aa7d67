//! Run manifest: what was computed, from which inputs, into which files.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Pipeline;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultManifest {
    pub pipeline: Pipeline,
    pub tool: String,
    pub tool_version: String,
    /// Input files, as named in the configuration.
    pub inputs: Vec<FileDigest>,
    /// Resolved parameters in SI units.
    pub parameters: serde_json::Value,
    /// Output files relative to the output directory.
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn digest_file(label: &str, path: &Path) -> Result<FileDigest, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(FileDigest {
        path: label.to_string(),
        sha256: sha256_hex(&bytes),
    })
}

impl ResultManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
