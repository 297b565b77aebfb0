//! Experiment manifests: what was run, on which inputs, and digests of what
//! it produced, so that `forge replay` can check a run reproduces.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub version: String,
    /// Subcommand path, e.g. `"hs build"`.
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Path to sha256 of every file read.
    pub inputs: BTreeMap<String, String>,
    /// Path to sha256 of every file written.
    pub outputs: BTreeMap<String, String>,
    pub elapsed_ms: u64,
    pub verdict: String,
}

/// What a command touched, filled in as it runs.
#[derive(Debug, Default)]
pub struct Record {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub verdict: String,
}

impl Record {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        self.inputs.push(path.to_path_buf());
        Ok(text)
    }

    pub fn write(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(format!("{:x}", Sha256::digest(bytes)))
}

pub fn digests(paths: &[PathBuf]) -> Result<BTreeMap<String, String>, CliError> {
    paths.iter().map(|p| Ok((p.display().to_string(), sha256_file(p)?))).collect()
}

/// `<out>.manifest.json` next to the primary output.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
