//! Run manifests: the fully resolved command plus the files it wrote.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::Command;
use crate::error::{CliError, CliResult};
use crate::output::{read_file, write_file};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub command: Command,
    /// Values derived from the arguments (geometries, layer sizes, ...).
    pub resolved: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: Command, resolved: serde_json::Value, outputs: Vec<PathBuf>) -> Self {
        Self {
            tool: format!("aqm {}", env!("CARGO_PKG_VERSION")),
            command,
            resolved,
            outputs,
        }
    }

    /// Where the manifest for `output` lives: inside it for a directory,
    /// beside it as `<name>.manifest.json` for a file.
    pub fn path_for(output: &Path, is_dir: bool) -> PathBuf {
        if is_dir {
            output.join("manifest.json")
        } else {
            let mut name = output.file_name().unwrap_or_default().to_os_string();
            name.push(".manifest.json");
            output.with_file_name(name)
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_file(path, text)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = read_file(path)?;
        let manifest: Self = serde_json::from_slice(&bytes)?;
        if matches!(manifest.command, Command::Replay(_)) {
            return Err(CliError::usage("a manifest cannot record a replay"));
        }
        Ok(manifest)
    }
}

/// Absolute form of `path`, so a manifest replays from any directory.
pub fn absolute(path: &Path) -> CliResult<PathBuf> {
    std::path::absolute(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn absolute_opt(path: &Option<PathBuf>) -> CliResult<Option<PathBuf>> {
    path.as_deref().map(absolute).transpose()
}
