use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Written next to every output as `<output>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// `config` is the canonical settings string of the run; thread counts are
/// left out because they never change results.
pub fn write(
    command: &str,
    config: &str,
    inputs: &[PathBuf],
    outputs: &[PathBuf],
) -> Result<(), CliError> {
    let Some(primary) = outputs.first() else {
        return Ok(());
    };
    let manifest = RunManifest {
        command: command.to_string(),
        config_hash: sha256_hex(config.as_bytes()),
        inputs: inputs
            .iter()
            .map(|p| digest_file(p))
            .collect::<Result<_, _>>()?,
        outputs: outputs
            .iter()
            .map(|p| digest_file(p))
            .collect::<Result<_, _>>()?,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let mut text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    std::fs::write(manifest_path(primary), text)
        .map_err(|e| CliError::validation(format!("{}: {e}", primary.display())))
}
