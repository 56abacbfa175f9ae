//! Run manifests: enough metadata next to every output directory to
//! reproduce the run and detect input drift.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Digest record of one input file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Manifest written alongside every command's outputs. `created_utc` is
/// the only field allowed to differ between reruns of the same
/// configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub command: String,
    pub created_utc: String,
    /// Semantic parameters of the run (never paths of the output
    /// directory, so reruns into different directories stay comparable).
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

pub fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, input_paths: &[&Path]) -> anyhow::Result<Self> {
        let inputs = input_paths
            .iter()
            .map(|p| {
                Ok(InputDigest {
                    path: p.display().to_string(),
                    sha256: sha256_file(p)?,
                })
            })
            .collect::<anyhow::Result<_>>()?;
        Ok(RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            created_utc: chrono::Utc::now().to_rfc3339(),
            config,
            inputs,
            outputs: Vec::new(),
        })
    }

    /// Write the manifest as `manifest.json` in `dir`.
    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join("manifest.json");
        fs::write(&path, crate::output::to_json_string(self)?)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// Load a manifest and verify that every recorded input digest still
    /// matches the file on disk.
    pub fn load_verified(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let manifest: RunManifest = serde_json::from_str(&text)?;
        for input in &manifest.inputs {
            let current = sha256_file(Path::new(&input.path))?;
            if current != input.sha256 {
                anyhow::bail!(
                    "input {} changed since the run: recorded {}, found {current}",
                    input.path,
                    input.sha256
                );
            }
        }
        Ok(manifest)
    }
}
