//! CSV and JSON sidecar emission.

use std::path::{Path, PathBuf};

use qchaos_core::GateCounts;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub gate_counts: GateCounts,
    pub gate_total: usize,
    pub wall_time_seconds: f64,
    pub warnings: Vec<String>,
    /// File names written next to the sidecar.
    pub outputs: Vec<String>,
    pub results: Value,
}

impl Sidecar {
    pub fn read(path: &Path) -> Result<Sidecar, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let sidecar: Sidecar =
            serde_json::from_str(&text).map_err(|e| format!("{} is not a sidecar: {e}", path.display()))?;
        if sidecar.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "{} has schema version {}, this build reads {SCHEMA_VERSION}",
                path.display(),
                sidecar.schema_version
            ));
        }
        Ok(sidecar)
    }
}

/// Writes `files` (name, contents) into `dir`, creating it if needed, and
/// returns their paths.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    files
        .iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            Ok(path)
        })
        .collect()
}
