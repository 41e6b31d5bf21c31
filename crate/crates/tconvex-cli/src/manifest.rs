//! Run manifests: one JSON record per command invocation with the echoed
//! configuration, code version, per-phase timings and output digests.

use anyhow::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub timings_ms: Vec<(String, f64)>,
    pub outputs: Vec<OutputDigest>,
}

pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    seed: Option<u64>,
    phases: Vec<(String, f64)>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            config,
            seed,
            phases: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Closes the current phase under `name`.
    pub fn phase(&mut self, name: &str) {
        let elapsed = self.started.elapsed().as_secs_f64() * 1e3;
        self.started = Instant::now();
        self.phases.push((name.to_string(), elapsed));
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Writes `<primary>.manifest.json` next to the first registered output.
    pub fn write(mut self) -> Result<()> {
        self.phase("finalize");
        let mut digests = Vec::new();
        for p in &self.outputs {
            let bytes = std::fs::read(p)?;
            let mut hasher = Sha256::new();
            hasher.update(&bytes);
            digests.push(OutputDigest {
                path: p.display().to_string(),
                sha256: format!("{:x}", hasher.finalize()),
            });
        }
        let primary = self
            .outputs
            .first()
            .cloned()
            .unwrap_or_else(|| PathBuf::from("run"));
        let manifest = RunManifest {
            command: self.command,
            config: self.config,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timings_ms: self.phases,
            outputs: digests,
        };
        let path = PathBuf::from(format!("{}.manifest.json", primary.display()));
        let mut text = serde_json::to_string(&manifest)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
