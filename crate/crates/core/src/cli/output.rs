//! Output directory handling and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub path: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    /// The `--config` argument as given.
    pub config: Option<String>,
    pub config_digest: Option<String>,
    pub seed: u64,
    pub outputs: Vec<OutputEntry>,
}

/// Collects output files and writes the manifest last.
pub struct OutputDir {
    dir: PathBuf,
    entries: Vec<OutputEntry>,
}

impl OutputDir {
    /// Creates `dir`, or clears the files a previous run listed in its
    /// manifest. Any other file in the directory is an error, so the
    /// directory never holds anything the new manifest does not list.
    pub fn prepare(dir: &Path) -> Result<Self> {
        if dir.exists() {
            let manifest = dir.join(MANIFEST);
            if manifest.exists() {
                let text = fs::read_to_string(&manifest).map_err(|e| Error::io(&manifest, e))?;
                let old: RunManifest = serde_json::from_str(&text)
                    .map_err(|e| Error::config(format!("{}: unreadable manifest: {e}", manifest.display())))?;
                for entry in &old.outputs {
                    let p = dir.join(&entry.path);
                    if p.exists() {
                        fs::remove_file(&p).map_err(|e| Error::io(&p, e))?;
                    }
                }
                fs::remove_file(&manifest).map_err(|e| Error::io(&manifest, e))?;
            }
            let mut stray: Vec<String> = fs::read_dir(dir)
                .map_err(|e| Error::io(dir, e))?
                .filter_map(|e| e.ok())
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .collect();
            if !stray.is_empty() {
                stray.sort();
                return Err(Error::config(format!(
                    "output directory {} holds files no manifest accounts for: {}",
                    dir.display(),
                    stray.join(", ")
                )));
            }
        } else {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            entries: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.entries.push(OutputEntry {
            path: name.to_string(),
            digest: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn finish(
        self,
        command: &str,
        config: Option<String>,
        config_digest: Option<String>,
        seed: u64,
    ) -> Result<RunManifest> {
        let manifest = RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            config_digest,
            seed,
            outputs: self.entries,
        };
        let path = self.dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}
