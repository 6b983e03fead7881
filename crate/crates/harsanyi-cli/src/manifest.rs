//! Reproducible output manifests.
//!
//! Every command writes a `manifest.json` next to its outputs listing
//! each emitted file with a SHA-256 content hash. Commands that consume
//! files from a managed directory verify the hash before reading, so a
//! silently corrupted or hand-edited artifact fails loudly instead of
//! skewing a downstream report.
//!
//! Manifests carry no timestamps or absolute paths; a rerun with the
//! same inputs and seed produces byte-identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the manifest's directory, `/`-separated.
    pub path: String,
    pub kind: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Manifest {
    pub tool: String,
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: "harsanyi".to_string(),
            version: 1,
            command: command.to_string(),
            seed,
            params: BTreeMap::new(),
            entries: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    /// Hashes `root/rel` and records it.
    pub fn record(&mut self, root: &Path, rel: &str, kind: &str) -> Result<()> {
        let full = root.join(rel);
        let sha256 = sha256_file(&full).with_context(|| format!("hashing {}", full.display()))?;
        self.entries.push(ManifestEntry {
            path: rel.to_string(),
            kind: kind.to_string(),
            sha256,
        });
        Ok(())
    }

    /// Writes `manifest.json` into `root` with entries sorted by path.
    pub fn write(&mut self, root: &Path) -> Result<()> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        let json = serde_json::to_string_pretty(self)?;
        fs::write(root.join(MANIFEST_NAME), json + "\n")
            .with_context(|| format!("writing manifest in {}", root.display()))?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_NAME);
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn lookup(&self, rel: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.path == rel)
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let read = file.read(&mut buf)?;
        if read == 0 {
            break;
        }
        hasher.update(&buf[..read]);
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

/// Finds the manifest governing `file`, if any: `manifest.json` in the
/// file's directory or up to two levels above it.
fn governing_manifest(file: &Path) -> Option<(PathBuf, Manifest)> {
    let mut dir = file.parent()?.to_path_buf();
    for _ in 0..3 {
        if dir.join(MANIFEST_NAME).is_file() {
            if let Ok(m) = Manifest::load(&dir) {
                return Some((dir, m));
            }
        }
        dir = dir.parent()?.to_path_buf();
    }
    None
}

/// Verifies `file` against its governing manifest when one lists it.
/// Unmanaged files pass through; a hash mismatch is an error.
pub fn verify_against_manifest(file: &Path) -> Result<()> {
    let Some((dir, manifest)) = governing_manifest(file) else {
        return Ok(());
    };
    let rel = match file.strip_prefix(&dir) {
        Ok(r) => r.to_string_lossy().replace('\\', "/"),
        Err(_) => return Ok(()),
    };
    let Some(entry) = manifest.lookup(&rel) else {
        return Ok(());
    };
    let actual = sha256_file(file)?;
    if actual != entry.sha256 {
        bail!(
            "manifest hash mismatch for {}: expected {}, found {}",
            file.display(),
            entry.sha256,
            actual
        );
    }
    Ok(())
}
