//! Shared filesystem plumbing for the commands: stem-aligned vector
//! directories and manifest-checked reads.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use lattice_core::io::{read_table_file, read_vector_file};
use lattice_core::{InteractionVector, MaskedOutputTable};

use crate::errors::usage;
use crate::manifest::verify_against_manifest;

/// Sample files are named by position: `sample_0007.motb` etc.
pub fn sample_stem(index: usize) -> String {
    format!("sample_{index:04}")
}

fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(usage(format!("{} is not a directory", dir.display())));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == ext).unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(usage(format!("no .{ext} files in {}", dir.display())));
    }
    Ok(files)
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .into_owned()
}

/// All masked-output tables in a directory, sorted and hash-verified.
pub fn read_table_dir(dir: &Path) -> Result<Vec<(String, MaskedOutputTable)>> {
    files_with_extension(dir, "motb")?
        .into_iter()
        .map(|p| {
            verify_against_manifest(&p)?;
            let table = read_table_file(&p).with_context(|| format!("reading {}", p.display()))?;
            Ok((stem_of(&p), table))
        })
        .collect()
}

/// All interaction vectors in a directory, sorted and hash-verified.
pub fn read_vector_dir(dir: &Path) -> Result<Vec<(String, InteractionVector)>> {
    files_with_extension(dir, "hivb")?
        .into_iter()
        .map(|p| {
            verify_against_manifest(&p)?;
            let iv = read_vector_file(&p).with_context(|| format!("reading {}", p.display()))?;
            Ok((stem_of(&p), iv))
        })
        .collect()
}

/// Checks that two vector directories carry the same sample stems in
/// the same order and a single variable count.
pub fn check_alignment(
    label_a: &str,
    a: &[(String, InteractionVector)],
    label_b: &str,
    b: &[(String, InteractionVector)],
) -> Result<()> {
    if a.len() != b.len() {
        return Err(usage(format!(
            "sample misalignment: {label_a} has {} vectors, {label_b} has {}",
            a.len(),
            b.len()
        )));
    }
    for ((sa, va), (sb, vb)) in a.iter().zip(b) {
        if sa != sb {
            return Err(usage(format!(
                "sample misalignment: {label_a}/{sa} vs {label_b}/{sb}"
            )));
        }
        if va.n() != vb.n() {
            return Err(usage(format!(
                "variable count mismatch on {sa}: {label_a} has n={}, {label_b} has n={}",
                va.n(),
                vb.n()
            )));
        }
    }
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}
