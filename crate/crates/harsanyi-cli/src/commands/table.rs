//! `table`: score every masked variant of each dataset sample with the
//! chosen head, one binary table file per sample.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};

use lattice_core::io::{write_table_csv, write_table_file};
use model_eval::format::{read_dataset_file, read_model_file, read_probe_file};
use model_eval::{build_masked_table, Scorer};

use crate::errors::usage;
use crate::manifest::{verify_against_manifest, Manifest};
use crate::pipeline::{ensure_dir, sample_stem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerKind {
    ModelHead,
    Probe,
}

pub struct TableArgs<'a> {
    pub model: &'a Path,
    pub dataset: &'a Path,
    pub scorer: ScorerKind,
    pub probe: Option<&'a Path>,
    pub max_samples: Option<usize>,
    pub debug_csv: bool,
    pub seed: u64,
}

pub fn run(out: &Path, args: &TableArgs<'_>) -> Result<()> {
    verify_against_manifest(args.model)?;
    let model = read_model_file(args.model)
        .with_context(|| format!("loading model {}", args.model.display()))?;
    verify_against_manifest(args.dataset)?;
    let dataset = read_dataset_file(args.dataset)
        .with_context(|| format!("loading dataset {}", args.dataset.display()))?;

    let probe = match (args.scorer, args.probe) {
        (ScorerKind::Probe, Some(path)) => {
            verify_against_manifest(path)?;
            Some(
                read_probe_file(path)
                    .with_context(|| format!("loading probe {}", path.display()))?,
            )
        }
        (ScorerKind::Probe, None) => {
            return Err(usage("--scorer probe requires --probe <FILE>"));
        }
        (ScorerKind::ModelHead, _) => None,
    };
    let scorer = match &probe {
        Some(p) => Scorer::Probe(p),
        None => Scorer::ModelHead,
    };

    if dataset.n_variables() > lattice_core::MAX_VARS as usize {
        return Err(usage(format!(
            "dataset has {} variables, cap is {}",
            dataset.n_variables(),
            lattice_core::MAX_VARS
        )));
    }

    let baseline = dataset.effective_baseline()?;
    let count = args
        .max_samples
        .map_or(dataset.samples().len(), |m| m.min(dataset.samples().len()));

    ensure_dir(out)?;
    let mut manifest = Manifest::new("table", args.seed);
    manifest.param("model", args.model.display());
    manifest.param("dataset", args.dataset.display());
    manifest.param(
        "scorer",
        match args.scorer {
            ScorerKind::ModelHead => "model-head",
            ScorerKind::Probe => "probe",
        },
    );
    manifest.param("samples", count);

    for (i, sample) in dataset.samples()[..count].iter().enumerate() {
        let table = build_masked_table(&model, sample, &baseline, scorer)
            .with_context(|| format!("building table for sample {i}"))?;
        let rel = format!("{}.motb", sample_stem(i));
        write_table_file(&out.join(&rel), &table)?;
        manifest.record(out, &rel, "table")?;
        if args.debug_csv {
            let rel_csv = format!("{}.csv", sample_stem(i));
            let mut w = BufWriter::new(File::create(out.join(&rel_csv))?);
            write_table_csv(&mut w, &table)?;
            drop(w);
            manifest.record(out, &rel_csv, "table-debug")?;
        }
    }
    manifest.write(out)?;
    println!("wrote {count} masked-output tables to {}", out.display());
    Ok(())
}
