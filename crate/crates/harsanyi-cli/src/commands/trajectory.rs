//! `trajectory`: per-epoch Jaccard similarity against the final
//! checkpoint's interactions, for one or both training variants.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Result;

use knowledge_metrics::{
    trajectory_with_options, write_trajectory_report, ReportFormat, TrajectoryOptions,
    TrajectoryRecord, Variant,
};
use lattice_core::InteractionVector;

use crate::errors::usage;
use crate::manifest::Manifest;
use crate::pipeline::{check_alignment, ensure_dir, read_vector_dir};
use crate::svg::{line_chart, Series};

pub struct TrajectoryArgs<'a> {
    pub finetune_epochs: &'a [PathBuf],
    pub random_epochs: &'a [PathBuf],
    pub chart: bool,
    pub salient_tau_ratio: Option<f64>,
    pub format: ReportFormat,
    pub seed: u64,
}

fn load_variant(
    variant: Variant,
    dirs: &[PathBuf],
    opts: &TrajectoryOptions,
) -> Result<Vec<TrajectoryRecord>> {
    if dirs.len() < 2 {
        return Err(usage(format!(
            "variant {} needs at least 2 epoch directories, got {}",
            variant.as_str(),
            dirs.len()
        )));
    }
    let mut epochs: Vec<Vec<InteractionVector>> = Vec::with_capacity(dirs.len());
    let mut first: Option<(String, Vec<(String, InteractionVector)>)> = None;
    for dir in dirs {
        let named = read_vector_dir(dir)?;
        match &first {
            None => first = Some((dir.display().to_string(), named.clone())),
            Some((label, reference)) => {
                check_alignment(label, reference, &dir.display().to_string(), &named)?
            }
        }
        epochs.push(named.into_iter().map(|(_, iv)| iv).collect());
    }
    let finals = epochs.last().expect(">= 2 epochs").clone();
    Ok(trajectory_with_options(&epochs, &finals, variant, opts)?)
}

pub fn run(out: &Path, args: &TrajectoryArgs<'_>) -> Result<()> {
    if args.finetune_epochs.is_empty() && args.random_epochs.is_empty() {
        return Err(usage(
            "supply --finetune-epochs and/or --random-epochs (2+ directories each)",
        ));
    }
    let opts = TrajectoryOptions {
        salient_tau_ratio: args.salient_tau_ratio,
    };

    let mut records = Vec::new();
    if !args.finetune_epochs.is_empty() {
        records.extend(load_variant(
            Variant::Finetune,
            args.finetune_epochs,
            &opts,
        )?);
    }
    if !args.random_epochs.is_empty() {
        records.extend(load_variant(Variant::Random, args.random_epochs, &opts)?);
    }

    ensure_dir(out)?;
    let mut manifest = Manifest::new("trajectory", args.seed);
    manifest.param("finetune_epochs", args.finetune_epochs.len());
    manifest.param("random_epochs", args.random_epochs.len());
    if let Some(r) = args.salient_tau_ratio {
        manifest.param("salient_tau_ratio", r);
    }

    let rel = format!("trajectory.{}", args.format.extension());
    let mut w = BufWriter::new(File::create(out.join(&rel))?);
    write_trajectory_report(&mut w, &records, args.format)?;
    drop(w);
    manifest.record(out, &rel, "report")?;

    if args.chart {
        let series: Vec<Series> = [Variant::Finetune, Variant::Random]
            .into_iter()
            .filter_map(|variant| {
                let points: Vec<(f64, f64)> = records
                    .iter()
                    .filter(|r| r.variant == variant)
                    .map(|r| (r.epoch as f64, r.similarity))
                    .collect();
                (!points.is_empty()).then(|| Series {
                    name: variant.as_str().to_string(),
                    points,
                })
            })
            .collect();
        let svg = line_chart(
            "Jaccard similarity to final interactions",
            "epoch",
            "jaccard",
            &series,
        );
        fs::write(out.join("trajectory.svg"), svg)?;
        manifest.record(out, "trajectory.svg", "chart")?;
    }

    manifest.write(out)?;
    for r in &records {
        println!(
            "{} epoch {}: jaccard {:.6} over {} samples",
            r.variant.as_str(),
            r.epoch,
            r.similarity,
            r.samples
        );
    }
    Ok(())
}
