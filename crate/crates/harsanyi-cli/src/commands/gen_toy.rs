//! `gen-toy`: write a complete toy transfer scenario to disk.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};

use model_eval::format::{write_dataset_file, write_model_file, write_probe_file};

use crate::errors::usage;
use crate::manifest::Manifest;
use crate::pipeline::ensure_dir;
use crate::toy::{generate, ToyConfig};

pub fn run(out: &Path, config: &ToyConfig, force: bool) -> Result<()> {
    if out.exists() && !force {
        let occupied = out.is_file()
            || fs::read_dir(out)
                .map(|mut d| d.next().is_some())
                .unwrap_or(true);
        if occupied {
            return Err(usage(format!(
                "output directory {} already exists; pass --force to overwrite",
                out.display()
            )));
        }
    }
    let suite = generate(config)?;

    ensure_dir(out)?;
    ensure_dir(&out.join("checkpoints/finetune"))?;
    ensure_dir(&out.join("checkpoints/random"))?;

    let mut manifest = Manifest::new("gen-toy", config.seed);
    manifest.param("variables", config.variables);
    manifest.param("var_width", config.var_width);
    manifest.param("classes", config.classes);
    manifest.param("pretrain_classes", config.pretrain_classes());
    manifest.param("hidden", config.hidden);
    manifest.param("noise", config.noise);
    manifest.param("shift", config.shift);
    manifest.param(
        "planted",
        config.planted.map_or("all".to_string(), |k| k.to_string()),
    );
    manifest.param("l1_decay", config.l1_decay);
    manifest.param("pretrain_per_class", config.pretrain_per_class);
    manifest.param("train_per_class", config.train_per_class);
    manifest.param("eval_per_class", config.eval_per_class);
    manifest.param("pretrain_epochs", config.pretrain_epochs);
    manifest.param("pretrain_lr", config.pretrain_lr);
    manifest.param("epochs", config.epochs);
    manifest.param("finetune_lr", config.finetune_lr);
    manifest.param("scratch_lr", config.scratch_lr);
    manifest.param("attempt", suite.attempt);

    let record = |rel: &str, kind: &str, manifest: &mut Manifest| -> Result<()> {
        manifest.record(out, rel, kind)
    };

    write_dataset_file(&out.join("dataset_pretrain.txt"), &suite.pretrain_dataset)?;
    record("dataset_pretrain.txt", "dataset", &mut manifest)?;
    write_dataset_file(&out.join("dataset_train.txt"), &suite.train_dataset)?;
    record("dataset_train.txt", "dataset", &mut manifest)?;
    write_dataset_file(&out.join("dataset_eval.txt"), &suite.eval_dataset)?;
    record("dataset_eval.txt", "dataset", &mut manifest)?;

    write_model_file(&out.join("model_backbone.txt"), &suite.backbone)?;
    record("model_backbone.txt", "model", &mut manifest)?;
    write_model_file(&out.join("model_finetune.txt"), suite.finetune_final())?;
    record("model_finetune.txt", "model", &mut manifest)?;
    write_model_file(&out.join("model_random.txt"), suite.scratch_final())?;
    record("model_random.txt", "model", &mut manifest)?;

    write_probe_file(&out.join("probe_pretrain.txt"), &suite.probe)?;
    record("probe_pretrain.txt", "probe", &mut manifest)?;

    for (series, checkpoints) in [
        ("finetune", &suite.finetune_checkpoints),
        ("random", &suite.scratch_checkpoints),
    ] {
        for (i, model) in checkpoints.iter().enumerate() {
            let rel = format!("checkpoints/{series}/epoch_{:02}.txt", i + 1);
            write_model_file(&out.join(&rel), model)?;
            record(&rel, "checkpoint", &mut manifest)?;
        }
    }

    let mut acc = Vec::new();
    writeln!(acc, "variant,epoch,eval_accuracy")?;
    for (i, a) in suite.finetune_accuracy.iter().enumerate() {
        writeln!(acc, "finetune,{},{a}", i + 1)?;
    }
    for (i, a) in suite.scratch_accuracy.iter().enumerate() {
        writeln!(acc, "random,{},{a}", i + 1)?;
    }
    fs::write(out.join("accuracy.csv"), acc).context("writing accuracy.csv")?;
    record("accuracy.csv", "report", &mut manifest)?;

    manifest.write(out)?;
    println!(
        "toy suite written to {} ({} checkpoints per variant, attempt {})",
        out.display(),
        config.epochs,
        suite.attempt
    );
    Ok(())
}
