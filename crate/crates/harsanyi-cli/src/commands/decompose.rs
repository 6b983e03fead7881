//! `decompose`: preserve/discard/new report between aligned vector
//! directories, with the learnability ratio when a scratch-run
//! directory is supplied.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Result;

use knowledge_metrics::{
    decompose, learnability_ratio, order_decomposition, pooled_ratio, write_order_decomposition,
    write_ratio_report, write_subset_dump, ReportFormat,
};

use crate::manifest::Manifest;
use crate::pipeline::{check_alignment, ensure_dir, read_vector_dir};

pub struct DecomposeArgs<'a> {
    pub pre: &'a Path,
    pub fine: &'a Path,
    pub rand: Option<&'a Path>,
    pub dump_subsets: bool,
    pub format: ReportFormat,
    pub seed: u64,
}

pub fn run(out: &Path, args: &DecomposeArgs<'_>) -> Result<()> {
    let pre = read_vector_dir(args.pre)?;
    let fine = read_vector_dir(args.fine)?;
    check_alignment("pre", &pre, "fine", &fine)?;
    let rand = match args.rand {
        Some(dir) => {
            let rand = read_vector_dir(dir)?;
            check_alignment("pre", &pre, "rand", &rand)?;
            Some(rand)
        }
        None => None,
    };

    let decomps: Vec<_> = pre
        .iter()
        .zip(&fine)
        .map(|((stem, p), (_, f))| {
            decompose(p, f).map(|d| d.with_sources(stem.clone(), stem.clone()))
        })
        .collect::<knowledge_metrics::Result<_>>()?;
    let od = order_decomposition(&decomps)?;

    ensure_dir(out)?;
    let mut manifest = Manifest::new("decompose", args.seed);
    manifest.param("pre", args.pre.display());
    manifest.param("fine", args.fine.display());
    manifest.param("samples", decomps.len());

    let decomp_rel = format!("decomposition.{}", args.format.extension());
    let mut w = BufWriter::new(File::create(out.join(&decomp_rel))?);
    write_order_decomposition(&mut w, &od, args.format)?;
    drop(w);
    manifest.record(out, &decomp_rel, "report")?;

    if let Some(rand) = &rand {
        manifest.param("rand", args.rand.expect("present").display());
        let reports = pre
            .iter()
            .zip(&fine)
            .zip(rand)
            .map(|(((_, p), (_, f)), (_, r))| learnability_ratio(p, f, r))
            .collect::<knowledge_metrics::Result<Vec<_>>>()?;
        let pooled = pooled_ratio(&reports)?;
        let ratio_rel = format!("ratio.{}", args.format.extension());
        let mut w = BufWriter::new(File::create(out.join(&ratio_rel))?);
        write_ratio_report(&mut w, &pooled, args.format)?;
        drop(w);
        manifest.record(out, &ratio_rel, "report")?;
        match pooled.aggregate {
            Some(r) => println!(
                "aggregate ratio {:.4} over {} defined subsets ({} excluded)",
                r, pooled.defined_count, pooled.excluded_count
            ),
            None => println!(
                "aggregate ratio undefined: no subset with preserved knowledge ({} excluded)",
                pooled.excluded_count
            ),
        }
    }

    if args.dump_subsets {
        let dump_rel = format!("subsets.{}", args.format.extension());
        let mut w = BufWriter::new(File::create(out.join(&dump_rel))?);
        write_subset_dump(
            &mut w,
            decomps.iter().map(|d| (d.pre_source(), d)),
            args.format,
        )?;
        drop(w);
        manifest.record(out, &dump_rel, "report")?;
    }

    manifest.write(out)?;
    println!(
        "decomposition over {} samples written to {}",
        decomps.len(),
        out.display()
    );
    Ok(())
}
