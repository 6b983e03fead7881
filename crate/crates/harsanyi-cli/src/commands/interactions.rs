//! `interactions`: Harsanyi dividends of every table in a directory,
//! plus the sparsity report.

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::Path;

use anyhow::Result;

use knowledge_metrics::ReportFormat;
use lattice_core::io::{write_vector_csv, write_vector_file};
use lattice_core::{mobius_transform, sparsity_report};

use crate::manifest::Manifest;
use crate::pipeline::{ensure_dir, read_table_dir};

pub struct InteractionsArgs<'a> {
    pub tables: &'a Path,
    pub tau_ratio: f64,
    pub debug_csv: bool,
    pub format: ReportFormat,
    pub seed: u64,
}

pub fn run(out: &Path, args: &InteractionsArgs<'_>) -> Result<()> {
    let tables = read_table_dir(args.tables)?;
    ensure_dir(out)?;

    let mut manifest = Manifest::new("interactions", args.seed);
    manifest.param("tables", args.tables.display());
    manifest.param("tau_ratio", args.tau_ratio);
    manifest.param("samples", tables.len());

    let mut rows = Vec::new();
    let mut total_salient = 0usize;
    let mut total_count = 0usize;
    let mut residual_worst = 0.0f64;

    for (stem, table) in &tables {
        let iv = mobius_transform(table)?;
        let rel = format!("{stem}.hivb");
        write_vector_file(&out.join(&rel), &iv)?;
        manifest.record(out, &rel, "vector")?;
        if args.debug_csv {
            let rel_csv = format!("{stem}.csv");
            let mut w = BufWriter::new(File::create(out.join(&rel_csv))?);
            write_vector_csv(&mut w, &iv)?;
            drop(w);
            manifest.record(out, &rel_csv, "vector-debug")?;
        }
        let tau = args.tau_ratio * iv.max_abs();
        let report = sparsity_report(&iv, args.tau_ratio)?;
        total_salient += report.salient_count;
        total_count += report.total_count;
        residual_worst = residual_worst.max(report.residual_max);
        rows.push((stem.clone(), table.n(), tau, report));
    }

    let report_rel = format!("sparsity.{}", args.format.extension());
    let mut w = BufWriter::new(File::create(out.join(&report_rel))?);
    match args.format {
        ReportFormat::Csv => {
            writeln!(w, "sample,n,tau,salient_count,total_count,residual_max")?;
            for (stem, n, tau, r) in &rows {
                writeln!(
                    w,
                    "{stem},{n},{tau},{},{},{}",
                    r.salient_count, r.total_count, r.residual_max
                )?;
            }
            writeln!(w, "all,,,{total_salient},{total_count},{residual_worst}")?;
        }
        ReportFormat::Jsonl => {
            for (stem, n, tau, r) in &rows {
                let row = serde_json::json!({
                    "sample": stem,
                    "n": n,
                    "tau": tau,
                    "salient_count": r.salient_count,
                    "total_count": r.total_count,
                    "residual_max": r.residual_max,
                });
                writeln!(w, "{row}")?;
            }
            let all = serde_json::json!({
                "sample": "all",
                "salient_count": total_salient,
                "total_count": total_count,
                "residual_max": residual_worst,
            });
            writeln!(w, "{all}")?;
        }
    }
    drop(w);
    manifest.record(out, &report_rel, "report")?;
    manifest.write(out)?;
    println!(
        "wrote {} interaction vectors to {} (salient {total_salient}/{total_count}, worst residual {residual_worst:.3e})",
        rows.len(),
        out.display()
    );
    Ok(())
}
