//! Report emission: per-order decomposition tables, ratio tables,
//! trajectory rows, and the optional per-subset dump. CSV is the
//! primary form; JSON lines mirror the same rows.

use std::io::Write;

use serde::Serialize;

use crate::decompose::{KnowledgeDecomposition, OrderDecomposition};
use crate::error::Result;
use crate::ratio::PooledRatio;
use crate::trajectory::TrajectoryRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Jsonl,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(ReportFormat::Csv),
            "jsonl" => Some(ReportFormat::Jsonl),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Jsonl => "jsonl",
        }
    }
}

#[derive(Serialize)]
struct OrderRow {
    order: usize,
    pretrain: f64,
    finetune: f64,
    preserve: f64,
    discard: f64,
    new: f64,
}

/// Per-order rows: order, pretrain, finetune, preserve, discard, new.
pub fn write_order_decomposition(
    w: &mut impl Write,
    od: &OrderDecomposition,
    format: ReportFormat,
) -> Result<()> {
    if format == ReportFormat::Csv {
        writeln!(w, "order,pretrain,finetune,preserve,discard,new")?;
    }
    for order in 0..od.preserve.len() {
        let row = OrderRow {
            order,
            pretrain: od.pretrain[order],
            finetune: od.finetune[order],
            preserve: od.preserve[order],
            discard: od.discard[order],
            new: od.new[order],
        };
        match format {
            ReportFormat::Csv => writeln!(
                w,
                "{},{},{},{},{},{}",
                row.order, row.pretrain, row.finetune, row.preserve, row.discard, row.new
            )?,
            ReportFormat::Jsonl => {
                serde_json::to_writer(&mut *w, &row).map_err(std::io::Error::other)?;
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RatioRow<'a> {
    order: &'a str,
    ratio: Option<f64>,
    defined: usize,
    excluded: usize,
}

/// Per-order ratio rows plus a trailing `all` aggregate row. Undefined
/// ratios (no subset with preserved knowledge) stay empty/null.
pub fn write_ratio_report(
    w: &mut impl Write,
    pr: &PooledRatio,
    format: ReportFormat,
) -> Result<()> {
    if format == ReportFormat::Csv {
        writeln!(w, "order,ratio,defined,excluded")?;
    }
    let mut rows: Vec<(String, Option<f64>, usize, usize)> = pr
        .per_order
        .iter()
        .enumerate()
        .map(|(order, ratio)| {
            (
                order.to_string(),
                *ratio,
                pr.per_order_defined[order],
                pr.per_order_excluded[order],
            )
        })
        .collect();
    rows.push((
        "all".to_string(),
        pr.aggregate,
        pr.defined_count,
        pr.excluded_count,
    ));
    for (order, ratio, defined, excluded) in rows {
        match format {
            ReportFormat::Csv => {
                let cell = ratio.map(|r| r.to_string()).unwrap_or_default();
                writeln!(w, "{order},{cell},{defined},{excluded}")?;
            }
            ReportFormat::Jsonl => {
                let row = RatioRow {
                    order: &order,
                    ratio,
                    defined,
                    excluded,
                };
                serde_json::to_writer(&mut *w, &row).map_err(std::io::Error::other)?;
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryRow<'a> {
    variant: &'a str,
    epoch: usize,
    jaccard: f64,
    samples_n: usize,
}

/// Rows: variant, epoch, jaccard, samples_n.
pub fn write_trajectory_report(
    w: &mut impl Write,
    records: &[TrajectoryRecord],
    format: ReportFormat,
) -> Result<()> {
    if format == ReportFormat::Csv {
        writeln!(w, "variant,epoch,jaccard,samples_n")?;
    }
    for r in records {
        match format {
            ReportFormat::Csv => writeln!(
                w,
                "{},{},{},{}",
                r.variant.as_str(),
                r.epoch,
                r.similarity,
                r.samples
            )?,
            ReportFormat::Jsonl => {
                let row = TrajectoryRow {
                    variant: r.variant.as_str(),
                    epoch: r.epoch,
                    jaccard: r.similarity,
                    samples_n: r.samples,
                };
                serde_json::to_writer(&mut *w, &row).map_err(std::io::Error::other)?;
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SubsetRow<'a> {
    sample: &'a str,
    mask: usize,
    pretrain: f64,
    finetune: f64,
    preserve: f64,
    discard: f64,
    new: f64,
}

/// Full per-subset dump of one or more decompositions.
pub fn write_subset_dump<'a>(
    w: &mut impl Write,
    decomps: impl IntoIterator<Item = (&'a str, &'a KnowledgeDecomposition)>,
    format: ReportFormat,
) -> Result<()> {
    if format == ReportFormat::Csv {
        writeln!(w, "sample,mask,pretrain,finetune,preserve,discard,new")?;
    }
    for (sample, d) in decomps {
        for mask in 0..d.len() {
            let row = SubsetRow {
                sample,
                mask,
                pretrain: d.pretrain_strength(mask),
                finetune: d.finetune_strength(mask),
                preserve: d.preserve()[mask],
                discard: d.discard()[mask],
                new: d.new_knowledge()[mask],
            };
            match format {
                ReportFormat::Csv => writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    row.sample,
                    row.mask,
                    row.pretrain,
                    row.finetune,
                    row.preserve,
                    row.discard,
                    row.new
                )?,
                ReportFormat::Jsonl => {
                    serde_json::to_writer(&mut *w, &row).map_err(std::io::Error::other)?;
                    writeln!(w)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, order_decomposition};
    use crate::ratio::{learnability_ratio, pooled_ratio};
    use crate::trajectory::Variant;
    use lattice_core::InteractionVector;

    fn iv(d: &[f64]) -> InteractionVector {
        let n = d.len().trailing_zeros() as u8;
        InteractionVector::new(n, d.to_vec()).unwrap()
    }

    #[test]
    fn order_csv_shape() {
        let d = decompose(&iv(&[0.0, 3.0]), &iv(&[0.0, 2.0])).unwrap();
        let od = order_decomposition(&[d]).unwrap();
        let mut buf = Vec::new();
        write_order_decomposition(&mut buf, &od, ReportFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "order,pretrain,finetune,preserve,discard,new\n0,0,0,0,0,0\n1,3,2,2,1,0\n"
        );
    }

    #[test]
    fn ratio_csv_has_aggregate_row_and_blank_undefined() {
        let r = learnability_ratio(&iv(&[0.0, 3.0]), &iv(&[0.0, 2.0]), &iv(&[0.0, 1.0])).unwrap();
        let pooled = pooled_ratio(&[r]).unwrap();
        let mut buf = Vec::new();
        write_ratio_report(&mut buf, &pooled, ReportFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "order,ratio,defined,excluded\n0,,0,1\n1,0.5,1,0\nall,0.5,1,1\n"
        );
    }

    #[test]
    fn trajectory_rows_in_both_formats() {
        let records = vec![
            TrajectoryRecord {
                variant: Variant::Finetune,
                epoch: 1,
                similarity: 0.25,
                samples: 4,
            },
            TrajectoryRecord {
                variant: Variant::Finetune,
                epoch: 2,
                similarity: 1.0,
                samples: 4,
            },
        ];
        let mut csv = Vec::new();
        write_trajectory_report(&mut csv, &records, ReportFormat::Csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "variant,epoch,jaccard,samples_n\nfinetune,1,0.25,4\nfinetune,2,1,4\n"
        );

        let mut jsonl = Vec::new();
        write_trajectory_report(&mut jsonl, &records, ReportFormat::Jsonl).unwrap();
        let text = String::from_utf8(jsonl).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["variant"], "finetune");
        assert_eq!(first["jaccard"], 0.25);
        assert_eq!(first["samples_n"], 4);
    }

    #[test]
    fn subset_dump_lists_every_mask() {
        let d = decompose(&iv(&[1.0, -2.0, 0.5, 3.0]), &iv(&[0.5, 2.0, 0.5, -1.0])).unwrap();
        let mut buf = Vec::new();
        write_subset_dump(&mut buf, [("s0", &d)], ReportFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5); // header + 4 masks
        assert!(text.lines().nth(1).unwrap().starts_with("s0,0,"));
    }
}
