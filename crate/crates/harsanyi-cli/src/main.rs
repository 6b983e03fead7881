//! Game-theoretic interaction analysis for portable models.
//!
//! Exit codes: 0 success, 1 verification/metric failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use knowledge_metrics::ReportFormat;

use harsanyi_cli::commands::{decompose, gen_toy, interactions, table, trajectory, verify};
use harsanyi_cli::errors::{usage, UsageError};
use harsanyi_cli::toy::ToyConfig;

/// Environment variable holding the default output directory.
const OUT_ENV: &str = "HARSANYI_OUT";

#[derive(Parser)]
#[command(
    name = "harsanyi",
    version,
    about = "Harsanyi interactions over masked model outputs: dividends, knowledge decomposition, trajectories"
)]
struct Cli {
    /// Seed recorded in manifests and used by randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for per-mask fan-out (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Output directory (defaults to $HARSANYI_OUT, then ./harsanyi-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format for CSV-like outputs.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Jsonl => ReportFormat::Jsonl,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScorerArg {
    /// Softmax over the model's own logits.
    ModelHead,
    /// Linear probe over penultimate features (needs --probe).
    Probe,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic toy transfer scenario: datasets, three
    /// models, per-epoch checkpoints, and a pretrain probe.
    GenToy {
        /// Downstream variable count (1..=12).
        #[arg(long, default_value_t = 10)]
        variables: usize,
        /// Downstream class count; pretraining uses twice as many.
        #[arg(long, default_value_t = 2)]
        classes: usize,
        /// Overwrite an existing non-empty output directory.
        #[arg(long)]
        force: bool,
    },
    /// Build one masked-output table per dataset sample.
    Table {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = ScorerArg::ModelHead)]
        scorer: ScorerArg,
        /// Probe file, required with --scorer probe.
        #[arg(long)]
        probe: Option<PathBuf>,
        /// Only process the first K samples.
        #[arg(long)]
        max_samples: Option<usize>,
        /// Also write a mask,value CSV next to each binary table.
        #[arg(long)]
        debug_csv: bool,
    },
    /// Compute Harsanyi dividends for every table in a directory, plus
    /// a sparsity report.
    Interactions {
        #[arg(long)]
        tables: PathBuf,
        /// Salience threshold as a fraction of the peak |I|.
        #[arg(long, default_value_t = lattice_core::DEFAULT_TAU_RATIO)]
        tau_ratio: f64,
        #[arg(long)]
        debug_csv: bool,
    },
    /// Per-order preserve/discard/new report between two vector
    /// directories; adds the learnability ratio with --rand.
    Decompose {
        #[arg(long)]
        pre: PathBuf,
        #[arg(long)]
        fine: PathBuf,
        #[arg(long)]
        rand: Option<PathBuf>,
        /// Also dump every subset's strengths.
        #[arg(long)]
        dump_subsets: bool,
    },
    /// Jaccard similarity of each epoch's interactions to the final
    /// epoch's, per variant.
    Trajectory {
        /// Ordered epoch directories of the fine-tuning run.
        #[arg(long, num_args = 1.., value_name = "DIR")]
        finetune_epochs: Vec<PathBuf>,
        /// Ordered epoch directories of the from-scratch run.
        #[arg(long, num_args = 1.., value_name = "DIR")]
        random_epochs: Vec<PathBuf>,
        /// Also render trajectory.svg.
        #[arg(long)]
        chart: bool,
        /// Compare salient interactions only, at this tau ratio.
        #[arg(long)]
        salient_tau_ratio: Option<f64>,
    },
    /// Run the randomized identity suite (round-trip, oracle,
    /// conservation, similarity laws). Exit 1 on any violation.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: u8,
        /// Random tables per variable count.
        #[arg(long, default_value_t = 25)]
        trials: usize,
        /// Corrupt one transform to prove the suite catches it.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn resolve_out(cli_out: Option<PathBuf>) -> PathBuf {
    cli_out
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("harsanyi-out"))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    if cli.jobs > 0 {
        // Ignore the error if a pool is already installed.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let out = resolve_out(cli.out);
    let format = ReportFormat::from(cli.format);

    match cli.command {
        Command::GenToy {
            variables,
            classes,
            force,
        } => {
            if !(1..=12).contains(&variables) {
                return Err(usage(format!(
                    "--variables must lie in 1..=12, got {variables}"
                )));
            }
            let config = ToyConfig {
                seed: cli.seed,
                variables,
                classes,
                ..Default::default()
            };
            gen_toy::run(&out, &config, force)?;
            Ok(0)
        }
        Command::Table {
            model,
            dataset,
            scorer,
            probe,
            max_samples,
            debug_csv,
        } => {
            table::run(
                &out,
                &table::TableArgs {
                    model: &model,
                    dataset: &dataset,
                    scorer: match scorer {
                        ScorerArg::ModelHead => table::ScorerKind::ModelHead,
                        ScorerArg::Probe => table::ScorerKind::Probe,
                    },
                    probe: probe.as_deref(),
                    max_samples,
                    debug_csv,
                    seed: cli.seed,
                },
            )?;
            Ok(0)
        }
        Command::Interactions {
            tables,
            tau_ratio,
            debug_csv,
        } => {
            if !(tau_ratio > 0.0 && tau_ratio < 1.0) {
                return Err(usage(format!(
                    "--tau-ratio must lie strictly inside (0, 1), got {tau_ratio}"
                )));
            }
            interactions::run(
                &out,
                &interactions::InteractionsArgs {
                    tables: &tables,
                    tau_ratio,
                    debug_csv,
                    format,
                    seed: cli.seed,
                },
            )?;
            Ok(0)
        }
        Command::Decompose {
            pre,
            fine,
            rand,
            dump_subsets,
        } => {
            decompose::run(
                &out,
                &decompose::DecomposeArgs {
                    pre: &pre,
                    fine: &fine,
                    rand: rand.as_deref(),
                    dump_subsets,
                    format,
                    seed: cli.seed,
                },
            )?;
            Ok(0)
        }
        Command::Trajectory {
            finetune_epochs,
            random_epochs,
            chart,
            salient_tau_ratio,
        } => {
            trajectory::run(
                &out,
                &trajectory::TrajectoryArgs {
                    finetune_epochs: &finetune_epochs,
                    random_epochs: &random_epochs,
                    chart,
                    salient_tau_ratio,
                    format,
                    seed: cli.seed,
                },
            )?;
            Ok(0)
        }
        Command::Verify {
            n_max,
            trials,
            inject_fault,
        } => verify::run(&verify::VerifyArgs {
            n_max,
            trials,
            seed: cli.seed,
            inject_fault,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            if err.is::<UsageError>() {
                eprintln!("usage error: {err}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(1)
            }
        }
    }
}
