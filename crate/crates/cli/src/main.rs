mod config;
mod grid;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::PipelineConfig;

#[derive(Parser)]
#[command(
    name = "speclain",
    about = "Explainable graph spectral clustering of text documents",
    version
)]
struct Cli {
    /// Disable all parallelism for byte-reproducible reports.
    #[arg(long, global = true)]
    strict_sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one pipeline config and write its report files.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Stop after the equivalence report (no clustering).
        #[arg(long)]
        verify_only: bool,
    },
    /// Run every config in a directory and tabulate the comparison.
    Grid {
        #[arg(long)]
        configs: PathBuf,
        /// Where to write the summary CSV.
        #[arg(long, default_value = "grid_summary.csv")]
        out: PathBuf,
    },
}

fn init_threads(strict_sequential: bool) {
    let threads = if strict_sequential {
        Some(1)
    } else {
        std::env::var("SPECLAIN_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
    };
    if let Some(n) = threads {
        // a failed build means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.strict_sequential);

    match cli.command {
        Command::Run {
            config,
            verify_only,
        } => {
            let config = match PipelineConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            };
            match pipeline::run(&config, cli.strict_sequential, verify_only) {
                Ok(summary) => {
                    if summary.equivalence_passed {
                        eprintln!(
                            "run complete: {} on {} ({} docs), reports in {}",
                            summary.route,
                            summary.base_space,
                            summary.n_docs,
                            config.output_dir.display()
                        );
                    } else {
                        eprintln!(
                            "equivalence checks FAILED; see {}",
                            config.output_dir.join("equivalence_report.json").display()
                        );
                    }
                    ExitCode::from(pipeline::exit_code(&summary))
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Grid { configs, out } => match grid::grid(&configs, cli.strict_sequential) {
            Ok(outcome) => {
                grid::print_table(&outcome);
                if let Err(e) = grid::write_summary_csv(&outcome, &out) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
                eprintln!("summary written to {}", out.display());
                if outcome.all_equivalences_passed() {
                    ExitCode::from(0)
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
