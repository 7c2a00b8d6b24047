use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use radsel::dataset::load_csv;
use radsel::error::StageExt;
use radsel::experiment::{rank_family, run_sweep, ExperimentConfig, ReportFormat, DEFAULT_RELIEFF_K};
use radsel::rank_fusion::RankingFamily;
use radsel::Result;

#[derive(Parser)]
#[command(name = "radsel", about = "Feature ranking and classifier benchmark sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full sweep described by a config file and emit a report.
    Run {
        /// Flat key=value config file.
        #[arg(long)]
        config: PathBuf,
        /// Report path; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format.
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: ReportFormat,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank the features of a labeled CSV with one family's algorithms.
    Rank {
        /// Labeled feature-matrix CSV.
        #[arg(long)]
        train: PathBuf,
        /// Ranking family.
        #[arg(long, value_parser = parse_family)]
        family: RankingFamily,
        /// Output CSV path; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_family(s: &str) -> std::result::Result<RankingFamily, String> {
    match s {
        "supervised" => Ok(RankingFamily::Supervised),
        "unsupervised" => Ok(RankingFamily::Unsupervised),
        _ => Err(format!("unknown family '{s}' (expected supervised|unsupervised)")),
    }
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse::<ReportFormat>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
            seed,
        } => {
            let mut cfg = ExperimentConfig::load(&config).stage("config")?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_sweep(&cfg)?;
            match out {
                Some(path) => report.write(&path, format)?,
                None => {
                    let text = match format {
                        ReportFormat::Json => report.to_json()?,
                        ReportFormat::Csv => report.to_csv(),
                    };
                    println!("{text}");
                }
            }
            Ok(())
        }
        Command::Rank { train, family, out } => {
            let m = load_csv(&train).stage("load-train")?;
            let ranking = rank_family(&m, family, DEFAULT_RELIEFF_K)?;
            let names = match family {
                RankingFamily::Supervised => ["fisher", "relieff", "fnca"],
                RankingFamily::Unsupervised => ["laplacian", "min_correlation", "mcfs"],
            };
            let csv = ranking.to_csv(names);
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| radsel::Error::Report(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}
