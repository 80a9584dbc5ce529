use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vvlab::harness::SweepCase;
use vvlab_cli::commands;
use vvlab_cli::config::ExperimentConfig;
use vvlab_cli::{with_threads, Result};

#[derive(Parser)]
#[command(name = "vvlab", version, about = "Vanishing-viscosity experiments in a periodic channel")]
struct Cli {
    /// Worker threads; affects speed only.
    #[arg(long, global = true, env = "VVLAB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration; writes checkpoints and norms.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Viscosity sweep; writes rates.csv, ratefit.csv, bounds.csv and layer.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Norm report of a checkpoint.
    Norms {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Supplies thermodynamics and the wall law for ghost values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// CSV file to write; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log .dat files and slope guides from a rates.csv.
    Plotdata {
        #[arg(long)]
        rates: PathBuf,
        #[arg(long, default_value = "flat_special")]
        case: String,
        #[arg(long, default_value = "plot")]
        out: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let r = with_threads(cli.threads, || commands::run_experiment(&cfg, &out))??;
            println!("{} checkpoints, {} steps", r.checkpoints.len(), r.stats.steps);
            if let Some(e) = r.mms {
                println!("mms error: l2 {:.6e} linf {:.6e}", e.l2, e.linf);
            }
        }
        Command::Sweep { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let r = with_threads(cli.threads, || commands::sweep(&cfg, &out))??;
            for f in &r.rates.fits {
                println!(
                    "{:>5} slope {:.4} (target {}, r2 {:.4}) {}",
                    f.channel.name(),
                    f.slope,
                    f.target,
                    f.r_squared,
                    if f.pass { "pass" } else { "fail" }
                );
            }
        }
        Command::Norms {
            checkpoint,
            config,
            order,
            out,
        } => {
            let cfg = config.map(|p| ExperimentConfig::load(&p)).transpose()?;
            let (header, row) = with_threads(cli.threads, || commands::norms(&checkpoint, cfg.as_ref(), order))??;
            match out {
                Some(p) => commands::write_norms(&p, &header, &row)?,
                None => println!("{}\n{}", header.join(","), row.join(",")),
            }
        }
        Command::Plotdata { rates, case, out } => {
            let case = SweepCase::parse(&case)?;
            let s = commands::plotdata(&rates, case, &out)?;
            println!("{} channels written to {}", s.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
