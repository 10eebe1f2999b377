use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use povmlab::cli::config::{Format, SweepConfig};
use povmlab::cli::figures::{figure, GammaOverride};
use povmlab::cli::scan::subspace_scan;
use povmlab::cli::table::Table;
use povmlab::cli::validate::validate;

#[derive(Parser, Debug)]
#[command(name = "povmlab", version, about = "POVM analysis of Ramsey-type atomic beam experiments")]
struct Cli {
    /// TOML sweep configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format, overriding the configuration.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every closed-form/simulation cross-check and print a JSON report.
    Validate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data of one figure.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        id: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        gamma_max: Option<f64>,
    },
    /// Tabulate span dimensions of the number-readout and two-atom POVMs.
    SubspaceScan {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_table(t: &Table, cfg: &SweepConfig, out: Option<PathBuf>) -> Result<(), String> {
    let path = out.or_else(|| cfg.output.path.clone());
    emit(&t.render(cfg.output.format), path.as_deref())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let mut cfg = match &cli.config {
        Some(p) => SweepConfig::load(p).map_err(|e| e.to_string())?,
        None => SweepConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    match cli.command {
        Command::Validate { out } => {
            let report = validate(&cfg);
            emit(&(report.to_json() + "\n"), out.as_deref())?;
            match report.first_failure() {
                None => Ok(ExitCode::SUCCESS),
                Some(c) => {
                    eprintln!(
                        "{} of {} checks failed; first: {} at gamma={}, phi={}, delta={}, nu_tau={}, omega_t1={}: {}",
                        report.failed,
                        report.total,
                        c.name,
                        c.gamma,
                        c.phi,
                        c.delta,
                        c.nu_tau,
                        c.omega_t1,
                        c.detail.as_deref().unwrap_or("")
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Figure { id, out, steps, gamma_max } => {
            let t = figure(id, &cfg, GammaOverride { steps, gamma_max }).map_err(|e| e.to_string())?;
            emit_table(&t, &cfg, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SubspaceScan { out } => {
            let t = subspace_scan(&cfg).map_err(|e| e.to_string())?;
            emit_table(&t, &cfg, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
