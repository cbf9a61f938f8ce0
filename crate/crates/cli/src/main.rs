//! `spinphoton`: runs the spin-photon protocols and writes CSV or JSON
//! reports.
//!
//! Exit status: 0 on success, 1 on runtime or circuit errors, 2 on usage
//! errors.

mod commands;
mod config;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinphoton::protocols::GHZ_MAX_PHOTONS;

use config::{CommonArgs, Format, RunConfig, UsageError};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "spinphoton", version, about = "Spin-photon interface simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CNOT truth table with fidelity and success probability.
    CnotTable,
    /// Bell-state analyzer outcomes for the four Bell inputs.
    BsaTable,
    /// GHZ state from N photons and one spin.
    Ghz {
        /// Number of photons (2 to 16).
        #[arg(value_parser = clap::value_parser!(u16).range(2..=GHZ_MAX_PHOTONS as i64))]
        n: u16,
        /// Spin phase in radians accumulated between photons.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        spin_phase: f64,
    },
    /// Transmission contrast and CNOT figures over a (Q/Q0)^2 x F_P grid.
    SweepDelta {
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.6,0.7,0.8,0.9,1")]
        q_values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,4,6,8,10,20")]
        purcell_values: Vec<f64>,
    },
    /// Run a .qc circuit file.
    Run { file: PathBuf },
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| anyhow::anyhow!("cannot create {}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => report.write_csv(&mut w)?,
        Format::Json => report.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: &Cli) -> anyhow::Result<()> {
    let common = &cli.common;
    if let Command::SweepDelta { q_values, purcell_values } = &cli.command {
        let r = commands::sweep_delta(common, q_values, purcell_values)?;
        return emit(&r, common.format.unwrap_or_default(), common.out.as_ref());
    }
    let cfg = RunConfig::from_args(common)?;
    let r = match &cli.command {
        Command::CnotTable => commands::cnot_table(&cfg)?,
        Command::BsaTable => commands::bsa_table(&cfg)?,
        Command::Ghz { n, spin_phase } => commands::ghz_report(&cfg, *n as usize, *spin_phase)?,
        Command::Run { file } => commands::run_circuit(&cfg, file)?,
        Command::SweepDelta { .. } => unreachable!("handled above"),
    };
    emit(&r, cfg.format, cfg.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
