//! `cavmix` binary: JSON config in, CSV and JSON artifacts out.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config error (including schema
//! and flag problems), 3 validity error (rigidity bound broken, unphysical
//! state, non-passive pair), 4 numerical failure (quadrature did not
//! converge).

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Needs;

#[derive(Parser)]
#[command(
    name = "cavmix",
    version,
    about = "Bogoliubov blocks, resonance catalogues and Gaussian entanglement \
             for a rigidly accelerated rectangular cavity"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Directory artifacts are written into; created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Report frequencies, rates and times in SI units.
    #[arg(long, conflicts_with = "natural")]
    si: bool,

    /// Report in natural units, 1/m and m (the default).
    #[arg(long)]
    natural: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Subcommand)]
enum Command {
    /// Mode frequencies of the configured cavity.
    Spectrum,
    /// One Bogoliubov block over the configured window.
    Bogoliubov,
    /// Catalogue every resonance of the mode set in a frequency range.
    ResonanceScan,
    /// Desktop optical-cavity numbers: resonance, rate, feasibility.
    Scenario,
    /// Two-mode Gaussian entanglement through the configured block.
    Entangle,
    /// Tracked |Ahat| and |Bhat| entries against window duration.
    Timeseries,
}

impl Command {
    fn needs(self) -> Needs {
        let block = Needs {
            cavity: true,
            modes: true,
            profile: true,
            ..Needs::default()
        };
        match self {
            Command::Spectrum => Needs {
                cavity: true,
                modes: true,
                ..Needs::default()
            },
            Command::Bogoliubov => block,
            Command::ResonanceScan => Needs {
                cavity: true,
                modes: true,
                scan: true,
                ..Needs::default()
            },
            Command::Scenario => Needs {
                scenario: true,
                ..Needs::default()
            },
            Command::Entangle => Needs {
                entangle: true,
                ..block
            },
            Command::Timeseries => Needs {
                timeseries: true,
                ..block
            },
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// One line per problem, each prefixed with the offending field path.
    Config(Vec<String>),
    Compute(cavmix::Error),
    Io(std::io::Error),
}

impl From<cavmix::Error> for CliError {
    fn from(e: cavmix::Error) -> Self {
        CliError::Compute(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use cavmix::Error;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Compute(e) => match e {
                Error::RigidityViolated { .. }
                | Error::NotPassive { .. }
                | Error::InvalidCovariance(_) => 3,
                Error::QuadratureNonConvergence { .. } => 4,
                // Everything else means the config asked for something the
                // library rejects: a config error that slipped past the
                // schema checks.
                _ => 2,
            },
        }
    }

    fn report(&self) {
        match self {
            CliError::Config(errors) => {
                eprintln!("config error:");
                for e in errors {
                    eprintln!("  {e}");
                }
            }
            CliError::Compute(e) => eprintln!("error: {e}"),
            CliError::Io(e) => eprintln!("io error: {e}"),
        }
    }
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    let text = std::fs::read_to_string(&cli.config).map_err(CliError::Io)?;
    let parsed: config::RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(vec![format!("config: {e}")]))?;
    parsed
        .validate(&cli.command.needs())
        .map_err(CliError::Config)?;
    std::fs::create_dir_all(&cli.out).map_err(CliError::Io)?;
    let opts = run::Options {
        out: &cli.out,
        si: cli.si,
    };
    match cli.command {
        Command::Spectrum => run::spectrum(&parsed, &opts),
        Command::Bogoliubov => run::bogoliubov(&parsed, &opts),
        Command::ResonanceScan => run::scan(&parsed, &opts),
        Command::Scenario => run::scenario(&parsed, &opts),
        Command::Entangle => run::entangle(&parsed, &opts),
        Command::Timeseries => run::timeseries(&parsed, &opts),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}
