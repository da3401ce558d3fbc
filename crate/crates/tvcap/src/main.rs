use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tvcap::app::{self, AppError, ExtractRequest, ParadoxRequest};
use tvcap::waveform::parse_number;
use tvcap::ScenarioConfig;

/// Time-varying capacitor laboratory.
#[derive(Parser)]
#[command(name = "tvcap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print its energy report.
    Simulate {
        config: PathBuf,
        /// Trajectory CSV; overrides the file's `out` key.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Energy report CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Synthesize the worst-case periodic current for a capacitance profile.
    Extract {
        /// Capacitance as `kind: params`, e.g. `fourier: 0.5; 2; ; 1`.
        #[arg(long)]
        capacitance: String,
        /// Harmonic order N of the current family.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Period of C; taken from a Fourier profile when omitted.
        #[arg(long, value_parser = number)]
        period: Option<f64>,
        /// Coefficient norm of the reported current.
        #[arg(long, value_parser = number)]
        amplitude: Option<f64>,
        /// Grid steps per period (even).
        #[arg(long)]
        steps: Option<usize>,
        /// Write the current as a scenario-file `[I]` section.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the energy-form matrix as CSV.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Write the one-period `Q,V` curve as CSV.
        #[arg(long)]
        lissajous: Option<PathBuf>,
    },
    /// Capacitance ramp at fixed charge, swept over ramp times.
    Paradox {
        #[arg(long = "q", default_value = "1", value_parser = number)]
        charge: f64,
        #[arg(long, default_value = "1", value_parser = number)]
        c0: f64,
        /// End factor: C goes from C0 to k·C0.
        #[arg(long, default_value = "2", value_parser = number)]
        k: f64,
        /// Comma-separated ramp times.
        #[arg(long, default_value = "1,0.1,0.01,0.001", value_delimiter = ',', value_parser = number)]
        t_sweep: Vec<f64>,
        /// Grid steps across each ramp.
        #[arg(long, default_value_t = tvcap_core::paradox::DEFAULT_RAMP_STEPS)]
        steps: usize,
        /// Table CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn number(s: &str) -> Result<f64, String> {
    parse_number(s).map_err(|e| e.0)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Simulate { config, out, report } => {
            let cfg = ScenarioConfig::load(&config)?;
            let result = app::simulate(&cfg, out.as_deref(), report.as_deref())?;
            print!("{}", result.summary);
            if let Some(p) = result.written {
                println!("wrote {}", p.display());
            }
        }
        Command::Extract {
            capacitance,
            order,
            period,
            amplitude,
            steps,
            out,
            matrix,
            lissajous,
        } => {
            let result = app::extract(&ExtractRequest {
                capacitance: &capacitance,
                order: order as usize,
                period,
                amplitude,
                steps,
                out: out.as_deref(),
                matrix: matrix.as_deref(),
                lissajous: lissajous.as_deref(),
            })?;
            print!("{}", result.summary);
            print!("{}", result.config_snippet);
        }
        Command::Paradox {
            charge,
            c0,
            k,
            t_sweep,
            steps,
            out,
        } => {
            let (rows, limit) = app::paradox(&ParadoxRequest {
                charge,
                c0,
                factor: k,
                ramps: &t_sweep,
                steps,
                out: out.as_deref(),
            })?;
            print!("{}", app::paradox_table(&rows, limit));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tvcap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
