use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhe_otto::config::{parse_config_with_preset, parse_workers};
use qhe_otto::{run_sweep, write_csv, SweepError, SweepRow};
use qhe_otto_core::HeatForm;

const WORKERS_ENV: &str = "QHE_OTTO_WORKERS";

#[derive(Parser)]
#[command(
    name = "qhe-otto",
    version,
    about = "Two-level quantum Otto engine: cycles and parameter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeatFormArg {
    Derived,
    Printed,
}

impl From<HeatFormArg> for HeatForm {
    fn from(h: HeatFormArg) -> Self {
        match h {
            HeatFormArg::Derived => HeatForm::Derived,
            HeatFormArg::Printed => HeatForm::AsPrinted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DriveArg {
    Lz,
    Inv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Quintic,
    Sine,
    Sextic,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write one CSV row per grid point.
    Sweep {
        /// Sweep document (`key = value` lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Built-in sweep: fig2, fig3, fig4, fig5, fig6 or appendixB.
        #[arg(long)]
        preset: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads [default: $QHE_OTTO_WORKERS, else all cores].
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum)]
        heat_form: Option<HeatFormArg>,
    },
    /// Run a single cycle and print it as CSV.
    Cycle {
        /// Duration of each unitary stroke.
        #[arg(long)]
        tau: f64,
        /// Gap ratio eps2/eps1, in (0, 1].
        #[arg(long)]
        ratio: f64,
        #[arg(long, value_enum, default_value = "lz")]
        drive: DriveArg,
        /// Integration constant of the invariant drive.
        #[arg(long = "A", value_name = "A")]
        a_const: Option<f64>,
        #[arg(long, value_enum, default_value = "quintic")]
        protocol: ProtocolArg,
        /// Initial gap half-width [default: 4].
        #[arg(long)]
        eps1: Option<f64>,
        /// Fixed transverse field [default: 0.1 * eps1].
        #[arg(long)]
        x: Option<f64>,
        /// Hot bath inverse temperature [default: 0.01 / eps1].
        #[arg(long)]
        beta1: Option<f64>,
        /// Cold bath inverse temperature [default: 4 * beta1].
        #[arg(long)]
        beta2: Option<f64>,
        /// Propagator grid points.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        heat_form: Option<HeatFormArg>,
    },
}

#[derive(Debug, thiserror::Error)]
enum Fatal {
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("{0}")]
    Usage(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(rows) => {
            let skipped = rows.iter().filter(|r| r.is_skipped()).count();
            eprintln!("rows={} skipped={}", rows.len(), skipped);
            if skipped > 0 {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("qhe-otto: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Vec<SweepRow>, Fatal> {
    match cli.command {
        Command::Sweep {
            config,
            preset,
            out,
            workers,
            heat_form,
        } => {
            if config.is_none() && preset.is_none() {
                return Err(Fatal::Usage(
                    "sweep needs --config, --preset, or both".into(),
                ));
            }
            let text = match &config {
                Some(path) => fs::read_to_string(path).map_err(|source| SweepError::Io {
                    path: path.clone(),
                    source,
                })?,
                None => String::new(),
            };
            let mut spec =
                parse_config_with_preset(&text, preset.as_deref()).map_err(SweepError::from)?;
            if let Some(h) = heat_form {
                spec.base.heat_form = h.into();
            }
            let workers = match workers.or(spec.workers) {
                Some(0) => return Err(Fatal::Usage("--workers must be positive".into())),
                Some(n) => Some(n),
                None => env_workers()?,
            };
            let rows = run_sweep(&spec, workers)?;
            match out.or(spec.output) {
                Some(path) => {
                    let file = File::create(&path).map_err(|source| SweepError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    write_csv(&rows, BufWriter::new(file))?;
                }
                None => write_csv(&rows, io::stdout().lock())?,
            }
            Ok(rows)
        }
        Command::Cycle {
            tau,
            ratio,
            drive,
            a_const,
            protocol,
            eps1,
            x,
            beta1,
            beta2,
            n,
            heat_form,
        } => {
            let mut doc = format!("tau = {tau:e}\nratio = {ratio:e}\n");
            match drive {
                DriveArg::Lz => {
                    if a_const.is_some() {
                        return Err(Fatal::Usage("--A only applies to --drive inv".into()));
                    }
                    doc.push_str("drive = lz\n");
                }
                DriveArg::Inv => {
                    let a = a_const.ok_or_else(|| Fatal::Usage("--drive inv needs --A".into()))?;
                    let name = match protocol {
                        ProtocolArg::Quintic => "quintic",
                        ProtocolArg::Sine => "sine",
                        ProtocolArg::Sextic => "sextic",
                    };
                    doc.push_str(&format!("drive = inv\nprotocol = {name}\nA = {a:e}\n"));
                }
            }
            for (key, v) in [("eps1", eps1), ("x", x), ("beta1", beta1), ("beta2", beta2)] {
                if let Some(v) = v {
                    doc.push_str(&format!("{key} = {v:e}\n"));
                }
            }
            if let Some(n) = n {
                doc.push_str(&format!("n = {n}\n"));
            }
            let mut spec = parse_config_with_preset(&doc, None).map_err(SweepError::from)?;
            if let Some(h) = heat_form {
                spec.base.heat_form = h.into();
            }
            let rows = run_sweep(&spec, Some(1))?;
            let mut stdout = io::stdout().lock();
            write_csv(&rows, &mut stdout)?;
            stdout.flush().map_err(|source| SweepError::Io {
                path: "<stdout>".into(),
                source,
            })?;
            Ok(rows)
        }
    }
}

fn env_workers() -> Result<Option<usize>, Fatal> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => parse_workers(&v)
            .map(Some)
            .ok_or_else(|| Fatal::Usage(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}
