//! `fockloop` command-line interface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 verification failure.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fockloop::optimize::{optimize, Objective, OptimizeSpec};
use fockloop::sweep::{format_float, sweep, write_csv, AxisGrid, Metric, SweepSpec};
use fockloop::verify::{verify, VerifySpec};
use fockloop::wigner::{negativity, wigner_state, GridSpec};
use fockloop::{run, DiagonalFockState, Efficiency, FockError, IterationConfig, RunSummary};

const SCHEMA_VERSION: u32 = 1;
const THREADS_ENV: &str = "FOCKLOOP_THREADS";

#[derive(Parser)]
#[command(
    name = "fockloop",
    version,
    about = "Iterated photon addition in a beam-splitter loop"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one pulse train and print its summary.
    Run {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a (tau, eta) grid.
    Sweep {
        #[arg(long)]
        n: usize,
        /// start:stop:count
        #[arg(long, default_value = "0:1:41")]
        tau_grid: AxisGrid,
        /// start:stop:count
        #[arg(long, default_value = "0:1:41")]
        eta_grid: AxisGrid,
        /// Comma-separated subset of probability,fidelity,purity
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "probability,fidelity,purity"
        )]
        metrics: Vec<Metric>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the transmittance maximising an objective at fixed efficiency.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value = "fidelity")]
        objective: Objective,
        #[arg(long, default_value_t = 1e-3)]
        tau_resolution: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the Wigner function of a run's output state.
    Wigner {
        /// Number of pulses; 0 exports the vacuum.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Grid covers [-half-width, half-width] on both axes.
        #[arg(long, default_value_t = 5.0)]
        half_width: f64,
        /// Samples per axis.
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Negativity report path; defaults to `<out>.negativity.json`, or stderr without --out.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Check the closed forms against the brute-force simulator.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 9)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Io(io::Error),
    VerificationFailed,
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s.into_bytes()
}

fn summary_json(config: &IterationConfig, summary: &RunSummary) -> Value {
    let steps: Vec<Value> = summary
        .steps
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "p_conditional": s.p_conditional.value(),
                "distribution": s.state_after.probs(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "n_pulses": config.n_pulses,
        "tau": config.tau.value(),
        "eta": config.eta.value(),
        "p_net": summary.p_net.value(),
        "fidelity": summary.fidelity.value(),
        "purity": summary.purity.value(),
        "steps": steps,
        "distribution": summary.final_state.probs(),
    })
}

fn cmd_run(
    n: usize,
    tau: f64,
    eta: f64,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let config = IterationConfig::new(n, tau, eta)?;
    let summary = run(&config)?;
    let bytes = match format {
        Format::Json => json_bytes(&summary_json(&config, &summary)),
        Format::Csv => {
            let mut s = String::from("photons,probability\n");
            for (k, p) in summary.final_state.probs().iter().enumerate() {
                s.push_str(&format!("{k},{}\n", format_float(*p)));
            }
            s.into_bytes()
        }
    };
    Ok(emit(out, &bytes)?)
}

fn cmd_sweep(spec: SweepSpec, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let rows = sweep(&spec)?;
    let bytes = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &spec.metrics, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&json!({
            "schema": SCHEMA_VERSION,
            "n_pulses": spec.n_pulses,
            "rows": rows,
        })),
    };
    Ok(emit(out, &bytes)?)
}

fn cmd_optimize(spec: OptimizeSpec, out: Option<&Path>) -> Result<(), CliError> {
    let result = optimize(&spec)?;
    let value = json!({
        "schema": SCHEMA_VERSION,
        "n_pulses": spec.n_pulses,
        "eta": spec.eta.value(),
        "objective": spec.objective.to_string(),
        "tau_resolution": spec.tau_resolution,
        "tau_star": result.tau_star,
        "objective_value": result.objective_value,
        "scan_best": result.scan_best,
        "flat": result.flat,
        "curve": result.curve,
    });
    Ok(emit(out, &json_bytes(&value))?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_wigner(
    n: usize,
    tau: f64,
    eta: f64,
    half_width: f64,
    points: usize,
    out: Option<&Path>,
    sidecar: Option<&Path>,
) -> Result<(), CliError> {
    let state = if n == 0 {
        DiagonalFockState::vacuum()
    } else {
        run(&IterationConfig::new(n, tau, eta)?)?.final_state
    };
    let grid = wigner_state(&state, &GridSpec::square(half_width, points))?;
    let report = negativity(&grid)?;

    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    emit(out, &csv)?;

    let side = json_bytes(&json!({
        "schema": SCHEMA_VERSION,
        "n_pulses": n,
        "tau": tau,
        "eta": eta,
        "distribution": state.probs(),
        "min_value": report.min_value,
        "integral": report.integral,
        "negative_volume": report.negative_volume,
    }));
    let side_path = sidecar
        .map(Path::to_path_buf)
        .or_else(|| out.map(|p| p.with_extension("negativity.json")));
    match side_path {
        Some(path) => File::create(path)?.write_all(&side)?,
        None => io::stderr().lock().write_all(&side)?,
    }
    Ok(())
}

fn cmd_verify(max_n: usize, grid: usize, out: Option<&Path>) -> Result<(), CliError> {
    let report = verify(&VerifySpec::uniform(max_n, grid))?;
    eprintln!("checks: {}", report.checks);
    eprintln!("max step deviation: {:e}", report.max_step_deviation);
    eprintln!("max run deviation:  {:e}", report.max_run_deviation);
    for d in &report.offenders {
        eprintln!(
            "FAIL {:?} n={} tau={} eta={} deviation={:e}",
            d.kind, d.n, d.tau, d.eta, d.deviation
        );
    }
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["schema"] = json!(SCHEMA_VERSION);
    emit(out, &json_bytes(&value))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            n,
            tau,
            eta,
            format,
            out,
        } => cmd_run(n, tau, eta, format, out.as_deref()),
        Command::Sweep {
            n,
            tau_grid,
            eta_grid,
            metrics,
            format,
            out,
        } => {
            let spec = SweepSpec {
                n_pulses: n,
                tau_grid,
                eta_grid,
                metrics,
            };
            cmd_sweep(spec, format, out.as_deref())
        }
        Command::Optimize {
            n,
            eta,
            objective,
            tau_resolution,
            out,
        } => {
            let spec = OptimizeSpec {
                n_pulses: n,
                eta: Efficiency::new(eta)?,
                objective,
                tau_resolution,
            };
            cmd_optimize(spec, out.as_deref())
        }
        Command::Wigner {
            n,
            tau,
            eta,
            half_width,
            points,
            out,
            sidecar,
        } => cmd_wigner(
            n,
            tau,
            eta,
            half_width,
            points,
            out.as_deref(),
            sidecar.as_deref(),
        ),
        Command::Verify { max_n, grid, out } => cmd_verify(max_n, grid, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_count().and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Io(io::Error::other(e)))?;
        pool.install(|| dispatch(cli.command))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::VerificationFailed) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
