//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical
//! failure (non-convergence under `--strict`, invalid density matrix).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, RunConfig};
use crate::eom::{phase_slopes, required_ramp_slope, EomSpec};
use crate::experiments::{
    evaluate_ramp, format_sig, format_sig_padded, gating_tradeoff, sweep_delay, sweep_mismatch, write_gating_csv,
    Grid, Method,
};
use crate::metrics::MetricsReport;
use crate::montecarlo::average_density;
use crate::state::DensityMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fss-comp", version, about = "Fine-structure-splitting compensation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Average the pair state for one configuration and print its metrics.
    Simulate {
        #[command(flatten)]
        input: ConfigArgs,
        /// Write the averaged density matrix to this file.
        #[arg(long, value_name = "PATH")]
        dump_rho: Option<PathBuf>,
        /// Exit with status 2 if the Monte Carlo average did not converge.
        #[arg(long)]
        strict: bool,
    },
    /// Metrics over a grid of slope mismatches.
    SweepMismatch {
        #[command(flatten)]
        input: ConfigArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        d1_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        d1_max: f64,
        #[arg(long, default_value_t = 41)]
        d1_steps: usize,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        d2_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        d2_max: f64,
        #[arg(long, default_value_t = 41)]
        d2_steps: usize,
    },
    /// Metrics versus branch timing detuning at perfect compensation.
    SweepDelay {
        #[command(flatten)]
        input: ConfigArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dt_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        dt_max: f64,
        #[arg(long, default_value_t = 121)]
        steps: usize,
    },
    /// Acceptance versus entanglement for time-gated post-selection.
    GateTradeoff {
        #[command(flatten)]
        input: ConfigArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 0.05)]
        gate_min: f64,
        #[arg(long, default_value_t = 10.0)]
        gate_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Modulator voltage slope and phase slopes that cancel a given splitting.
    DesignRamp {
        /// Half-wave voltage for V polarization, volts.
        #[arg(long)]
        vpi_v: f64,
        /// Half-wave voltage for H polarization, volts.
        #[arg(long)]
        vpi_h: f64,
        /// Fine structure splitting, μeV.
        #[arg(long)]
        fss: f64,
    },
    /// Check a density matrix file written by `simulate --dump-rho`.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Configuration file.
    #[arg(value_name = "CONFIG", required_unless_present = "config")]
    config_pos: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "config_pos")]
    config: Option<PathBuf>,
    /// Override the method given in the configuration.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// CSV destination; standard output if omitted.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Failure carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERIC, message: message.into() }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            InvalidParameter { .. } | NonFinite(_) | DegenerateHalfWave(_) | Parse(_) | MissingExcitonEnergy => {
                Failure::config(e.to_string())
            }
            _ => Failure::numeric(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::config(format!("{}: {e}", path.display()))
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load_config(input: &ConfigArgs) -> Result<RunConfig, Failure> {
    let path = input
        .config
        .as_ref()
        .or(input.config_pos.as_ref())
        .ok_or_else(|| Failure::config("a configuration file is required"))?;
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut cfg = parse_config(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    if input.method.is_some() {
        cfg.method = input.method;
    }
    Ok(cfg)
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| io_failure(p, e)),
        None => stdout.write_all(body).map_err(|e| Failure::config(format!("stdout: {e}"))),
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Simulate { input, dump_rho, strict } => {
            let cfg = load_config(&input)?;
            simulate(&cfg, dump_rho.as_deref(), strict, stdout, stderr)
        }
        Command::SweepMismatch { input, out, d1_min, d1_max, d1_steps, d2_min, d2_max, d2_steps } => {
            let cfg = load_config(&input)?;
            let method = cfg.method.unwrap_or(Method::Analytic);
            let res = sweep_mismatch(
                &cfg.cascade,
                Grid::new(d1_min, d1_max, d1_steps),
                Grid::new(d2_min, d2_max, d2_steps),
                &cfg.mc,
                method,
            )?;
            let mut buf = Vec::new();
            res.write_csv(&mut buf).expect("writing to memory");
            write_output(out.output.as_deref(), stdout, &buf)?;
            Ok(EXIT_OK)
        }
        Command::SweepDelay { input, out, dt_min, dt_max, steps } => {
            let cfg = load_config(&input)?;
            let method = cfg.method.unwrap_or(Method::Analytic);
            let res = sweep_delay(&cfg.cascade, Grid::new(dt_min, dt_max, steps), &cfg.mc, method)?;
            let mut buf = Vec::new();
            res.write_csv(&mut buf).expect("writing to memory");
            write_output(out.output.as_deref(), stdout, &buf)?;
            Ok(EXIT_OK)
        }
        Command::GateTradeoff { input, out, gate_min, gate_max, steps } => {
            let cfg = load_config(&input)?;
            let rows = gating_tradeoff(&cfg.cascade, Grid::new(gate_min, gate_max, steps))?;
            let mut buf = Vec::new();
            write_gating_csv(&rows, &mut buf).expect("writing to memory");
            write_output(out.output.as_deref(), stdout, &buf)?;
            Ok(EXIT_OK)
        }
        Command::DesignRamp { vpi_v, vpi_h, fss } => {
            let spec = EomSpec::new(vpi_v, vpi_h)?;
            let dv_dt = required_ramp_slope(&spec, fss)?;
            let (k_v, k_h) = phase_slopes(&spec, dv_dt);
            let lines = format!(
                "dv_dt_v_per_ns  {}\nk_v_rad_per_ns  {}\nk_h_rad_per_ns  {}\ndelta_k_rad_ns  {}\n",
                format_sig_padded(dv_dt, 4),
                format_sig_padded(k_v, 4),
                format_sig_padded(k_h, 4),
                format_sig_padded(k_v - k_h, 4),
            );
            stdout.write_all(lines.as_bytes()).map_err(|e| Failure::config(format!("stdout: {e}")))?;
            Ok(EXIT_OK)
        }
        Command::Validate { file, tol } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Failure::config(format!("--tol must be > 0, got {tol}")));
            }
            let text = fs::read_to_string(&file).map_err(|e| io_failure(&file, e))?;
            let rho: DensityMatrix = text
                .parse()
                .map_err(|e: crate::Error| Failure::config(format!("{}: {e}", file.display())))?;
            let report = rho.validate(tol);
            writeln!(stdout, "{report}").map_err(|e| Failure::config(format!("stdout: {e}")))?;
            if report.passed {
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_NUMERIC)
            }
        }
    }
}

fn simulate(
    cfg: &RunConfig,
    dump_rho: Option<&Path>,
    strict: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    let ramp = cfg.ramp.resolve(&cfg.cascade);
    let method = cfg.method.unwrap_or(Method::MonteCarlo);
    let (rho, n_samples, converged, change) = match method {
        Method::MonteCarlo => {
            let res = average_density(&cfg.cascade, &ramp, &cfg.mc)?;
            (res.rho, res.n_samples, Some(res.converged), Some(res.last_rel_change))
        }
        Method::Analytic => {
            let (rho, n) = evaluate_ramp(&cfg.cascade, &ramp, &cfg.mc, method)?;
            (rho, n, None, None)
        }
    };
    let report = MetricsReport::of(&rho)?;

    let mut text = String::new();
    text.push_str(&format!("method              {method}\n"));
    text.push_str(&format!("n_samples           {n_samples}\n"));
    if let (Some(conv), Some(change)) = (converged, change) {
        text.push_str(&format!("converged           {conv}\n"));
        text.push_str(&format!("last_rel_change     {}\n", format_sig(change, 4)));
    }
    text.push_str(&format!("fidelity_phi_plus   {}\n", format_sig_padded(report.fidelity_phi_plus, 4)));
    text.push_str(&format!("fidelity_phi_minus  {}\n", format_sig_padded(report.fidelity_phi_minus, 4)));
    text.push_str(&format!("concurrence         {}\n", format_sig_padded(report.concurrence, 4)));
    text.push_str(&format!("purity              {}\n", format_sig_padded(report.purity, 4)));
    stdout.write_all(text.as_bytes()).map_err(|e| Failure::config(format!("stdout: {e}")))?;

    if let Some(path) = dump_rho {
        fs::write(path, rho.to_string()).map_err(|e| io_failure(path, e))?;
    }

    if converged == Some(false) {
        let _ = writeln!(
            stderr,
            "warning: average did not converge within {} samples (last relative change {})",
            n_samples,
            format_sig(change.unwrap_or(f64::INFINITY), 4)
        );
        if strict {
            return Ok(EXIT_NUMERIC);
        }
    }
    Ok(EXIT_OK)
}
