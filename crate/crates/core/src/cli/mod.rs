//! `parrondoq payoff|sweep|figure|verify`.
//!
//! Exit codes: 0 ok, 1 verify failure or I/O error, 2 usage, 3 size limit,
//! 4 calibration failure.

pub mod config;
pub mod figures;
pub mod numeric;
pub mod settings;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::coins::parse_sequence;
use crate::engine::play_plan;
use crate::error::Error;
use numeric::{format_sig, parse_angle, parse_fraction, parse_grid, Grid};
use settings::{parse_channels, ConventionChoice, Settings, SweepVar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;
pub const EXIT_CALIBRATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "parrondoq", version, about = "Quantum Parrondo games under decoherence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Payoff of one sequence under one channel.
    Payoff(RunArgs),
    /// Payoff over a grid of one parameter, as CSV.
    Sweep(RunArgs),
    /// CSV data of a published figure (1 to 9).
    Figure(FigureArgs),
    /// Cross-check the simulation against the closed-form payoffs.
    Verify(PoolArgs),
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "PARRONDOQ_JOBS", value_parser = parse_jobs)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    pub n: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pool: PoolArgs,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn fraction(s: &str) -> Result<f64, String> {
    parse_fraction(s).map_err(|e| e.to_string())
}

fn grid(s: &str) -> Result<Grid, String> {
    parse_grid(s).map_err(|e| e.to_string())
}

fn channels(s: &str) -> Result<Vec<crate::noise::ChannelKind>, String> {
    parse_channels(s).map_err(|e| e.to_string())
}

fn convention(s: &str) -> Result<ConventionChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn sweep_var(s: &str) -> Result<SweepVar, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_jobs(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive worker count, found {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file with [game], [noise] and [sweep] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Game sequence, e.g. AAB, B^3, (AAB)^2.
    #[arg(long)]
    pub seq: Option<String>,
    /// Noise channel: ad, dp, pd or none. Repeatable; commas also work.
    #[arg(long = "channel", value_parser = channels)]
    pub channel: Vec<Vec<crate::noise::ChannelKind>>,
    #[arg(long, value_parser = fraction)]
    pub p: Option<f64>,
    /// Classical bias, e.g. 1/168.
    #[arg(long, value_parser = fraction)]
    pub eps: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub gamma: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub delta: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub phi1: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub phi2: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub phi3: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub phi4: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub alpha1: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub alpha2: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub alpha3: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub alpha4: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub beta1: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub beta2: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub beta3: Option<f64>,
    #[arg(long, value_parser = angle)]
    pub beta4: Option<f64>,
    /// Set beta1..beta4 to the maximum-payoff phases for delta.
    #[arg(long)]
    pub max_phases: bool,
    /// Derive theta and phi1..phi4 from the classical probabilities for --eps.
    #[arg(long)]
    pub classical: bool,
    /// Use identity coins.
    #[arg(long)]
    pub identity_coins: bool,
    /// all-total, all-pergame, results-total, results-pergame or auto.
    #[arg(long, value_parser = convention)]
    pub convention: Option<ConventionChoice>,
    /// Swept parameter: p, delta or beta1..beta4.
    #[arg(long, value_parser = sweep_var)]
    pub var: Option<SweepVar>,
    /// start:stop:count, inclusive.
    #[arg(long, value_parser = grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pool: PoolArgs,
}

impl RunArgs {
    fn flag_settings(&self) -> Settings {
        Settings {
            seq: self.seq.clone(),
            channels: self.channel.iter().flatten().copied().collect(),
            p: self.p,
            eps: self.eps,
            theta: self.theta,
            gamma: self.gamma,
            delta: self.delta,
            phi: [self.phi1, self.phi2, self.phi3, self.phi4],
            alpha: [self.alpha1, self.alpha2, self.alpha3, self.alpha4],
            beta: [self.beta1, self.beta2, self.beta3, self.beta4],
            max_phases: self.max_phases,
            classical: self.classical,
            identity_coins: self.identity_coins,
            convention: self.convention.clone(),
            var: self.var,
            grid: self.grid,
            jobs: self.pool.jobs,
            out: self.out.clone(),
        }
    }

    /// File values overlaid by flags.
    pub fn settings(&self) -> Result<Settings, Failure> {
        let base = match &self.config {
            None => Settings::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
                let file = config::parse_config(&text).map_err(|e| in_file(path, e))?;
                Settings::from_config(&file).map_err(|e| in_file(path, e))?
            }
        };
        Ok(base.overlay(self.flag_settings()))
    }
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

/// A command outcome other than success.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_size_limit() {
            EXIT_SIZE_LIMIT
        } else if matches!(e, Error::Calibration(_)) {
            EXIT_CALIBRATION
        } else {
            EXIT_USAGE
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn jobs_or_default(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(sweep::default_jobs)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let written = match out {
        Some(path) => std::fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| ("stdout".to_string(), e)),
    };
    written.map_err(|(target, e)| Failure {
        code: EXIT_VERIFY_FAILED,
        message: format!("cannot write {target}: {e}"),
    })
}

fn cmd_payoff(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let s = args.settings()?;
    if s.var.is_some() || s.grid.is_some() {
        return Err(Failure::usage("--var and --grid belong to the sweep command"));
    }
    let channel = match s.channels.as_slice() {
        [one] => *one,
        [] => return Err(Failure::usage("no channel given (use --channel)")),
        _ => {
            return Err(Failure::usage(
                "payoff takes exactly one --channel; use sweep for several",
            ))
        }
    };
    let plan = parse_sequence(s.sequence()?)?;
    let cfg = s.game_config()?;
    let noise = s.noise(channel)?;
    let conv = sweep::resolve_convention(s.convention.as_ref())?;
    let report = play_plan(&plan, &cfg, &noise, &conv)?;
    emit(
        s.out.as_deref(),
        &format!("payoff={}\n", format_sig(report.payoff)),
        stdout,
    )
}

fn cmd_sweep(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let s = args.settings()?;
    let rows = sweep::run_sweep(&s, jobs_or_default(s.jobs))?;
    emit(s.out.as_deref(), &sweep::to_csv(&rows), stdout)
}

fn cmd_figure(args: &FigureArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if !figures::FIGURES.contains(&args.n) {
        return Err(Failure::usage(format!("unknown figure {} (expected 1 to 9)", args.n)));
    }
    let rows = figures::figure_rows(args.n, jobs_or_default(args.pool.jobs))?;
    emit(args.out.as_deref(), &sweep::to_csv(&rows), stdout)
}

fn cmd_verify(args: &PoolArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let report = verify::run_verify(jobs_or_default(args.jobs))?;
    emit(None, &report.to_string(), stdout)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: "verification failed".into(),
        })
    }
}

/// Parses `argv` and runs the command, writing results to `stdout` and
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Payoff(args) => cmd_payoff(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
        Command::Figure(args) => cmd_figure(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
    };
    let _ = stdout.flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "parrondoq: {}", f.message);
            f.code
        }
    }
}
