//! Grid evaluation on a worker pool with results kept in grid order.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::numeric::format_sig;
use super::settings::{ConventionChoice, Settings};
use crate::coins::parse_sequence;
use crate::engine::{calibrate_convention, play_plan, PayoffConvention};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "sweep_var,value,channel,payoff";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub var: String,
    pub value: f64,
    pub channel: String,
    pub payoff: f64,
}

/// One labelled series: a payoff as a function of the swept value.
pub struct Curve<'a> {
    pub label: String,
    pub eval: Box<dyn Fn(f64) -> Result<f64> + Sync + 'a>,
}

impl<'a> Curve<'a> {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> Result<f64> + Sync + 'a) -> Self {
        Self {
            label: label.into(),
            eval: Box::new(eval),
        }
    }
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Rows ordered by grid point, then by curve.
pub fn evaluate(var: &str, values: &[f64], curves: &[Curve<'_>], jobs: usize) -> Result<Vec<SweepRow>> {
    let tasks: Vec<(f64, &Curve<'_>)> = values
        .iter()
        .flat_map(|&x| curves.iter().map(move |c| (x, c)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidState(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(x, curve)| {
                Ok(SweepRow {
                    var: var.to_string(),
                    value: x,
                    channel: curve.label.clone(),
                    payoff: (curve.eval)(x)?,
                })
            })
            .collect()
    })
}

pub fn resolve_convention(choice: Option<&ConventionChoice>) -> Result<PayoffConvention> {
    match choice {
        None => Ok(PayoffConvention::default()),
        Some(ConventionChoice::Fixed(c)) => Ok(c.clone()),
        Some(ConventionChoice::Auto) => calibrate_convention().map(|c| c.convention),
    }
}

/// Sweep described by `settings`: one simulated curve per channel.
pub fn run_sweep(settings: &Settings, jobs: usize) -> Result<Vec<SweepRow>> {
    let var = settings
        .var
        .ok_or_else(|| Error::parse(0, "no sweep variable given (use --var)"))?;
    let grid = settings
        .grid
        .ok_or_else(|| Error::parse(0, "no grid given (use --grid start:stop:count)"))?;
    if settings.is_set(var) {
        return Err(Error::parse(0, format!("{var} is swept and cannot also be fixed")));
    }
    if settings.channels.is_empty() {
        return Err(Error::parse(0, "no channel given (use --channel)"));
    }
    let plan = parse_sequence(settings.sequence()?)?;
    let conv = resolve_convention(settings.convention.as_ref())?;
    let values = grid.values();
    // validate every point up front so bad ranges fail before any work starts
    for &x in &values {
        let s = settings.with(var, x);
        s.game_config()?;
        for &ch in &settings.channels {
            s.noise(ch)?;
        }
    }
    let curves: Vec<Curve<'_>> = settings
        .channels
        .iter()
        .map(|&ch| {
            let (plan, conv) = (&plan, &conv);
            Curve::new(ch.name(), move |x| {
                let s = settings.with(var, x);
                Ok(play_plan(plan, &s.game_config()?, &s.noise(ch)?, conv)?.payoff)
            })
        })
        .collect();
    evaluate(&var.to_string(), &values, &curves, jobs)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.var,
            format_sig(r.value),
            r.channel,
            format_sig(r.payoff)
        );
    }
    out
}
