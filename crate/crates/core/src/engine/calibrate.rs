//! Chooses the payoff convention for multi-game registers by matching the
//! closed-form `B`, `BB` and `BBB` payoffs.

use std::f64::consts::PI;
use std::fmt;

use crate::coins::{calibrate_classical, parse_sequence, Phases};
use crate::engine::{final_state, payoff, Layout, PayoffConvention};
use crate::error::{Error, Result};
use crate::noise::{ChannelKind, NoiseSpec};
use crate::oracle::{eq19_b, eq20_bb, eq21_bbb, tolerance_for, OracleResult};

/// Tolerance for the exactly printed targets.
pub const EXACT_TOLERANCE: f64 = 1e-6;

pub const CALIBRATION_P: [f64; 3] = [0.0, 0.25, 0.5];
pub const CALIBRATION_EPSILON: [f64; 2] = [1.0 / 168.0, 1.0 / 112.0];

type Target = fn(f64, f64, ChannelKind) -> OracleResult;

const TARGETS: [(&str, Target); 3] = [("B", eq19_b), ("BB", eq20_bb), ("BBB", eq21_bbb)];

/// Phase settings a calibration attempt can use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSet {
    /// `δ = 0` with the maximum-payoff β angles.
    MaxPayoff,
    /// `δ = π/5, β = (π/2, π/2, π/4, π/3)`.
    Figure1,
}

impl PhaseSet {
    pub fn phases(self) -> Phases {
        match self {
            PhaseSet::MaxPayoff => Phases::max_payoff(0.0),
            PhaseSet::Figure1 => Phases {
                delta: PI / 5.0,
                beta: [PI / 2.0, PI / 2.0, PI / 4.0, PI / 3.0],
                ..Phases::default()
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseSet::MaxPayoff => "max-payoff",
            PhaseSet::Figure1 => "figure-1",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationRow {
    pub phase_set: PhaseSet,
    pub convention: PayoffConvention,
    pub sequence: &'static str,
    pub channel: ChannelKind,
    pub p: f64,
    pub epsilon: f64,
    pub simulated: f64,
    pub target: OracleResult,
    pub tolerance: f64,
}

impl CalibrationRow {
    pub fn residual(&self) -> f64 {
        (self.simulated - self.target.value).abs()
    }

    pub fn passes(&self) -> bool {
        self.residual() <= self.tolerance
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CalibrationTable {
    pub rows: Vec<CalibrationRow>,
}

impl CalibrationTable {
    /// `(phase set, convention, max residual, passing rows, total rows)`.
    pub fn summary(&self) -> Vec<(PhaseSet, PayoffConvention, f64, usize, usize)> {
        let mut out: Vec<(PhaseSet, PayoffConvention, f64, usize, usize)> = Vec::new();
        for row in &self.rows {
            match out
                .iter_mut()
                .find(|(ps, c, ..)| *ps == row.phase_set && *c == row.convention)
            {
                Some(entry) => {
                    entry.2 = entry.2.max(row.residual());
                    entry.3 += row.passes() as usize;
                    entry.4 += 1;
                }
                None => out.push((
                    row.phase_set,
                    row.convention.clone(),
                    row.residual(),
                    row.passes() as usize,
                    1,
                )),
            }
        }
        out
    }

    fn passing(&self, phase_set: PhaseSet) -> Option<PayoffConvention> {
        self.summary()
            .into_iter()
            .find(|(ps, _, _, ok, n)| *ps == phase_set && ok == n)
            .map(|(_, c, ..)| c)
    }
}

impl fmt::Display for CalibrationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "phases,convention,sequence,formula,channel,p,epsilon,simulated,target,residual,tolerance,status"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{},{},{},{},{},{},{:.6},{:.9},{:.9},{:.3e},{:.0e},{}",
                r.phase_set.name(),
                r.convention,
                r.sequence,
                r.target.formula,
                r.channel,
                r.p,
                r.epsilon,
                r.simulated,
                r.target.value,
                r.residual(),
                r.tolerance,
                if r.passes() { "pass" } else { "fail" },
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub convention: PayoffConvention,
    pub phase_set: PhaseSet,
    pub table: CalibrationTable,
}

/// Simulates every calibration point once under `phase_set` and scores all
/// candidate conventions against the closed forms.
pub fn residual_table(phase_set: PhaseSet) -> Result<CalibrationTable> {
    let mut rows = Vec::new();
    for (seq, target) in TARGETS {
        let plan = parse_sequence(seq)?;
        for epsilon in CALIBRATION_EPSILON {
            let cfg = calibrate_classical(epsilon, &phase_set.phases())?;
            for channel in ChannelKind::NOISY {
                for p in CALIBRATION_P {
                    let rho = final_state(&plan, &cfg, &NoiseSpec::new(channel, p)?)?;
                    let expected = target(epsilon, p, channel);
                    for convention in PayoffConvention::candidates() {
                        let simulated = payoff(&rho, &convention, Layout::from(&plan))?.payoff;
                        rows.push(CalibrationRow {
                            phase_set,
                            convention,
                            sequence: seq,
                            channel,
                            p,
                            epsilon,
                            simulated,
                            target: expected,
                            tolerance: tolerance_for(expected.formula, EXACT_TOLERANCE),
                        });
                    }
                }
            }
        }
    }
    Ok(CalibrationTable { rows })
}

pub fn calibrate_with(phase_set: PhaseSet) -> Result<Calibration> {
    let table = residual_table(phase_set)?;
    match table.passing(phase_set) {
        Some(convention) => Ok(Calibration {
            convention,
            phase_set,
            table,
        }),
        None => Err(Error::Calibration(Box::new(table))),
    }
}

/// Tries the maximum-payoff phases first, then the figure-1 phases. On
/// failure the error carries the residual table of both attempts.
pub fn calibrate_convention() -> Result<Calibration> {
    let mut combined = CalibrationTable::default();
    for phase_set in [PhaseSet::MaxPayoff, PhaseSet::Figure1] {
        match calibrate_with(phase_set) {
            Ok(c) => return Ok(c),
            Err(Error::Calibration(table)) => combined.rows.extend(table.rows),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Calibration(Box::new(combined)))
}
