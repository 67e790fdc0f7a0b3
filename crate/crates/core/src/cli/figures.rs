//! Parameter sets of the nine published payoff figures.

use std::f64::consts::PI;

use super::numeric::Grid;
use super::settings::{Settings, SweepVar};
use super::sweep::{evaluate, Curve, SweepRow};
use crate::coins::{calibrate_classical, parse_sequence, Phases};
use crate::engine::{play_plan, Normalization, PayoffConvention, QubitMask};
use crate::error::{Error, Result};
use crate::noise::{ChannelKind, NoiseSpec};
use crate::oracle::{eq18_series_aab, eq20_bb, eq21_bbb, OracleResult};

pub const FIGURES: std::ops::RangeInclusive<u32> = 1..=9;

const MAIN_EPSILON: f64 = 1.0 / 168.0;
const INSET_EPSILON: f64 = 1.0 / 112.0;
const PHASE_GRID_POINTS: usize = 81;
const P_GRID_POINTS: usize = 51;

/// Single-`AAB` figure: all channels plus the noiseless reference, labelled
/// `none`.
fn single_game(
    var: SweepVar,
    p: Option<f64>,
    delta: Option<f64>,
    beta: [Option<f64>; 4],
) -> (SweepVar, Grid, Settings) {
    let grid = match var {
        SweepVar::P => Grid {
            start: 0.0,
            stop: 1.0,
            count: P_GRID_POINTS,
        },
        _ => Grid {
            start: 0.0,
            stop: 2.0 * PI,
            count: PHASE_GRID_POINTS,
        },
    };
    let settings = Settings {
        seq: Some("AAB".into()),
        channels: vec![
            ChannelKind::AmplitudeDamping,
            ChannelKind::Depolarizing,
            ChannelKind::PhaseDamping,
            ChannelKind::None,
        ],
        eps: Some(MAIN_EPSILON),
        classical: true,
        p,
        delta,
        beta,
        ..Settings::default()
    };
    (var, grid, settings)
}

/// Sweep variable, grid and fixed parameters of figures 1 to 6.
pub fn single_game_preset(n: u32) -> Option<(SweepVar, Grid, Settings)> {
    let half = Some(0.5);
    let pi = |num: f64, den: f64| Some(num * PI / den);
    Some(match n {
        1 => single_game(
            SweepVar::P,
            None,
            pi(1.0, 5.0),
            [pi(1.0, 2.0), pi(1.0, 2.0), pi(1.0, 4.0), pi(1.0, 3.0)],
        ),
        2 => single_game(
            SweepVar::Delta,
            half,
            None,
            [pi(1.0, 2.0), pi(1.0, 3.0), pi(1.0, 4.0), pi(1.0, 3.0)],
        ),
        3 => single_game(
            SweepVar::Beta(0),
            half,
            pi(1.0, 2.0),
            [None, pi(1.0, 3.0), pi(1.0, 2.0), pi(1.0, 1.0)],
        ),
        4 => single_game(
            SweepVar::Beta(1),
            half,
            pi(1.0, 1.0),
            [pi(1.0, 2.0), None, pi(1.0, 1.0), pi(1.0, 2.0)],
        ),
        5 => single_game(
            SweepVar::Beta(2),
            half,
            pi(1.0, 2.0),
            [pi(2.0, 1.0), pi(1.0, 6.0), None, pi(1.0, 1.0)],
        ),
        6 => single_game(
            SweepVar::Beta(3),
            half,
            pi(1.0, 2.0),
            [pi(1.0, 4.0), pi(1.0, 4.0), pi(1.0, 4.0), None],
        ),
        _ => return None,
    })
}

type Oracle = fn(f64, f64, ChannelKind) -> OracleResult;

/// Multi-game figure over `p` at the maximum-payoff phases (δ = 0): simulated
/// AD and DP curves followed by the closed-form curves, per bias.
fn multi_game_curves<'a>(
    seq: &str,
    oracle: Oracle,
    conv: PayoffConvention,
    biases: &[(f64, &'a str)],
) -> Result<Vec<Curve<'a>>> {
    let plan = parse_sequence(seq)?;
    let channels = [ChannelKind::AmplitudeDamping, ChannelKind::Depolarizing];
    let mut curves = Vec::new();
    for &(epsilon, suffix) in biases {
        let cfg = calibrate_classical(epsilon, &Phases::max_payoff(0.0))?;
        for ch in channels {
            let (plan, conv) = (plan.clone(), conv.clone());
            curves.push(Curve::new(format!("{}{suffix}", ch.name()), move |p| {
                Ok(play_plan(&plan, &cfg, &NoiseSpec::new(ch, p)?, &conv)?.payoff)
            }));
        }
        for ch in channels {
            curves.push(Curve::new(format!("oracle-{}{suffix}", ch.name()), move |p| {
                Ok(oracle(epsilon, p, ch).value)
            }));
        }
    }
    Ok(curves)
}

/// CSV rows of figure `n`.
pub fn figure_rows(n: u32, jobs: usize) -> Result<Vec<SweepRow>> {
    if let Some((var, grid, settings)) = single_game_preset(n) {
        return super::sweep::run_sweep(
            &Settings {
                var: Some(var),
                grid: Some(grid),
                ..settings
            },
            jobs,
        );
    }
    let per_game = PayoffConvention::new(QubitMask::All, Normalization::PerGame);
    let curves = match n {
        7 => multi_game_curves(
            "(AAB)^2",
            eq18_series_aab,
            per_game,
            &[(MAIN_EPSILON, ""), (INSET_EPSILON, "-inset")],
        )?,
        8 => multi_game_curves("BB", eq20_bb, PayoffConvention::default(), &[(INSET_EPSILON, "")])?,
        9 => multi_game_curves("BBB", eq21_bbb, PayoffConvention::default(), &[(INSET_EPSILON, "")])?,
        _ => {
            return Err(Error::OutOfRange {
                name: "figure",
                value: n as f64,
                min: 1.0,
                max: 9.0,
            })
        }
    };
    let grid = Grid::new(0.0, 1.0, P_GRID_POINTS)?;
    evaluate("p", &grid.values(), &curves, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_rows() {
        for n in FIGURES {
            let rows = figure_rows(n, 2).unwrap();
            assert!(!rows.is_empty(), "figure {n}");
            assert!(rows.iter().all(|r| r.payoff.is_finite()));
        }
        assert!(figure_rows(0, 1).is_err());
        assert!(figure_rows(10, 1).is_err());
    }

    #[test]
    fn caption_parameters() {
        let (var, grid, s) = single_game_preset(3).unwrap();
        assert_eq!(var, SweepVar::Beta(0));
        assert_eq!(grid.stop, 2.0 * PI);
        assert_eq!(s.p, Some(0.5));
        assert_eq!(s.delta, Some(PI / 2.0));
        assert_eq!(s.beta, [None, Some(PI / 3.0), Some(PI / 2.0), Some(PI)]);
        let (var, _, s) = single_game_preset(6).unwrap();
        assert_eq!(var, SweepVar::Beta(3));
        assert_eq!(s.beta[..3], [Some(PI / 4.0); 3]);
    }

    #[test]
    fn multi_game_labels() {
        let rows = figure_rows(7, 1).unwrap();
        let labels: Vec<&str> = rows.iter().take(8).map(|r| r.channel.as_str()).collect();
        assert_eq!(
            labels,
            [
                "ad",
                "dp",
                "oracle-ad",
                "oracle-dp",
                "ad-inset",
                "dp-inset",
                "oracle-ad-inset",
                "oracle-dp-inset"
            ]
        );
        assert_eq!(rows.len(), 51 * 8);
    }
}
