//! Run parameters gathered from a config file and command-line flags, and
//! their conversion into game and noise configurations.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::config::{parse_bool, ConfigFile};
use super::numeric::{parse_angle, parse_fraction, parse_grid, Grid};
use crate::coins::{calibrate_classical, max_payoff_phases, BCoinParams, CoinParams, GameConfig, Phases};
use crate::engine::PayoffConvention;
use crate::error::{Error, Result};
use crate::noise::{ChannelKind, NoiseSpec};

/// Parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVar {
    P,
    Delta,
    /// Zero-based index into β₁..β₄.
    Beta(usize),
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepVar::P => f.write_str("p"),
            SweepVar::Delta => f.write_str("delta"),
            SweepVar::Beta(i) => write!(f, "beta{}", i + 1),
        }
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepVar::P),
            "delta" => Ok(SweepVar::Delta),
            "beta1" => Ok(SweepVar::Beta(0)),
            "beta2" => Ok(SweepVar::Beta(1)),
            "beta3" => Ok(SweepVar::Beta(2)),
            "beta4" => Ok(SweepVar::Beta(3)),
            _ => Err(Error::parse(0, format!("unknown sweep variable {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConventionChoice {
    Fixed(PayoffConvention),
    /// Pick the convention by calibrating against the closed forms.
    Auto,
}

impl FromStr for ConventionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(ConventionChoice::Auto)
        } else {
            s.parse().map(ConventionChoice::Fixed)
        }
    }
}

/// Everything a payoff or sweep run can be told. `None` means "not given".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub seq: Option<String>,
    pub channels: Vec<ChannelKind>,
    pub p: Option<f64>,
    pub eps: Option<f64>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub phi: [Option<f64>; 4],
    pub alpha: [Option<f64>; 4],
    pub beta: [Option<f64>; 4],
    pub max_phases: bool,
    pub classical: bool,
    pub identity_coins: bool,
    pub convention: Option<ConventionChoice>,
    pub var: Option<SweepVar>,
    pub grid: Option<Grid>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

fn at(e: Error, base: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: base + offset,
            message,
        },
        other => other,
    }
}

pub fn parse_channels(text: &str) -> Result<Vec<ChannelKind>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let name = part.trim();
        let lead = part.len() - part.trim_start().len();
        out.push(name.parse().map_err(|e| at(e, offset + lead))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

impl Settings {
    pub fn from_config(cfg: &ConfigFile) -> Result<Self> {
        let mut s = Settings::default();
        for e in &cfg.entries {
            let v = e.value.as_str();
            let angle = || parse_angle(v).map_err(|err| at(err, e.offset));
            let index = |prefix: &str| e.key[prefix.len()..].parse::<usize>().expect("validated key") - 1;
            match e.key.as_str() {
                "seq" => s.seq = Some(v.to_string()),
                "eps" => s.eps = Some(parse_fraction(v).map_err(|err| at(err, e.offset))?),
                "theta" => s.theta = Some(angle()?),
                "gamma" => s.gamma = Some(angle()?),
                "delta" => s.delta = Some(angle()?),
                k if k.starts_with("phi") => s.phi[index("phi")] = Some(angle()?),
                k if k.starts_with("alpha") => s.alpha[index("alpha")] = Some(angle()?),
                k if k.starts_with("beta") => s.beta[index("beta")] = Some(angle()?),
                "max_phases" => s.max_phases = parse_bool(v, e.offset)?,
                "classical" => s.classical = parse_bool(v, e.offset)?,
                "identity_coins" => s.identity_coins = parse_bool(v, e.offset)?,
                "convention" => s.convention = Some(v.parse().map_err(|err| at(err, e.offset))?),
                "channel" => s.channels = parse_channels(v).map_err(|err| at(err, e.offset))?,
                "p" => s.p = Some(parse_fraction(v).map_err(|err| at(err, e.offset))?),
                "var" => s.var = Some(v.parse().map_err(|err| at(err, e.offset))?),
                "grid" => s.grid = Some(parse_grid(v).map_err(|err| at(err, e.offset))?),
                "jobs" => {
                    s.jobs = Some(
                        v.parse()
                            .ok()
                            .filter(|&n| n > 0)
                            .ok_or_else(|| Error::parse(e.offset, format!("invalid job count {v:?}")))?,
                    )
                }
                "out" => s.out = Some(PathBuf::from(v)),
                other => unreachable!("config parser admitted unknown key {other}"),
            }
        }
        Ok(s)
    }

    /// `other` wins wherever it sets a value.
    pub fn overlay(self, other: Settings) -> Settings {
        fn pick<T>(base: Option<T>, top: Option<T>) -> Option<T> {
            top.or(base)
        }
        fn pick4(base: [Option<f64>; 4], top: [Option<f64>; 4]) -> [Option<f64>; 4] {
            std::array::from_fn(|i| top[i].or(base[i]))
        }
        Settings {
            seq: pick(self.seq, other.seq),
            channels: if other.channels.is_empty() {
                self.channels
            } else {
                other.channels
            },
            p: pick(self.p, other.p),
            eps: pick(self.eps, other.eps),
            theta: pick(self.theta, other.theta),
            gamma: pick(self.gamma, other.gamma),
            delta: pick(self.delta, other.delta),
            phi: pick4(self.phi, other.phi),
            alpha: pick4(self.alpha, other.alpha),
            beta: pick4(self.beta, other.beta),
            max_phases: self.max_phases || other.max_phases,
            classical: self.classical || other.classical,
            identity_coins: self.identity_coins || other.identity_coins,
            convention: pick(self.convention, other.convention),
            var: pick(self.var, other.var),
            grid: pick(self.grid, other.grid),
            jobs: pick(self.jobs, other.jobs),
            out: pick(self.out, other.out),
        }
    }

    pub fn sequence(&self) -> Result<&str> {
        self.seq
            .as_deref()
            .ok_or_else(|| Error::parse(0, "no game sequence given (use --seq)"))
    }

    pub fn is_set(&self, var: SweepVar) -> bool {
        match var {
            SweepVar::P => self.p.is_some(),
            SweepVar::Delta => self.delta.is_some(),
            SweepVar::Beta(i) => self.beta[i].is_some(),
        }
    }

    pub fn with(&self, var: SweepVar, value: f64) -> Settings {
        let mut s = self.clone();
        match var {
            SweepVar::P => s.p = Some(value),
            SweepVar::Delta => s.delta = Some(value),
            SweepVar::Beta(i) => s.beta[i] = Some(value),
        }
        s
    }

    fn rotations_given(&self) -> bool {
        self.theta.is_some() || self.phi.iter().any(Option::is_some)
    }

    /// Rotation angles come from the classical calibration when asked for,
    /// or when only a bias is given; otherwise from the angle settings.
    pub fn game_config(&self) -> Result<GameConfig> {
        if self.identity_coins {
            return Ok(GameConfig::identity());
        }
        let delta = self.delta.unwrap_or(0.0);
        let beta = if self.max_phases {
            if self.beta.iter().any(Option::is_some) {
                return Err(Error::parse(
                    0,
                    "--max-phases fixes beta1..beta4; drop the explicit values",
                ));
            }
            max_payoff_phases(delta)
        } else {
            self.beta.map(|b| b.unwrap_or(0.0))
        };
        let phases = Phases {
            gamma: self.gamma.unwrap_or(0.0),
            delta,
            alpha: self.alpha.map(|a| a.unwrap_or(0.0)),
            beta,
        };
        let classical = self.classical || (self.eps.is_some() && !self.rotations_given());
        if classical {
            if self.rotations_given() {
                return Err(Error::parse(
                    0,
                    "--classical sets theta and phi1..phi4; drop the explicit values",
                ));
            }
            return calibrate_classical(self.eps.unwrap_or(0.0), &phases);
        }
        let coin_a = CoinParams::new(self.theta.unwrap_or(0.0), phases.gamma, phases.delta)?;
        let mut coins = [CoinParams::identity(); 4];
        for (i, coin) in coins.iter_mut().enumerate() {
            *coin = CoinParams::new(self.phi[i].unwrap_or(0.0), phases.alpha[i], phases.beta[i])?;
        }
        Ok(GameConfig {
            epsilon: self.eps.unwrap_or(0.0),
            coin_a,
            coin_b: BCoinParams { coins },
        })
    }

    pub fn noise(&self, channel: ChannelKind) -> Result<NoiseSpec> {
        match channel {
            ChannelKind::None => Ok(NoiseSpec::noiseless()),
            kind => NoiseSpec::new(kind, self.p.unwrap_or(0.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config;
    use std::f64::consts::PI;

    #[test]
    fn config_values_are_typed() {
        let cfg = parse_config(
            "[game]\nseq = AAB\neps = 1/168\ndelta = pi/5\nbeta4 = pi/3\nclassical = true\n[noise]\nchannel = ad,pd\np = 0.25\n[sweep]\nvar = beta2\ngrid = 0:2pi:5\njobs = 2\n",
        )
        .unwrap();
        let s = Settings::from_config(&cfg).unwrap();
        assert_eq!(s.seq.as_deref(), Some("AAB"));
        assert_eq!(s.eps, Some(1.0 / 168.0));
        assert_eq!(s.delta, Some(PI / 5.0));
        assert_eq!(s.beta[3], Some(PI / 3.0));
        assert!(s.classical);
        assert_eq!(
            s.channels,
            vec![ChannelKind::AmplitudeDamping, ChannelKind::PhaseDamping]
        );
        assert_eq!(s.var, Some(SweepVar::Beta(1)));
        assert_eq!(s.grid.unwrap().count, 5);
        assert_eq!(s.jobs, Some(2));
    }

    #[test]
    fn bad_values_report_their_offset() {
        let text = "[noise]\nchannel = ad, xx\n";
        let cfg = parse_config(text).unwrap();
        match Settings::from_config(&cfg) {
            Err(Error::Parse { offset, .. }) => assert_eq!(&text[offset..offset + 2], "xx"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let file = Settings {
            seq: Some("AAB".into()),
            p: Some(0.5),
            channels: vec![ChannelKind::Depolarizing],
            ..Settings::default()
        };
        let flags = Settings {
            p: Some(0.1),
            ..Settings::default()
        };
        let s = file.overlay(flags);
        assert_eq!(s.seq.as_deref(), Some("AAB"));
        assert_eq!(s.p, Some(0.1));
        assert_eq!(s.channels, vec![ChannelKind::Depolarizing]);
    }

    #[test]
    fn bias_alone_implies_classical_angles() {
        let s = Settings {
            eps: Some(1.0 / 168.0),
            ..Settings::default()
        };
        let cfg = s.game_config().unwrap();
        let expected = calibrate_classical(1.0 / 168.0, &Phases::default()).unwrap();
        assert_eq!(cfg, expected);
    }

    #[test]
    fn conflicting_settings_rejected() {
        let s = Settings {
            classical: true,
            theta: Some(0.1),
            ..Settings::default()
        };
        assert!(s.game_config().is_err());
        let s = Settings {
            max_phases: true,
            beta: [Some(0.1), None, None, None],
            ..Settings::default()
        };
        assert!(s.game_config().is_err());
        let s = Settings {
            theta: Some(4.0),
            ..Settings::default()
        };
        assert!(s.game_config().is_err());
    }

    #[test]
    fn noiseless_channel_ignores_p() {
        let s = Settings {
            p: Some(0.7),
            ..Settings::default()
        };
        assert_eq!(s.noise(ChannelKind::None).unwrap(), NoiseSpec::noiseless());
        assert_eq!(s.noise(ChannelKind::PhaseDamping).unwrap().p(), 0.7);
    }
}
