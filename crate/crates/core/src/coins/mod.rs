//! Coin operators for games A and B, classical angle calibration, and the
//! sequence compiler.

mod sequence;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{apply_left, ComplexMatrix};

pub use sequence::{parse_sequence, GameKind, SequencePlan, Step, MAX_QUBITS};

const ANGLE_SLACK: f64 = 1e-12;

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !(value >= min - ANGLE_SLACK && value <= max + ANGLE_SLACK) {
        return Err(Error::OutOfRange { name, value, min, max });
    }
    Ok(())
}

/// Rotation angle and two phases of a single SU(2) coin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinParams {
    theta: f64,
    gamma: f64,
    delta: f64,
}

impl CoinParams {
    /// `theta` in `[-π, π]`, `gamma` and `delta` in `[0, 2π]`.
    pub fn new(theta: f64, gamma: f64, delta: f64) -> Result<Self> {
        check_range("theta", theta, -PI, PI)?;
        check_range("gamma", gamma, 0.0, TAU)?;
        check_range("delta", delta, 0.0, TAU)?;
        Ok(Self { theta, gamma, delta })
    }

    pub fn identity() -> Self {
        Self {
            theta: 0.0,
            gamma: 0.0,
            delta: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// The four history-selected coins of game B, indexed by the history bits
/// `00, 01, 10, 11`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BCoinParams {
    pub coins: [CoinParams; 4],
}

impl BCoinParams {
    pub fn identity() -> Self {
        Self {
            coins: [CoinParams::identity(); 4],
        }
    }

    pub fn phi(&self) -> [f64; 4] {
        self.coins.map(|c| c.theta)
    }

    pub fn alpha(&self) -> [f64; 4] {
        self.coins.map(|c| c.gamma)
    }

    pub fn beta(&self) -> [f64; 4] {
        self.coins.map(|c| c.delta)
    }
}

/// Quantum phases of both games. Rotation angles are not part of this.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Phases {
    pub gamma: f64,
    pub delta: f64,
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
}

impl Phases {
    /// Phases with the β angles set by [`max_payoff_phases`].
    pub fn max_payoff(delta: f64) -> Self {
        Self {
            delta,
            beta: max_payoff_phases(delta),
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameConfig {
    pub epsilon: f64,
    pub coin_a: CoinParams,
    pub coin_b: BCoinParams,
}

impl GameConfig {
    /// All coins at the identity; every game leaves the register unchanged.
    pub fn identity() -> Self {
        Self {
            epsilon: 0.0,
            coin_a: CoinParams::identity(),
            coin_b: BCoinParams::identity(),
        }
    }
}

pub const MAX_EPSILON: f64 = 0.1;

/// Classical winning probabilities for coin A and coins B1..B4.
pub fn classical_probabilities(epsilon: f64) -> (f64, [f64; 4]) {
    (
        0.5 - epsilon,
        [0.7 - epsilon, 0.25 - epsilon, 0.25 - epsilon, 0.9 - epsilon],
    )
}

/// Chooses rotation angles whose squared sines equal the classical winning
/// probabilities for bias `epsilon`; phases are copied through.
pub fn calibrate_classical(epsilon: f64, phases: &Phases) -> Result<GameConfig> {
    check_range("epsilon", epsilon, 0.0, MAX_EPSILON)?;
    let epsilon = epsilon.clamp(0.0, MAX_EPSILON);
    let (p_a, p_b) = classical_probabilities(epsilon);
    let angle = |p: f64| p.sqrt().asin();
    let coin_a = CoinParams::new(angle(p_a), phases.gamma, phases.delta)?;
    let mut coins = [CoinParams::identity(); 4];
    for i in 0..4 {
        coins[i] = CoinParams::new(angle(p_b[i]), phases.alpha[i], phases.beta[i])?;
    }
    Ok(GameConfig {
        epsilon,
        coin_a,
        coin_b: BCoinParams { coins },
    })
}

fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// β phases that maximise the payoff for a given δ: `β₁ = β₄ = −2δ` and
/// `β₂ = β₃ = π − 2δ`, reduced into `[0, 2π)`.
pub fn max_payoff_phases(delta: f64) -> [f64; 4] {
    let outer = normalize_angle(-2.0 * delta);
    let inner = normalize_angle(PI - 2.0 * delta);
    [outer, inner, inner, outer]
}

/// The SU(2) coin
///
/// ```text
/// [ e^{-i(γ+δ)/2} cos θ   -e^{-i(γ-δ)/2} sin θ ]
/// [ e^{ i(γ-δ)/2} sin θ    e^{ i(γ+δ)/2} cos θ ]
/// ```
pub fn make_coin_a(p: &CoinParams) -> ComplexMatrix {
    let (s, c) = p.theta.sin_cos();
    let sum = 0.5 * (p.gamma + p.delta);
    let diff = 0.5 * (p.gamma - p.delta);
    ComplexMatrix::from_rows([
        [Complex64::from_polar(c, -sum), -Complex64::from_polar(s, -diff)],
        [Complex64::from_polar(s, diff), Complex64::from_polar(c, sum)],
    ])
}

/// Block-diagonal 8×8 operator with coin `i` acting on the target when the
/// two history qubits read `i` in binary.
pub fn make_coin_b(p: &BCoinParams) -> ComplexMatrix {
    let mut b = ComplexMatrix::zeros(8).expect("8 is within the size limit");
    for (block, coin) in p.coins.iter().enumerate() {
        let a = make_coin_a(coin);
        for r in 0..2 {
            for c in 0..2 {
                b[(2 * block + r, 2 * block + c)] = a[(r, c)];
            }
        }
    }
    b
}

/// Operator of a single step together with the qubits it acts on, most
/// significant first.
pub fn step_operator(step: &Step, cfg: &GameConfig) -> (ComplexMatrix, Vec<usize>) {
    match step.history {
        None => (make_coin_a(&cfg.coin_a), vec![step.target]),
        Some((older, newer)) => (make_coin_b(&cfg.coin_b), vec![older, newer, step.target]),
    }
}

/// Full register unitary for a compiled sequence, earliest game applied first.
pub fn build_unitary(plan: &SequencePlan, cfg: &GameConfig) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(plan.dim()?)?;
    for step in plan.games() {
        let (op, qubits) = step_operator(step, cfg);
        u = apply_left(&op, &qubits, &u)?;
    }
    Ok(u)
}
