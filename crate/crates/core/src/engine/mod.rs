//! Game pipeline: entangled initial state, decoherence, unitary evolution
//! and payoff.

pub mod calibrate;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coins::{parse_sequence, step_operator, GameConfig, SequencePlan, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::noise::{apply_channel, NoiseSpec};
use crate::tensor::{conjugate_local, dagger, matmul, ComplexMatrix};

pub use calibrate::{calibrate_convention, calibrate_with, Calibration, CalibrationRow, CalibrationTable, PhaseSet};

const TRACE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates unit trace, Hermiticity and positive semidefiniteness.
    pub fn new(n_qubits: usize, mat: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_parts(n_qubits, mat);
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(n_qubits: usize, mat: ComplexMatrix) -> Self {
        debug_assert_eq!(mat.dim(), 1 << n_qubits);
        Self { n_qubits, mat }
    }

    pub fn check(&self) -> Result<()> {
        if self.mat.dim() != 1usize << self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.mat.dim(),
                right: 1 << self.n_qubits,
            });
        }
        let trace = self.mat.trace();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}")));
        }
        let h = self.mat.hermiticity_residual();
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("hermiticity residual {h:e}")));
        }
        if !self.mat.is_psd(PSD_TOL) {
            return Err(Error::InvalidState("not positive semidefinite".into()));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }
}

/// GHZ state `(|0…0⟩ + |1…1⟩)/√2` over the whole register.
pub fn make_initial_state(n_qubits: usize) -> Result<DensityMatrix> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n_qubits,
            max: MAX_QUBITS,
        });
    }
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::zeros(dim)?;
    let half = Complex64::new(0.5, 0.0);
    for (i, j) in [(0, 0), (0, dim - 1), (dim - 1, 0), (dim - 1, dim - 1)] {
        m[(i, j)] = half;
    }
    Ok(DensityMatrix::from_parts(n_qubits, m))
}

/// Which qubits contribute to the payoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QubitMask {
    All,
    /// Qubits written by a game; seed qubits are left out.
    Results,
    Qubits(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Total,
    PerGame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffConvention {
    pub mask: QubitMask,
    pub normalization: Normalization,
}

impl Default for PayoffConvention {
    fn default() -> Self {
        Self {
            mask: QubitMask::All,
            normalization: Normalization::Total,
        }
    }
}

impl PayoffConvention {
    pub fn new(mask: QubitMask, normalization: Normalization) -> Self {
        Self { mask, normalization }
    }

    /// The conventions [`calibrate_convention`] chooses between.
    pub fn candidates() -> [PayoffConvention; 4] {
        use Normalization::*;
        use QubitMask::*;
        [
            Self::new(All, Total),
            Self::new(All, PerGame),
            Self::new(Results, Total),
            Self::new(Results, PerGame),
        ]
    }
}

impl fmt::Display for PayoffConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mask {
            QubitMask::All => f.write_str("all")?,
            QubitMask::Results => f.write_str("results")?,
            QubitMask::Qubits(qs) => {
                let list: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
                write!(f, "q{}", list.join("+"))?
            }
        }
        f.write_str(match self.normalization {
            Normalization::Total => "-total",
            Normalization::PerGame => "-pergame",
        })
    }
}

impl FromStr for PayoffConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::candidates()
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown payoff convention {s:?}")))
    }
}

/// Register facts a payoff convention needs besides the state itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub seed_count: usize,
    pub game_count: usize,
}

impl Layout {
    /// A register with no seeds where every qubit counts as one game.
    pub fn bare(n_qubits: usize) -> Self {
        Self {
            seed_count: 0,
            game_count: n_qubits,
        }
    }
}

impl From<&SequencePlan> for Layout {
    fn from(plan: &SequencePlan) -> Self {
        Self {
            seed_count: plan.seed_count(),
            game_count: plan.game_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PayoffReport {
    pub payoff: f64,
    /// Expected ±1 score of every register qubit, `|1⟩` counting as a win.
    pub per_qubit: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub convention: PayoffConvention,
}

fn resolve_mask(conv: &PayoffConvention, n_qubits: usize, layout: Layout) -> Result<Vec<usize>> {
    let qubits: Vec<usize> = match &conv.mask {
        QubitMask::All => (0..n_qubits).collect(),
        QubitMask::Results => (layout.seed_count.min(n_qubits)..n_qubits).collect(),
        QubitMask::Qubits(qs) => qs.clone(),
    };
    if qubits.is_empty() {
        return Err(Error::EmptyMask);
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
    }
    Ok(qubits)
}

/// Expected payoff: each basis state's probability weighted by the sum of
/// `±1` over the masked qubits.
pub fn payoff(rho: &DensityMatrix, conv: &PayoffConvention, layout: Layout) -> Result<PayoffReport> {
    let n = rho.n_qubits;
    let mask = resolve_mask(conv, n, layout)?;
    let diagonal = rho.diagonal();
    let sign = |index: usize, q: usize| {
        if (index >> (n - 1 - q)) & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    };
    let mut total = 0.0;
    for (i, &w) in diagonal.iter().enumerate() {
        let score: f64 = mask.iter().map(|&q| sign(i, q)).sum();
        total += score * w;
    }
    let per_qubit = (0..n)
        .map(|q| diagonal.iter().enumerate().map(|(i, &w)| sign(i, q) * w).sum())
        .collect();
    let payoff = match conv.normalization {
        Normalization::Total => total,
        Normalization::PerGame => total / layout.game_count.max(1) as f64,
    };
    Ok(PayoffReport {
        payoff,
        per_qubit,
        diagonal,
        convention: conv.clone(),
    })
}

/// `U ρ U†`.
pub fn evolve(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    let m = matmul(&matmul(u, &rho.mat)?, &dagger(u))?;
    Ok(DensityMatrix::from_parts(rho.n_qubits, m))
}

/// Same result as `evolve(rho, build_unitary(plan, cfg))`, applying each
/// game's local operator in turn instead of forming the register unitary.
pub fn evolve_plan(rho: &DensityMatrix, plan: &SequencePlan, cfg: &GameConfig) -> Result<DensityMatrix> {
    if rho.n_qubits != plan.total_qubits() {
        return Err(Error::DimensionMismatch {
            left: rho.n_qubits,
            right: plan.total_qubits(),
        });
    }
    let mut m = rho.mat.clone();
    for step in plan.games() {
        let (op, qubits) = step_operator(step, cfg);
        m = conjugate_local(&op, &qubits, &m)?;
    }
    Ok(DensityMatrix::from_parts(rho.n_qubits, m))
}

/// Final state of a compiled sequence: GHZ, then noise, then the games.
pub fn final_state(plan: &SequencePlan, cfg: &GameConfig, noise: &NoiseSpec) -> Result<DensityMatrix> {
    let rho = make_initial_state(plan.total_qubits())?;
    let rho = apply_channel(&rho, noise)?;
    evolve_plan(&rho, plan, cfg)
}

pub fn play_plan(
    plan: &SequencePlan,
    cfg: &GameConfig,
    noise: &NoiseSpec,
    conv: &PayoffConvention,
) -> Result<PayoffReport> {
    let rho = final_state(plan, cfg, noise)?;
    payoff(&rho, conv, Layout::from(plan))
}

pub fn play(seq: &str, cfg: &GameConfig, noise: &NoiseSpec, conv: &PayoffConvention) -> Result<PayoffReport> {
    play_plan(&parse_sequence(seq)?, cfg, noise, conv)
}
