//! Single-qubit Kraus channels and their homogeneous application to every
//! qubit of a register.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::engine::DensityMatrix;
use crate::error::{Error, Result};
use crate::tensor::{conjugate_local, dagger, kron, matmul, pauli_x, pauli_y, pauli_z, ComplexMatrix};

/// Largest register [`lift_enumerated`] will expand.
pub const MAX_ENUMERATED_QUBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    AmplitudeDamping,
    Depolarizing,
    PhaseDamping,
    None,
}

impl ChannelKind {
    pub const NOISY: [ChannelKind; 3] = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::Depolarizing,
        ChannelKind::PhaseDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "ad",
            ChannelKind::Depolarizing => "dp",
            ChannelKind::PhaseDamping => "pd",
            ChannelKind::None => "none",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ad" => Ok(ChannelKind::AmplitudeDamping),
            "dp" => Ok(ChannelKind::Depolarizing),
            "pd" => Ok(ChannelKind::PhaseDamping),
            "none" => Ok(ChannelKind::None),
            _ => Err(Error::parse(
                0,
                format!("unknown channel {s:?} (expected ad, dp, pd or none)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    kind: ChannelKind,
    p: f64,
}

impl NoiseSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Self { kind, p })
    }

    pub fn noiseless() -> Self {
        Self {
            kind: ChannelKind::None,
            p: 0.0,
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// Largest entry of `Σ E†E − I`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim()).expect("kraus dims are bounded");
        for e in &self.ops {
            sum.add_assign(&matmul(&dagger(e), e).expect("uniform kraus dims"));
        }
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim()).expect("bounded"))
    }

    /// `Σ E ρ E†` over the whole register; the operators must span it.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let m = rho.matrix();
        let mut out = ComplexMatrix::zeros(m.dim())?;
        for e in &self.ops {
            let term = matmul(&matmul(e, m)?, &dagger(e))?;
            out.add_assign(&term);
        }
        Ok(DensityMatrix::from_parts(rho.n_qubits(), out))
    }

    /// Applies a single-qubit set to each qubit of the register in turn.
    pub fn apply_each_qubit(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: 2,
            });
        }
        let ops: Vec<&ComplexMatrix> = self.ops.iter().filter(|e| !e.is_zero()).collect();
        let mut m = rho.matrix().clone();
        for q in 0..rho.n_qubits() {
            let mut acc = ComplexMatrix::zeros(m.dim())?;
            for e in &ops {
                acc.add_assign(&conjugate_local(e, &[q], &m)?);
            }
            m = acc;
        }
        Ok(DensityMatrix::from_parts(rho.n_qubits(), m))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Single-qubit Kraus operators for a channel.
pub fn kraus_single(spec: &NoiseSpec) -> KrausSet {
    let p = spec.p;
    let ops = match spec.kind {
        ChannelKind::Depolarizing => {
            let id = ComplexMatrix::identity(2).expect("2x2");
            let (keep, flip) = (real((1.0 - 0.75 * p).sqrt()), real((p / 4.0).sqrt()));
            vec![
                id.scale(keep),
                pauli_x().scale(flip),
                pauli_y().scale(flip),
                pauli_z().scale(flip),
            ]
        }
        ChannelKind::AmplitudeDamping => vec![
            ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]),
            ComplexMatrix::from_real_rows([[0.0, p.sqrt()], [0.0, 0.0]]),
        ],
        ChannelKind::PhaseDamping => vec![
            ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]),
            ComplexMatrix::from_real_rows([[0.0, 0.0], [0.0, p.sqrt()]]),
        ],
        ChannelKind::None => vec![ComplexMatrix::identity(2).expect("2x2")],
    };
    KrausSet { ops }
}

/// Every tensor product of single-qubit operators over `n_qubits` qubits.
/// Exists to cross-check [`apply_channel`]; limited to small registers.
pub fn lift_enumerated(spec: &NoiseSpec, n_qubits: usize) -> Result<KrausSet> {
    if n_qubits == 0 || n_qubits > MAX_ENUMERATED_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n_qubits,
            max: MAX_ENUMERATED_QUBITS,
        });
    }
    let single = kraus_single(spec).ops;
    let mut ops = single.clone();
    for _ in 1..n_qubits {
        let mut next = Vec::with_capacity(ops.len() * single.len());
        for big in &ops {
            for small in &single {
                next.push(kron(big, small)?);
            }
        }
        ops = next;
    }
    Ok(KrausSet { ops })
}

/// Applies the channel to every qubit of `rho`.
pub fn apply_channel(rho: &DensityMatrix, spec: &NoiseSpec) -> Result<DensityMatrix> {
    match spec.kind {
        ChannelKind::None => Ok(rho.clone()),
        ChannelKind::PhaseDamping => dephase(rho, spec.p),
        _ => kraus_single(spec).apply_each_qubit(rho),
    }
}

/// Phase damping in closed form. An entry whose row and column indices
/// differ on `k` qubits shrinks by `(1 − p)^{k/2}`; the Kraus sum gives the
/// same map but rounds the diagonal, which this leaves bit-for-bit intact.
fn dephase(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let m = rho.matrix();
    let dim = m.dim();
    let keep = (1.0 - p).sqrt();
    let factors: Vec<f64> = (0..=rho.n_qubits()).map(|k| keep.powi(k as i32)).collect();
    let mut data = m.as_slice().to_vec();
    for (index, z) in data.iter_mut().enumerate() {
        let differing = ((index / dim) ^ (index % dim)).count_ones() as usize;
        if differing > 0 {
            *z *= factors[differing];
        }
    }
    Ok(DensityMatrix::from_parts(
        rho.n_qubits(),
        ComplexMatrix::from_vec(data)?,
    ))
}
