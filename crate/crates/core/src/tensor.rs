//! Dense complex matrices over qubit registers.
//!
//! Storage is row-major. Qubit `q` of an `n`-qubit register maps to bit
//! `n - 1 - q` of the basis index, so qubit 0 is the most significant bit.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix dimension any operation will allocate.
pub const MAX_DIM: usize = 1 << 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::SizeLimit { dim, max: MAX_DIM });
    }
    Ok(())
}

impl ComplexMatrix {
    /// # Panics
    /// Panics if `dim` is zero.
    pub fn zeros(dim: usize) -> Result<Self> {
        assert!(dim >= 1, "matrix dimension must be positive");
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries. The entry count must be a
    /// perfect square.
    pub fn from_vec(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        check_dim(dim)?;
        Ok(Self { dim, data })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self { dim: N, data }
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { dim: N, data }
    }

    pub fn diagonal_matrix(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Positive-semidefiniteness spot check: succeeds iff `self + tol·I`
    /// admits a Cholesky factorisation, i.e. the smallest eigenvalue of the
    /// Hermitian part is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self[(j, j)].re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d.is_nan() || d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in (j + 1)..n {
                let mut s = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product: `out[(i·m + k, j·m + l)] = a[i, j]·b[k, l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim.checked_mul(b.dim).ok_or(Error::SizeLimit {
        dim: usize::MAX,
        max: MAX_DIM,
    })?;
    let mut out = ComplexMatrix::zeros(dim)?;
    let m = b.dim;
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..m {
                let row = (i * m + k) * dim + j * m;
                for l in 0..m {
                    out.data[row + l] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a non-empty list of factors, left to right.
pub fn kron_all<'a, I>(factors: I) -> Result<ComplexMatrix>
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut it = factors.into_iter();
    let first = it.next().expect("kron_all needs at least one factor").clone();
    it.try_fold(first, |acc, f| kron(&acc, f))
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim;
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            data[j * n + i] = a.data[i * n + j].conj();
        }
    }
    ComplexMatrix { dim: n, data }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    let n = a.dim;
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        let out_row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == ZERO {
                continue;
            }
            let b_row = &b.data[k * n..(k + 1) * n];
            for (o, &bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data: out })
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_rows([[ZERO, -i], [i, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
}

/// Basis-index offsets touched by an operator on `qubits`, in the operator's
/// own basis order (first listed qubit most significant).
fn local_offsets(qubits: &[usize], n_qubits: usize) -> (Vec<usize>, usize) {
    let k = qubits.len();
    let mut mask = 0usize;
    let offsets = (0..1usize << k)
        .map(|local| {
            let mut off = 0usize;
            for (pos, &q) in qubits.iter().enumerate() {
                let bit = n_qubits - 1 - q;
                if (local >> (k - 1 - pos)) & 1 == 1 {
                    off |= 1 << bit;
                }
            }
            off
        })
        .collect();
    for &q in qubits {
        mask |= 1 << (n_qubits - 1 - q);
    }
    (offsets, mask)
}

fn check_local(op: &ComplexMatrix, qubits: &[usize], m: &ComplexMatrix) -> Result<usize> {
    let n_qubits = m.dim.trailing_zeros() as usize;
    if 1usize << qubits.len() != op.dim {
        return Err(Error::DimensionMismatch {
            left: op.dim,
            right: 1 << qubits.len(),
        });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        assert!(!qubits[..i].contains(&q), "repeated qubit {q} in operator support");
    }
    Ok(n_qubits)
}

/// `G·m`, where `G` is `op` acting on `qubits` and identity elsewhere.
/// `m.dim()` must be a power of two.
pub fn apply_left(op: &ComplexMatrix, qubits: &[usize], m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n_qubits = check_local(op, qubits, m)?;
    let (offsets, mask) = local_offsets(qubits, n_qubits);
    let n = m.dim;
    let k = op.dim;
    let mut out = vec![ZERO; n * n];
    for base in (0..n).filter(|b| b & mask == 0) {
        for (i, &oi) in offsets.iter().enumerate() {
            let out_row = &mut out[(base + oi) * n..(base + oi + 1) * n];
            for (j, &oj) in offsets.iter().enumerate() {
                let g = op.data[i * k + j];
                if g == ZERO {
                    continue;
                }
                for (o, &x) in out_row.iter_mut().zip(m.row(base + oj)) {
                    *o += g * x;
                }
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data: out })
}

/// `m·G†`, where `G` is `op` acting on `qubits` and identity elsewhere.
pub fn apply_right_adjoint(op: &ComplexMatrix, qubits: &[usize], m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n_qubits = check_local(op, qubits, m)?;
    let (offsets, mask) = local_offsets(qubits, n_qubits);
    let n = m.dim;
    let k = op.dim;
    let mut out = vec![ZERO; n * n];
    let mut gathered = vec![ZERO; k];
    for r in 0..n {
        let src = m.row(r);
        let dst = &mut out[r * n..(r + 1) * n];
        for base in (0..n).filter(|b| b & mask == 0) {
            for (g, &oj) in gathered.iter_mut().zip(&offsets) {
                *g = src[base + oj];
            }
            for (i, &oi) in offsets.iter().enumerate() {
                let row = &op.data[i * k..(i + 1) * k];
                dst[base + oi] = gathered.iter().zip(row).map(|(&x, &g)| x * g.conj()).sum();
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data: out })
}

/// `G·m·G†` for `op` embedded on `qubits`.
pub fn conjugate_local(op: &ComplexMatrix, qubits: &[usize], m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let left = apply_left(op, qubits, m)?;
    apply_right_adjoint(op, qubits, &left)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(dim: usize, seed: u64) -> ComplexMatrix {
        // small LCG, enough to get non-degenerate entries
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let data = (0..dim * dim).map(|_| c(next(), next())).collect();
        ComplexMatrix::from_vec(data).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4).unwrap());
        let p = ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, 0.0]]);
        let pp = kron(&p, &p).unwrap();
        let mut expected = ComplexMatrix::zeros(4).unwrap();
        expected[(0, 0)] = ONE;
        assert_eq!(pp, expected);
    }

    #[test]
    fn kron_x_z_blocks() {
        // [[0, Z], [Z, 0]]
        let expected = ComplexMatrix::from_real_rows([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]);
        assert_eq!(kron(&pauli_x(), &pauli_z()).unwrap(), expected);
    }

    #[test]
    fn kron_size_limit() {
        let big = ComplexMatrix::identity(1 << 7).unwrap();
        let err = kron(&big, &big).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { dim: 16384, .. }));
        assert!(ComplexMatrix::zeros(MAX_DIM + 1).is_err());
    }

    fn gaussian_integers(m: &ComplexMatrix) -> ComplexMatrix {
        let data = m
            .as_slice()
            .iter()
            .map(|z| c((8.0 * z.re).round(), (8.0 * z.im).round()))
            .collect();
        ComplexMatrix::from_vec(data).unwrap()
    }

    #[test]
    fn kron_associative() {
        let (a, b, cc) = (sample(2, 1), sample(2, 2), sample(4, 3));
        // entries exact in binary floating point: equality is exact
        let (ia, ib, ic) = (gaussian_integers(&a), gaussian_integers(&b), gaussian_integers(&cc));
        let left = kron(&kron(&ia, &ib).unwrap(), &ic).unwrap();
        let right = kron(&ia, &kron(&ib, &ic).unwrap()).unwrap();
        assert_eq!(left, right);
        // general entries differ only by rounding of the triple products
        let left = kron(&kron(&a, &b).unwrap(), &cc).unwrap();
        let right = kron(&a, &kron(&b, &cc).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) < 1e-15);
    }

    #[test]
    fn trace_of_kron_is_product() {
        let (a, b) = (sample(4, 7), sample(8, 9));
        let t = kron(&a, &b).unwrap().trace();
        let expected = a.trace() * b.trace();
        assert!((t - expected).norm() <= 1e-12 * expected.norm());
    }

    #[test]
    fn dagger_involution_and_product_rule() {
        let (a, b) = (sample(8, 11), sample(8, 12));
        assert_eq!(dagger(&dagger(&a)), a);
        assert_eq!(
            dagger(&ComplexMatrix::identity(4).unwrap()),
            ComplexMatrix::identity(4).unwrap()
        );
        let lhs = dagger(&matmul(&a, &b).unwrap());
        let rhs = matmul(&dagger(&b), &dagger(&a)).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn matmul_basics() {
        let a = sample(4, 5);
        let id = ComplexMatrix::identity(4).unwrap();
        assert_eq!(matmul(&id, &a).unwrap(), a);
        let x = pauli_x();
        assert_eq!(matmul(&x, &x).unwrap(), ComplexMatrix::identity(2).unwrap());
        let err = matmul(&id, &x).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { left: 4, right: 2 }));
    }

    #[test]
    #[should_panic]
    fn index_out_of_range_panics() {
        let m = ComplexMatrix::identity(2).unwrap();
        let _ = m[(2, 0)];
    }

    #[test]
    fn local_application_matches_embedding() {
        // op on qubits (3, 0) of a 4-qubit register against an explicit
        // permutation-based embedding
        let op = sample(4, 21);
        let m = sample(16, 22);
        let n = 4;
        let mut g = ComplexMatrix::zeros(16).unwrap();
        for row in 0..16usize {
            for col in 0..16usize {
                let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
                let rest_equal = (0..n)
                    .filter(|q| *q != 3 && *q != 0)
                    .all(|q| bit(row, q) == bit(col, q));
                if rest_equal {
                    let lr = bit(row, 3) * 2 + bit(row, 0);
                    let lc = bit(col, 3) * 2 + bit(col, 0);
                    g[(row, col)] = op[(lr, lc)];
                }
            }
        }
        let left = apply_left(&op, &[3, 0], &m).unwrap();
        assert!(left.max_abs_diff(&matmul(&g, &m).unwrap()) < 1e-13);
        let right = apply_right_adjoint(&op, &[3, 0], &m).unwrap();
        assert!(right.max_abs_diff(&matmul(&m, &dagger(&g)).unwrap()) < 1e-13);
    }

    #[test]
    fn psd_check() {
        let mut rho = ComplexMatrix::zeros(4).unwrap();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            rho[(i, j)] = c(0.5, 0.0);
        }
        assert!(rho.is_psd(1e-10));
        assert!(!pauli_z().is_psd(1e-10));
    }
}
