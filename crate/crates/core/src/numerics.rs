//! Complex dense matrices, the numerical eigensolver used as an oracle for
//! every spectral claim, and the tolerance policy shared by the crate.
//!
//! Matrices are small (dimension `N + 1` with `N` at most a few dozen), so the
//! storage is a plain row-major `Vec<Complex64>`. The eigensolver delegates the
//! Schur factorization to `nalgebra` and recovers right eigenvectors by
//! back-substitution on the triangular factor.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Result, Sd2Error};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Numerical thresholds used by builders, checks and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub residual_tol: f64,
    pub eig_match_tol: f64,
    pub degeneracy_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual_tol: 1e-9,
            eig_match_tol: 1e-8,
            degeneracy_tol: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn new(residual_tol: f64, eig_match_tol: f64, degeneracy_tol: f64) -> Result<Self> {
        let t = Self {
            residual_tol,
            eig_match_tol,
            degeneracy_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("eig_match_tol", self.eig_match_tol),
            ("degeneracy_tol", self.degeneracy_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Sd2Error::InvalidParams(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_residual_tol(mut self, residual_tol: f64) -> Result<Self> {
        self.residual_tol = residual_tol;
        self.validate()?;
        Ok(self)
    }
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Sd2Error::DimensionMismatch {
                op: "DenseMatrix::new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Sd2Error::NonFinite("DenseMatrix::new"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Sd2Error::Format("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let owned: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| re(x)).collect())
            .collect();
        Self::from_rows(&owned)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| re(x)).collect();
        Self::diag(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<C64> {
        (i < self.rows && j < self.cols).then(|| self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |imaginary part| over all entries.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Sd2Error::DimensionMismatch {
                op: "matvec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Copy of the `nr x nc` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &DenseMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Symmetric reindexing: `out[(i, j)] = self[(perm[i], perm[j])]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])])
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Inverse through LU with partial pivoting; `None` when singular.
    pub fn try_inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        self.to_nalgebra()
            .try_inverse()
            .map(|m| Self::from_nalgebra(&m))
    }

    /// `P^{-1} self P`
    pub fn similarity(&self, p: &DenseMatrix) -> Result<Self> {
        let inv = p
            .try_inverse()
            .ok_or(Sd2Error::SingularParameter {
                what: "similarity transform",
                index: 0,
            })?;
        matmul(&inv, &matmul(self, p)?)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_same(op: &'static str, a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Sd2Error::DimensionMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols != b.rows {
        return Err(Sd2Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = DenseMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += aik * b.data[k * b.cols + j];
            }
        }
    }
    Ok(out)
}

fn square_pair(op: &'static str, a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Sd2Error::NotSquare {
            op,
            rows: a.rows,
            cols: a.cols,
        });
    }
    check_same(op, a, b)
}

/// `ab - ba`
pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    square_pair("commutator", a, b)?;
    Ok(&matmul(a, b)? - &matmul(b, a)?)
}

/// `ab + ba`
pub fn anticommutator(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    square_pair("anticommutator", a, b)?;
    Ok(&matmul(a, b)? + &matmul(b, a)?)
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in +");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in -");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    /// Panics on a dimension mismatch; use [`matmul`] for the checked form.
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        matmul(self, rhs).expect("dimension mismatch in *")
    }
}

impl Mul<C64> for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, s: C64) -> DenseMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, s: f64) -> DenseMatrix {
        self.scale(re(s))
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        self.scale(re(-1.0))
    }
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖M v − λ v‖₂`
pub fn eigen_residual(m: &DenseMatrix, lambda: C64, v: &[C64]) -> Result<f64> {
    let mv = m.matvec(v)?;
    Ok(mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Eigenpairs sorted by `(re, im)` of the eigenvalue; column `j` of `vectors`
/// is a unit-norm right eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: DenseMatrix,
    /// max_j ‖M v_j − λ_j v_j‖₂ / ‖M‖_F (zero for the zero matrix).
    pub max_relative_residual: f64,
}

pub fn sort_key_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

const SCHUR_MAX_ITER: usize = 10_000;
const SCHUR_SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (0.3127, 0.0), (-0.2718, 0.1414), (0.1732, -0.4142)];

/// Eigenvalues and right eigenvectors of a general complex square matrix.
pub fn dense_eigen(m: &DenseMatrix) -> Result<Eigen> {
    if !m.is_square() {
        return Err(Sd2Error::NotSquare {
            op: "dense_eigen",
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.is_finite() {
        return Err(Sd2Error::NonFinite("dense_eigen input"));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Eigen {
            values: vec![],
            vectors: DenseMatrix::zeros(0, 0),
            max_relative_residual: 0.0,
        });
    }
    // Shifted QR without exceptional shifts can stall when the spectrum is
    // symmetric about the origin; retry on M + sigma I.
    let scale = m.frobenius_norm().max(1.0) / n as f64;
    let base = m.to_nalgebra();
    let (q, t) = SCHUR_SHIFTS
        .iter()
        .find_map(|&(a, b)| {
            let sigma = c(a, b) * scale;
            let shifted = &base + nalgebra::DMatrix::<C64>::identity(n, n) * sigma;
            nalgebra::linalg::Schur::try_new(shifted, f64::EPSILON, SCHUR_MAX_ITER).map(|s| {
                let (q, mut t) = s.unpack();
                for i in 0..n {
                    t[(i, i)] -= sigma;
                }
                (q, t)
            })
        })
        .ok_or(Sd2Error::EigenNoConvergence(n))?;

    let tnorm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);

    let mut pairs: Vec<(C64, Vec<C64>)> = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = t[(i, i)];
        // Solve (T - λI) y = 0 with y_i = 1 and y_j = 0 for j > i.
        let mut y = vec![ZERO; n];
        y[i] = ONE;
        for j in (0..i).rev() {
            let mut s = ZERO;
            for l in (j + 1)..=i {
                s += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = re(smin);
            }
            y[j] = -s / d;
        }
        let mut v: Vec<C64> = (0..n)
            .map(|r| (0..=i).map(|l| q[(r, l)] * y[l]).sum())
            .collect();
        normalize_phase(&mut v);
        pairs.push((lambda, v));
    }
    pairs.sort_by(|a, b| sort_key_cmp(&a.0, &b.0));

    let mnorm = m.frobenius_norm();
    let mut worst: f64 = 0.0;
    for (lambda, v) in &pairs {
        let r = eigen_residual(m, *lambda, v)?;
        if mnorm > 0.0 {
            worst = worst.max(r / mnorm);
        }
    }
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, j| pairs[j].1[r]);
    Ok(Eigen {
        values,
        vectors,
        max_relative_residual: worst,
    })
}

/// Scales `v` to unit norm with its largest-magnitude entry real and positive.
pub fn normalize_phase(v: &mut [C64]) {
    let norm = norm2(v);
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(ONE);
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
}
