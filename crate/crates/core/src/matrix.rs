//! Dense complex matrices, the trace norm, the row-stacking `vec` map and the structural
//! checks (unitarity, Kraus completeness, projective measurements, density operators)
//! shared by every automaton model.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use crate::linalg;
use crate::sum::CompensatedSum;

pub type Complex = num_complex::Complex64;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixError {
    EmptyShape { rows: usize, cols: usize },
    BadLength { expected: usize, got: usize },
    NonFinite { row: usize, col: usize },
    NotSquare { rows: usize, cols: usize },
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    EmptyFamily,
    NotTracePreserving { residual: f64 },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::EmptyShape { rows, cols } => {
                write!(f, "matrix shape {rows}x{cols} has an empty dimension")
            }
            MatrixError::BadLength { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            MatrixError::NonFinite { row, col } => {
                write!(f, "entry ({row}, {col}) is not finite")
            }
            MatrixError::NotSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            MatrixError::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            MatrixError::EmptyFamily => write!(f, "operator family is empty"),
            MatrixError::NotTracePreserving { residual } => write!(
                f,
                "operation elements violate completeness (residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for MatrixError {}

/// Absolute tolerance on max-abs-entry residuals.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    /// Default for structural validation of models.
    pub const VALIDATION: Tolerance = Tolerance(1e-9);
    /// Default for comparing acceptance probabilities across models.
    pub const EQUIVALENCE: Tolerance = Tolerance(1e-7);

    /// Returns `None` unless `eps` is finite and strictly positive.
    pub fn new(eps: f64) -> Option<Self> {
        (eps.is_finite() && eps > 0.0).then_some(Tolerance(eps))
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::VALIDATION
    }
}

/// Outcome of a structural check. Failing is a value, not an error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
}

impl Check {
    fn from_residual(residual: f64, tol: Tolerance) -> Self {
        Check {
            passed: residual <= tol.eps(),
            residual,
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::BadLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(MatrixError::NonFinite {
                row: idx / cols,
                col: idx % cols,
            });
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(MatrixError::BadLength {
                    expected: ncols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        CMatrix::new(nrows, ncols, data)
    }

    /// Real-valued matrix from nested rows.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self, MatrixError> {
        CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape");
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[Complex]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
        CMatrix::diag(&v)
    }

    /// `|i><j|` on an `n`-dimensional space.
    pub fn ket_bra(n: usize, i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m.data[i * n + j] = ONE;
        m
    }

    /// `|u><v|` for column vectors `u` and `v`.
    pub fn outer(u: &[Complex], v: &[Complex]) -> Self {
        let mut m = CMatrix::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.data[i * v.len() + j] = ui * vj.conj();
            }
        }
        m
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

    /// Row-major entries.
    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.cols + col] = value;
    }

    /// Iterator over rows as slices.
    pub fn row_slices(&self) -> impl Iterator<Item = &[Complex]> {
        self.data.chunks(self.cols)
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` over entries; `INFINITY` for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        let adj = self.adjoint();
        (self + &adj).scale(Complex::new(0.5, 0.0))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.row_slices()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn try_mul(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &CMatrix) -> Result<CMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &CMatrix,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<CMatrix, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::ShapeMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest entry modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> Result<f64, MatrixError> {
        Ok(self.try_sub(rhs)?.max_abs())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix subtraction shape mismatch")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

fn require_square(a: &CMatrix) -> Result<usize, MatrixError> {
    if a.is_square() {
        Ok(a.rows)
    } else {
        Err(MatrixError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        })
    }
}

/// Common dimension of a non-empty family of square matrices.
fn family_dim(elems: &[CMatrix]) -> Result<usize, MatrixError> {
    let first = elems.first().ok_or(MatrixError::EmptyFamily)?;
    let n = require_square(first)?;
    for e in &elems[1..] {
        if e.shape() != (n, n) {
            return Err(MatrixError::ShapeMismatch {
                left: (n, n),
                right: e.shape(),
            });
        }
    }
    Ok(n)
}

/// Kronecker product `a (x) b`; entry `(i*rb + k, j*cb + l)` is `a(i,j) * b(k,l)`.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let cols = ca * cb;
    let mut out = CMatrix::zeros(ra * rb, cols);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.data[(i * rb + k) * cols + j * cb + l] = aij * b.get(k, l);
                }
            }
        }
    }
    out
}

/// Row-stacking linearisation: entry `(i, j)` of an `n x n` matrix lands at index `i*n + j`.
pub fn vec_of(a: &CMatrix) -> Result<Vec<Complex>, MatrixError> {
    require_square(a)?;
    Ok(a.data.clone())
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex]) -> f64 {
    let scale = v.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let ss: CompensatedSum = v.iter().map(|z| (z / scale).norm_sqr()).collect();
    scale * libm::sqrt(ss.total())
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    linalg::singular_values(a)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> Result<f64, MatrixError> {
    require_square(a)?;
    let s: CompensatedSum = singular_values(a).into_iter().collect();
    Ok(s.total())
}

/// `|| a - b ||_tr`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64, MatrixError> {
    require_square(a)?;
    trace_norm(&a.try_sub(b)?)
}

pub fn check_unitary(u: &CMatrix, tol: Tolerance) -> Result<Check, MatrixError> {
    let n = require_square(u)?;
    let gram = &u.adjoint() * u;
    Ok(Check::from_residual(
        gram.max_abs_diff(&CMatrix::identity(n))?,
        tol,
    ))
}

/// `sum_k E_k^dagger E_k`.
pub fn kraus_gram(elems: &[CMatrix]) -> Result<CMatrix, MatrixError> {
    let n = family_dim(elems)?;
    let mut acc = CMatrix::zeros(n, n);
    for e in elems {
        acc = &acc + &(&e.adjoint() * e);
    }
    Ok(acc)
}

pub fn check_kraus_complete(elems: &[CMatrix], tol: Tolerance) -> Result<Check, MatrixError> {
    let gram = kraus_gram(elems)?;
    let n = gram.rows();
    Ok(Check::from_residual(
        gram.max_abs_diff(&CMatrix::identity(n))?,
        tol,
    ))
}

/// Residual of `P` being an orthogonal projector: the worse of `|P - P^dagger|` and `|P^2 - P|`.
pub fn projector_residual(p: &CMatrix) -> Result<f64, MatrixError> {
    require_square(p)?;
    let herm = p.hermiticity_residual();
    let idem = (p * p).max_abs_diff(p)?;
    Ok(herm.max(idem))
}

pub fn check_projective_measurement(
    projs: &[CMatrix],
    tol: Tolerance,
) -> Result<Check, MatrixError> {
    let n = family_dim(projs)?;
    let mut worst = 0.0f64;
    let mut total = CMatrix::zeros(n, n);
    for (i, p) in projs.iter().enumerate() {
        worst = worst.max(projector_residual(p)?);
        for q in &projs[i + 1..] {
            worst = worst.max((p * q).max_abs());
        }
        total = &total + p;
    }
    worst = worst.max(total.max_abs_diff(&CMatrix::identity(n))?);
    Ok(Check::from_residual(worst, tol))
}

/// Eigenvalues (ascending) of the Hermitian part of a square matrix.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>, MatrixError> {
    require_square(a)?;
    Ok(linalg::hermitian_eigenvalues(&a.hermitian_part()))
}

/// Density check: Hermitian, eigenvalues `>= -eps`, unit trace. The residual is the
/// largest of the three violations.
pub fn check_density(rho: &CMatrix, tol: Tolerance) -> Result<Check, MatrixError> {
    let herm = rho.hermiticity_residual();
    let eigs = hermitian_eigenvalues(rho)?;
    let negativity = eigs.first().map_or(0.0, |&m| (-m).max(0.0));
    let trace_err = (rho.trace() - ONE).norm();
    Ok(Check::from_residual(herm.max(negativity).max(trace_err), tol))
}

/// `rho -> sum_k E_k rho E_k^dagger` without checking completeness.
pub fn apply_operation_unchecked(elems: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let n = rho.rows();
    let mut out = CMatrix::zeros(n, n);
    for e in elems {
        let left = e * rho;
        out = &out + &(&left * &e.adjoint());
    }
    out
}

/// Applies a trace-preserving quantum operation given by its operation elements.
pub fn apply_operation(elems: &[CMatrix], rho: &CMatrix) -> Result<CMatrix, MatrixError> {
    let n = family_dim(elems)?;
    if rho.shape() != (n, n) {
        return Err(MatrixError::ShapeMismatch {
            left: (n, n),
            right: rho.shape(),
        });
    }
    let complete = check_kraus_complete(elems, Tolerance::VALIDATION)?;
    if !complete.passed {
        return Err(MatrixError::NotTracePreserving {
            residual: complete.residual,
        });
    }
    Ok(apply_operation_unchecked(elems, rho))
}
