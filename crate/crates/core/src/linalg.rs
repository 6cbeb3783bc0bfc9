//! Dense complex matrices sized for small bipartite systems (up to ~81×81).
//!
//! Storage is row-major. Eigendecomposition and SVD are delegated to
//! nalgebra; everything else (Kronecker products, partial operations, the
//! Hilbert–Schmidt inner product) is done directly on the row-major buffer.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical tolerances shared by every validating constructor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Max entrywise |A − A†| accepted as Hermitian.
    pub hermitian: f64,
    /// |Tr ρ − 1| accepted for states.
    pub trace: f64,
    /// Most negative eigenvalue accepted for a state.
    pub state_psd: f64,
    /// Slack for PSD checks on exact fixtures.
    pub psd_slack: f64,
    /// |‖ψ‖ − 1| accepted for pure states.
    pub unit_norm: f64,
    /// Relative residual bound for decompositions.
    pub residual: f64,
    /// Partial-transpose eigenvalue threshold for the PPT test.
    pub ppt: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        trace: 1e-10,
        state_psd: 1e-10,
        psd_slack: 1e-12,
        unit_norm: 1e-10,
        residual: 1e-9,
        ppt: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;

/// Local dimensions of a bipartite system H_A ⊗ H_B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub const fn new(a: usize, b: usize) -> Self {
        Dims { a, b }
    }

    pub const fn square(d: usize) -> Self {
        Dims { a: d, b: d }
    }

    pub const fn total(&self) -> usize {
        self.a * self.b
    }

    pub fn check_positive(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 {
            return Err(Error::Dimension(format!(
                "subsystem dimensions must be positive, got {self}"
            )));
        }
        Ok(())
    }

    /// The common local dimension, if both sides agree.
    pub fn local(&self) -> Option<usize> {
        (self.a == self.b).then_some(self.a)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must be at least 1×1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Internal constructor for buffers produced by arithmetic on finite inputs.
    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec_unchecked(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec_unchecked(rows, cols, data)
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { ZERO })
    }

    /// |v⟩⟨w|
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// |v⟩⟨v|
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns have unequal lengths".into()));
        }
        Self::new(rows, cols, (0..rows * cols).map(|k| columns[k % cols][k / cols]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            let row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_vec_unchecked(self.rows, other.cols, out))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Largest entrywise deviation from Hermiticity, max |A_ij − conj(A_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix subtraction shape mismatch")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// Hilbert–Schmidt inner product Tr(A†B).
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    a.check_same_shape(b)?;
    if !a.is_square() {
        return Err(Error::Dimension("Frobenius inner product expects square matrices".into()));
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Tr(AB) for square A, B of equal size, without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() || a.rows != b.cols || a.cols != b.rows {
        return Err(Error::Dimension("trace of product needs compatible square shapes".into()));
    }
    let n = a.rows;
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a.get(i, k) * b.get(k, i);
        }
    }
    Ok(acc)
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        a.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols)
    })
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect()
}

fn check_bipartite(rho: &ComplexMatrix, dims: Dims) -> Result<()> {
    dims.check_positive()?;
    if !rho.is_square() || rho.rows != dims.total() {
        return Err(Error::Dimension(format!(
            "{}×{} matrix does not match subsystem dimensions {dims}",
            rho.rows, rho.cols
        )));
    }
    Ok(())
}

/// Reduced operator on `keep`, tracing out the other factor.
pub fn partial_trace(rho: &ComplexMatrix, dims: Dims, keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(rho, dims)?;
    let Dims { a: da, b: db } = dims;
    let n = dims.total();
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, k| {
            (0..db).map(|j| rho.data[(i * db + j) * n + k * db + j]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |j, l| {
            (0..da).map(|i| rho.data[(i * db + j) * n + i * db + l]).sum()
        }),
    })
}

/// Transposes the indices of subsystem `on`.
pub fn partial_transpose(rho: &ComplexMatrix, dims: Dims, on: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(rho, dims)?;
    let db = dims.b;
    let n = dims.total();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        match on {
            Subsystem::A => rho.data[(k * db + j) * n + i * db + l],
            Subsystem::B => rho.data[(i * db + l) * n + k * db + j],
        }
    }))
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvector `k` is column `k`).
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    /// V·diag(λ)·V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let scaled = ComplexMatrix::from_fn(self.vectors.rows(), self.vectors.cols(), |i, j| {
            self.vectors.get(i, j) * self.values[j]
        });
        &scaled * &self.vectors.adjoint()
    }
}

const EIG_MAX_ITERS: usize = 10_000;

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::Dimension("eigendecomposition needs a square matrix".into()));
    }
    let dev = a.hermitian_deviation();
    if dev > TOL.hermitian {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (max |A − A†| = {dev:.3e})"
        )));
    }
    let eig = a
        .hermitian_part()
        .to_nalgebra()
        .try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITERS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;

    let n = a.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(a)?.values)
}

/// Thin SVD M = U·diag(s)·V† with `s` descending. U is m×k, V is n×k, k = min(m, n).
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let us = ComplexMatrix::from_fn(self.u.rows(), self.u.cols(), |i, j| {
            self.u.get(i, j) * self.singular_values[j]
        });
        &us * &self.v.adjoint()
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let dec = m
        .to_nalgebra()
        .try_svd(true, true, f64::EPSILON, EIG_MAX_ITERS)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let u = dec.u.expect("requested U");
    let v_t = dec.v_t.expect("requested V†");
    let k = dec.singular_values.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| dec.singular_values[y].total_cmp(&dec.singular_values[x]));
    Ok(Svd {
        u: ComplexMatrix::from_fn(m.rows, k, |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&j| dec.singular_values[j]).collect(),
        v: ComplexMatrix::from_fn(m.cols, k, |i, j| v_t[(order[j], i)].conj()),
    })
}

/// Extends orthonormal columns to a full unitary by Gram–Schmidt against the
/// computational basis.
pub fn complete_unitary(columns: &ComplexMatrix) -> ComplexMatrix {
    let n = columns.rows();
    let mut basis: Vec<Vec<C64>> = (0..columns.cols()).map(|j| columns.column(j)).collect();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![ZERO; n];
        v[e] = ONE;
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for q in &basis {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = vector_norm(&v);
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    ComplexMatrix::from_columns(&basis).expect("columns share length")
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨u|v⟩
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn normalize(v: &mut [C64]) -> f64 {
    let n = vector_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// max |U†U − I|
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    let gram = &u.adjoint() * u;
    gram.max_abs_diff(&ComplexMatrix::identity(u.cols()))
}
