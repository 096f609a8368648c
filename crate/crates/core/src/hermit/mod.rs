//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream (channels, divergences, hypothesis tests) reduces to
//! eigendecompositions, matrix functions and tensor algebra of small dense
//! Hermitian matrices, so this module is deliberately self-contained and
//! deterministic: the same input bits always produce the same output bits.

mod eig;
mod func;

pub use eig::{eig_hermitian, SpectralDecomposition};
pub use func::{matrix_function, psd_indicator};

use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix add shape");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sub shape");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Largest entry magnitude `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix diff shape");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..=i {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }
}

/// Complex Hermitian matrix; symmetrized on construction and carrying a lazy
/// spectral cache.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    dim: usize,
    mat: ComplexMatrix,
    spectral: std::sync::OnceLock<std::sync::Arc<SpectralDecomposition>>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.mat == other.mat
    }
}

impl HermitianOperator {
    /// Validates hermiticity within [`tol::HERMITICITY`], then symmetrizes so
    /// that `A = (A + A†)/2` holds exactly.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::Domain(format!(
                "matrix is not Hermitian: max |A - A†| = {dev:.3e}"
            )));
        }
        Ok(Self::symmetrize(mat))
    }

    /// Symmetrizes without the hermiticity check. For internal computations
    /// whose results are Hermitian up to rounding.
    pub(crate) fn symmetrize(mat: ComplexMatrix) -> Self {
        let dim = mat.rows();
        let sym = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let v = (mat.get(i, j) + mat.get(j, i).conj()).scale(0.5);
            if i == j {
                Complex64::new(v.re, 0.0)
            } else {
                v
            }
        });
        Self {
            dim,
            mat: sym,
            spectral: std::sync::OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            mat: ComplexMatrix::zeros(dim, dim),
            spectral: std::sync::OnceLock::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            mat: ComplexMatrix::identity(dim),
            spectral: std::sync::OnceLock::new(),
        }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut mat = ComplexMatrix::zeros(dim, dim);
        for (i, &v) in diag.iter().enumerate() {
            mat.set(i, i, Complex64::new(v, 0.0));
        }
        Self {
            dim,
            mat,
            spectral: std::sync::OnceLock::new(),
        }
    }

    /// Rank-one projector `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn pure_projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm_sq > 0.0, "pure projector of the zero vector");
        let mat = ComplexMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj() / norm_sq);
        Self::symmetrize(mat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::symmetrize(self.mat.add(&other.mat))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::symmetrize(self.mat.sub(&other.mat))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::symmetrize(self.mat.scale_re(factor))
    }

    /// `A B A†` for an arbitrary complex `B` sandwiched by Hermitian factors;
    /// the result is Hermitian when `B` is.
    pub fn conjugate_with(&self, b: &Self) -> Self {
        Self::symmetrize(self.mat.matmul(&b.mat).matmul(&self.mat))
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// `Tr[A B]`, real for Hermitian factors.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "trace product dims");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.mat.get(i, j) * other.mat.get(j, i);
            }
        }
        acc.re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            dim: self.dim * other.dim,
            mat: self.mat.tensor(&other.mat),
            spectral: std::sync::OnceLock::new(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let spec = eig_hermitian(self)?;
        Ok(spec.eigenvalues()[0])
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> Result<f64> {
        let spec = eig_hermitian(self)?;
        Ok(*spec.eigenvalues().last().unwrap())
    }

    pub(crate) fn spectral_cache(&self) -> Option<&std::sync::Arc<SpectralDecomposition>> {
        self.spectral.get()
    }

    pub(crate) fn store_spectral(&self, spec: std::sync::Arc<SpectralDecomposition>) {
        let _ = self.spectral.set(spec);
    }
}

/// `Tr[A]`, exposed as a free function to mirror the operator toolkit.
pub fn trace(a: &HermitianOperator) -> f64 {
    a.trace()
}

/// Kronecker product of Hermitian operators.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    a.tensor(b)
}

/// Operator ordering check: `A ⪯ B` iff the smallest eigenvalue of `B − A`
/// is at least `−tol`.
pub fn op_leq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "op_leq dims {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(b.sub(a).min_eigenvalue()? >= -tol)
}

/// Partial trace of an operator on `⊗_i H_i` (factor dimensions `dims`),
/// tracing out the subsystem at index `which`.
pub fn partial_trace(
    a: &HermitianOperator,
    dims: &[usize],
    which: usize,
) -> Result<HermitianOperator> {
    let total: usize = dims.iter().product();
    if total != a.dim() {
        return Err(Error::DimMismatch(format!(
            "partial trace: factor dims {:?} do not multiply to {}",
            dims,
            a.dim()
        )));
    }
    if which >= dims.len() {
        return Err(Error::DimMismatch(format!(
            "partial trace: subsystem {} out of {} factors",
            which,
            dims.len()
        )));
    }
    let d_t = dims[which];
    // Split each index as (left, traced, right) with strides.
    let d_left: usize = dims[..which].iter().product();
    let d_right: usize = dims[which + 1..].iter().product();
    let out_dim = d_left * d_right;
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for l1 in 0..d_left {
        for r1 in 0..d_right {
            let row_out = l1 * d_right + r1;
            for l2 in 0..d_left {
                for r2 in 0..d_right {
                    let col_out = l2 * d_right + r2;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in 0..d_t {
                        let row_in = (l1 * d_t + t) * d_right + r1;
                        let col_in = (l2 * d_t + t) * d_right + r2;
                        acc += a.matrix().get(row_in, col_in);
                    }
                    out.set(row_out, col_out, acc);
                }
            }
        }
    }
    Ok(HermitianOperator::symmetrize(out))
}
