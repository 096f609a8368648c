//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! Each rotation first strips the phase of the pivot entry, then applies the
//! classical symmetric Jacobi rotation, so the pivot is annihilated exactly.
//! Sweeps run in a fixed (p, q) order, which makes the decomposition
//! bit-stable across runs for identical input.

use super::{ComplexMatrix, HermitianOperator};
use crate::error::{Error, Result};
use crate::tol;
use num_complex::Complex64;
use std::sync::Arc;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = V Λ V†` with eigenvalues ascending and the index
/// partition into clusters of numerically equal eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    distinct_groups: Vec<Vec<usize>>,
    cluster_tol: f64,
}

impl SpectralDecomposition {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors, ordered to match
    /// [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Index partition by eigenvalue clustering; the paper's count of
    /// distinct eigenvalues is `distinct_groups().len()`.
    pub fn distinct_groups(&self) -> &[Vec<usize>] {
        &self.distinct_groups
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct_groups.len()
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Representative eigenvalue (mean) of one cluster.
    pub fn cluster_value(&self, group: &[usize]) -> f64 {
        group.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / group.len() as f64
    }

    /// Projector onto the span of the eigenvectors in `group`.
    pub fn group_projector(&self, group: &[usize]) -> HermitianOperator {
        let n = self.dim();
        let mut mat = ComplexMatrix::zeros(n, n);
        for &k in group {
            for i in 0..n {
                let vik = self.eigenvectors.get(i, k);
                for j in 0..n {
                    let v = mat.get(i, j) + vik * self.eigenvectors.get(j, k).conj();
                    mat.set(i, j, v);
                }
            }
        }
        HermitianOperator::symmetrize(mat)
    }

    /// Rebuilds `Σ f(λ_i) v_i v_i†` for per-index scalar values.
    pub fn rebuild(&self, values: &[f64]) -> HermitianOperator {
        assert_eq!(values.len(), self.dim(), "rebuild values length");
        let n = self.dim();
        let mut mat = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            if values[k] == 0.0 {
                continue;
            }
            let f = Complex64::new(values[k], 0.0);
            for i in 0..n {
                let vik = self.eigenvectors.get(i, k);
                for j in 0..n {
                    let v = mat.get(i, j) + f * vik * self.eigenvectors.get(j, k).conj();
                    mat.set(i, j, v);
                }
            }
        }
        HermitianOperator::symmetrize(mat)
    }

    /// Transforms `M` into the eigenbasis: `V† M V`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint().matmul(m).matmul(&self.eigenvectors)
    }

    /// Transforms a matrix expressed in the eigenbasis back: `V M V†`.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.matmul(m).matmul(&self.eigenvectors.adjoint())
    }
}

/// Sum of squared magnitudes of off-diagonal entries.
fn off_diagonal_norm_sq(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s
}

/// Computes the spectral decomposition of a Hermitian operator.
///
/// Results are cached on the operator, so repeated calls are cheap.
pub fn eig_hermitian(op: &HermitianOperator) -> Result<Arc<SpectralDecomposition>> {
    if let Some(spec) = op.spectral_cache() {
        return Ok(spec.clone());
    }
    let spec = Arc::new(compute(op)?);
    op.store_spectral(spec.clone());
    Ok(spec)
}

fn compute(op: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = op.dim();
    if n > 4096 {
        return Err(Error::Capacity(format!("eigendecomposition of dim {n} > 4096")));
    }
    let scale = op.max_abs();
    let mut a = op.matrix().clone();
    let mut v = ComplexMatrix::identity(n);

    if n > 1 {
        let stop = (1e-14 * scale.max(1.0)).powi(2) * n as f64;
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_diagonal_norm_sq(&a) <= stop {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, scale);
                }
            }
        }
        if !converged && off_diagonal_norm_sq(&a) > stop {
            return Err(Error::SolverFailure(format!(
                "Jacobi did not converge after {MAX_SWEEPS} sweeps (off-diagonal {:.3e})",
                off_diagonal_norm_sq(&a).sqrt()
            )));
        }
    }

    // Ascending order with a stable permutation of eigenvector columns.
    let mut order: Vec<usize> = (0..n).collect();
    let raw: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));

    let cluster_tol = tol::spectral_cluster(scale);
    let mut distinct_groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match distinct_groups.last_mut() {
            Some(group) if eigenvalues[i] - eigenvalues[*group.last().unwrap()] <= cluster_tol => {
                group.push(i)
            }
            _ => distinct_groups.push(vec![i]),
        }
    }

    let spec = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        distinct_groups,
        cluster_tol,
    };

    // Reconstruction residual is the correctness certificate.
    let recon = spec.rebuild(spec.eigenvalues());
    let residual = recon.max_abs_diff(op);
    if residual > tol::EIG_RECONSTRUCTION * scale.max(1.0) {
        return Err(Error::SolverFailure(format!(
            "eigendecomposition residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(spec)
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let n = a.rows();
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= 1e-300 || r <= 1e-18 * scale.max(1.0) {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J differs from the identity in the (p,q) block:
    //   J[p][p] = c, J[p][q] = s e^{iφ}, J[q][p] = -s e^{-iφ}, J[q][q] = c.
    let se_pos = phase.scale(s); // s e^{iφ}
    let se_neg = phase.conj().scale(s); // s e^{-iφ}

    // A <- A J (columns p, q).
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp.scale(c) - akq * se_neg);
        a.set(k, q, akp * se_pos + akq.scale(c));
    }
    // A <- J† A (rows p, q).
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk.scale(c) - se_pos * aqk);
        a.set(q, k, se_neg * apk + aqk.scale(c));
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    // V <- V J.
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp.scale(c) - vkq * se_neg);
        v.set(k, q, vkp * se_pos + vkq.scale(c));
    }
}
