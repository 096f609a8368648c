//! Matrix functions and spectral projectors.

use super::eig::eig_hermitian;
use super::HermitianOperator;
use crate::error::{Error, Result};
use crate::tol;

/// Applies a scalar function to the clustered eigenvalues of `A`.
///
/// With `support_only` set, eigenvalues at or below the support threshold
/// `1e-10·dim` are mapped to zero without evaluating `f`; otherwise a
/// non-finite `f` value is a domain error (log or a negative power hitting a
/// zero eigenvalue).
pub fn matrix_function(
    a: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    support_only: bool,
) -> Result<HermitianOperator> {
    let spec = eig_hermitian(a)?;
    let tau_supp = tol::support(a.dim());
    let mut values = vec![0.0; a.dim()];
    for group in spec.distinct_groups() {
        let lambda = spec.cluster_value(group);
        let v = if support_only && lambda <= tau_supp {
            0.0
        } else {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::Domain(format!(
                    "matrix function undefined at eigenvalue {lambda:.6e}"
                )));
            }
            v
        };
        for &i in group {
            values[i] = v;
        }
    }
    Ok(spec.rebuild(&values))
}

/// Matrix logarithm restricted to the support.
pub fn log_on_support(a: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_function(a, f64::ln, true)
}

/// Matrix power `A^p` restricted to the support (needed for negative `p`).
pub fn pow_on_support(a: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
    matrix_function(a, |x| x.powf(p), true)
}

/// Projector onto the support of `A` (eigenvalues above the support cutoff).
pub fn support_projector(a: &HermitianOperator) -> Result<HermitianOperator> {
    let spec = eig_hermitian(a)?;
    let tau_supp = tol::support(a.dim());
    let mut values = vec![0.0; a.dim()];
    for group in spec.distinct_groups() {
        if spec.cluster_value(group) > tau_supp {
            for &i in group {
                values[i] = 1.0;
            }
        }
    }
    Ok(spec.rebuild(&values))
}

/// The projector `{A ≥ B}` onto the span of eigenvectors of `A − B` with
/// nonnegative eigenvalue (clusters within the spectral tolerance of zero are
/// treated as zero and included).
pub fn psd_indicator(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "psd_indicator dims {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = a.sub(b);
    let spec = eig_hermitian(&diff)?;
    let mut values = vec![0.0; a.dim()];
    for group in spec.distinct_groups() {
        if spec.cluster_value(group) >= -spec.cluster_tol() {
            for &i in group {
                values[i] = 1.0;
            }
        }
    }
    Ok(spec.rebuild(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermit::{eig_hermitian, HermitianOperator};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn log_of_identity_is_zero() {
        let l = log_on_support(&HermitianOperator::identity(3)).unwrap();
        assert!(l.max_abs() < 1e-12);
    }

    #[test]
    fn inverse_of_half_identity() {
        let a = HermitianOperator::from_diag(&[0.5, 0.5]);
        let inv = pow_on_support(&a, -1.0).unwrap();
        assert!(inv.max_abs_diff(&HermitianOperator::from_diag(&[2.0, 2.0])) < 1e-12);
    }

    #[test]
    fn log_then_exp_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = sampling::random_full_rank_density(&mut rng, 3, 0.1);
        let l = log_on_support(a.operator()).unwrap();
        let back = matrix_function(&l, f64::exp, false).unwrap();
        assert!(back.max_abs_diff(a.operator()) <= 1e-9);
    }

    #[test]
    fn log_of_singular_matrix_is_domain_error() {
        let a = HermitianOperator::from_diag(&[1.0, 0.0]);
        assert!(matrix_function(&a, f64::ln, false).is_err());
        assert!(log_on_support(&a).is_ok());
    }

    #[test]
    fn indicator_of_equal_operators_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = sampling::random_hermitian(&mut rng, 4);
        let p = psd_indicator(&a, &a).unwrap();
        assert!(p.max_abs_diff(&HermitianOperator::identity(4)) < 1e-10);
    }

    #[test]
    fn indicator_of_diagonal_pair() {
        let a = HermitianOperator::from_diag(&[1.0, 0.0]);
        let b = HermitianOperator::from_diag(&[0.0, 1.0]);
        let p = psd_indicator(&a, &b).unwrap();
        assert!(p.max_abs_diff(&HermitianOperator::from_diag(&[1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn indicator_sign_split_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = sampling::random_hermitian(&mut rng, 4);
            let b = sampling::random_hermitian(&mut rng, 4);
            let p = psd_indicator(&a, &b).unwrap();
            let diff = a.sub(&b);
            let id = HermitianOperator::identity(4);
            // Tr[P(A-B)] >= 0 and Tr[(1-P)(A-B)] <= 0.
            assert!(p.trace_product(&diff) >= -1e-9);
            assert!(id.sub(&p).trace_product(&diff) <= 1e-9);
            // Idempotent and commuting with A-B.
            let p2 = HermitianOperator::symmetrize(p.matrix().matmul(p.matrix()));
            assert!(p2.max_abs_diff(&p) <= 1e-10);
            let comm = p
                .matrix()
                .matmul(diff.matrix())
                .sub(&diff.matrix().matmul(p.matrix()));
            assert!(comm.max_abs() <= 1e-9);
        }
    }

    #[test]
    fn rebuild_uses_clustered_values() {
        // Nearly-degenerate pair should act as one eigenvalue for functions.
        let a = HermitianOperator::from_diag(&[0.5, 0.5 + 1e-12, 0.25]);
        let spec = eig_hermitian(&a).unwrap();
        assert_eq!(spec.distinct_count(), 2);
        let sq = matrix_function(&a, |x| x * x, false).unwrap();
        assert!((sq.matrix().get(2, 2).re - 0.0625).abs() < 1e-12);
    }
}
