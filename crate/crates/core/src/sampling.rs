//! Seeded random instances for tests and the verification suites.
//!
//! Everything here is driven by an explicit RNG so instance generation is
//! reproducible bit-for-bit for a fixed seed.

use crate::channel::{CQChannel, DensityOperator, ProbabilityVector};
use crate::hermit::{ComplexMatrix, HermitianOperator};
use num_complex::Complex64;
use rand::Rng;

/// Standard normal via Box-Muller, driven by the given RNG.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Ginibre matrix: independent complex Gaussian entries.
pub fn random_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let g = random_complex_matrix(rng, dim, dim);
    HermitianOperator::symmetrize(g.scale_re(0.5).add(&g.adjoint().scale_re(0.5)))
}

/// Haar-ish random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = random_complex_matrix(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Hilbert-Schmidt random density operator `GG†/Tr[GG†]`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let g = random_complex_matrix(rng, dim, dim);
    let gg = HermitianOperator::symmetrize(g.matmul(&g.adjoint()));
    DensityOperator::normalized(gg).expect("Gram matrix is PSD")
}

/// Random state with smallest eigenvalue at least `floor`.
pub fn random_full_rank_density(rng: &mut impl Rng, dim: usize, floor: f64) -> DensityOperator {
    let mu = (floor * dim as f64).min(1.0);
    let raw = random_density(rng, dim);
    DensityOperator::mix(&[(1.0 - mu, &raw), (mu, &DensityOperator::maximally_mixed(dim))])
        .expect("mixture of states")
}

/// Random pure state.
pub fn random_pure(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    DensityOperator::pure(&v)
}

/// Random probability vector (flat Dirichlet).
pub fn random_prob_vector(rng: &mut impl Rng, n: usize) -> ProbabilityVector {
    let mut w: Vec<f64> = (0..n).map(|_| -f64::ln(rng.gen_range(f64::MIN_POSITIVE..1.0))).collect();
    let s: f64 = w.iter().sum();
    for v in &mut w {
        *v /= s;
    }
    ProbabilityVector::new(w).expect("normalized weights")
}

fn default_labels(x: usize) -> Vec<String> {
    (0..x).map(|i| format!("x{i}")).collect()
}

/// Random CQ channel with `x` inputs and `d`-dimensional outputs.
pub fn random_cq_channel(rng: &mut impl Rng, x: usize, d: usize) -> CQChannel {
    let outputs = (0..x).map(|_| random_density(rng, d)).collect();
    CQChannel::new(default_labels(x), outputs).expect("valid channel")
}

/// Random channel sharing the shape of `like`.
pub fn random_cq_channel_like(rng: &mut impl Rng, like: &CQChannel) -> CQChannel {
    let outputs = (0..like.num_inputs())
        .map(|_| random_density(rng, like.out_dim()))
        .collect();
    CQChannel::new(like.inputs().to_vec(), outputs).expect("valid channel")
}

/// Random channel whose outputs all dominate `floor`·𝟙.
pub fn random_full_rank_cq_channel(
    rng: &mut impl Rng,
    x: usize,
    d: usize,
    floor: f64,
) -> CQChannel {
    let outputs = (0..x)
        .map(|_| random_full_rank_density(rng, d, floor))
        .collect();
    CQChannel::new(default_labels(x), outputs).expect("valid channel")
}

/// Random CPTP map in Kraus form with `n_kraus` operators from `in_dim` to
/// `out_dim`: random operators renormalized so that `Σ K†K = 𝟙` exactly up
/// to rounding.
pub fn random_cptp_kraus(
    rng: &mut impl Rng,
    in_dim: usize,
    out_dim: usize,
    n_kraus: usize,
) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..n_kraus)
        .map(|_| random_complex_matrix(rng, out_dim, in_dim))
        .collect();
    let mut s = ComplexMatrix::zeros(in_dim, in_dim);
    for k in &raw {
        s = s.add(&k.adjoint().matmul(k));
    }
    let s_herm = HermitianOperator::symmetrize(s);
    let s_inv_sqrt = crate::hermit::matrix_function(&s_herm, |t| 1.0 / t.sqrt(), false)
        .expect("Gram operator is positive definite");
    raw.iter().map(|k| k.matmul(s_inv_sqrt.matrix())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 5);
        let gram = u.adjoint().matmul(&u);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn density_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let rho = random_density(&mut rng, 4);
            assert!((rho.operator().trace() - 1.0).abs() < 1e-12);
            assert!(rho.operator().min_eigenvalue().unwrap() > -1e-12);
        }
    }

    #[test]
    fn full_rank_density_respects_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_full_rank_density(&mut rng, 4, 0.02);
        assert!(rho.operator().min_eigenvalue().unwrap() >= 0.02 - 1e-12);
    }

    #[test]
    fn kraus_sets_are_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let kraus = random_cptp_kraus(&mut rng, 2, 3, 2);
        let mut s = ComplexMatrix::zeros(2, 2);
        for k in &kraus {
            s = s.add(&k.adjoint().matmul(k));
        }
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_cq_channel(&mut ChaCha8Rng::seed_from_u64(9), 2, 2);
        let b = random_cq_channel(&mut ChaCha8Rng::seed_from_u64(9), 2, 2);
        assert_eq!(a, b);
    }
}
