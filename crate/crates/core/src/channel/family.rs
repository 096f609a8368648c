//! Free families of CQ channels: the replacer family and finite convex hulls.

use super::{CQChannel, DensityOperator, LABEL_SEPARATOR};
use crate::error::{Error, Result};
use crate::hermit::HermitianOperator;
use crate::solvers;
use num_complex::Complex64;

/// A compact convex family of CQ channels.
///
/// `Replacer` is the set of all channels that output one fixed state
/// regardless of the input; it is convex, compact and tensor-closed by
/// parametrization. `FiniteHull` is the convex hull of finitely many
/// generator channels; tensor closure cannot be enforced for arbitrary
/// generators, so it carries an explicit tag and multi-copy constructions use
/// the hull of generator tensor powers.
#[derive(Debug, Clone, PartialEq)]
pub enum FreeFamily {
    Replacer {
        inputs: Vec<String>,
        out_dim: usize,
    },
    FiniteHull {
        generators: Vec<CQChannel>,
        tensor_closed: bool,
    },
}

impl FreeFamily {
    pub fn replacer(inputs: Vec<String>, out_dim: usize) -> Self {
        FreeFamily::Replacer { inputs, out_dim }
    }

    /// Replacer family sharing the shape of `phi`.
    pub fn replacer_for(phi: &CQChannel) -> Self {
        FreeFamily::Replacer {
            inputs: phi.inputs().to_vec(),
            out_dim: phi.out_dim(),
        }
    }

    /// Finite hull; fails when no hull member is full rank (the family would
    /// violate the full-rank axiom and divergences to it may diverge).
    pub fn finite_hull(generators: Vec<CQChannel>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain("hull needs at least one generator".into()));
        }
        let first = &generators[0];
        if !generators.iter().all(|g| g.same_shape(first)) {
            return Err(Error::ShapeMismatch("hull generators of unequal shape".into()));
        }
        let fam = FreeFamily::FiniteHull {
            generators,
            tensor_closed: false,
        };
        fam.full_rank_witness()?;
        Ok(fam)
    }

    pub fn num_inputs(&self) -> usize {
        match self {
            FreeFamily::Replacer { inputs, .. } => inputs.len(),
            FreeFamily::FiniteHull { generators, .. } => generators[0].num_inputs(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            FreeFamily::Replacer { out_dim, .. } => *out_dim,
            FreeFamily::FiniteHull { generators, .. } => generators[0].out_dim(),
        }
    }

    pub fn input_labels(&self) -> Vec<String> {
        match self {
            FreeFamily::Replacer { inputs, .. } => inputs.clone(),
            FreeFamily::FiniteHull { generators, .. } => generators[0].inputs().to_vec(),
        }
    }

    pub fn matches_shape(&self, phi: &CQChannel) -> bool {
        self.input_labels() == phi.inputs() && self.out_dim() == phi.out_dim()
    }

    /// A member channel with all outputs `≥ Λ_min·𝟙`, and that `Λ_min`.
    ///
    /// For the replacer family this is the maximally mixed replacer with
    /// `Λ_min = 1/D`; for a hull, the uniform mixture of the generators.
    pub fn full_rank_witness(&self) -> Result<(CQChannel, f64)> {
        match self {
            FreeFamily::Replacer { inputs, out_dim } => {
                let witness = CQChannel::replacer(
                    inputs.clone(),
                    DensityOperator::maximally_mixed(*out_dim),
                )?;
                Ok((witness, 1.0 / *out_dim as f64))
            }
            FreeFamily::FiniteHull { generators, .. } => {
                let w = 1.0 / generators.len() as f64;
                let parts: Vec<(f64, &CQChannel)> = generators.iter().map(|g| (w, g)).collect();
                let mix = CQChannel::mix(&parts)?;
                let mut lambda_min = f64::INFINITY;
                for out in mix.outputs() {
                    lambda_min = lambda_min.min(out.operator().min_eigenvalue()?);
                }
                if lambda_min <= 1e-12 {
                    return Err(Error::Precondition(
                        "hull has no full-rank member: uniform generator mixture is rank-deficient"
                            .into(),
                    ));
                }
                Ok((mix, lambda_min))
            }
        }
    }

    /// The family of `n`-copy channels: the replacer family over the product
    /// alphabet and `H^{⊗n}`, or the hull of generator tensor powers.
    pub fn power(&self, n: usize) -> Result<FreeFamily> {
        if n == 0 {
            return Err(Error::Domain("family power requires n >= 1".into()));
        }
        match self {
            FreeFamily::Replacer { inputs, out_dim } => {
                let mut labels: Vec<String> = inputs.clone();
                for _ in 1..n {
                    labels = labels
                        .iter()
                        .flat_map(|a| {
                            inputs
                                .iter()
                                .map(move |b| format!("{a}{LABEL_SEPARATOR}{b}"))
                        })
                        .collect();
                }
                Ok(FreeFamily::Replacer {
                    inputs: labels,
                    out_dim: out_dim.pow(n as u32),
                })
            }
            FreeFamily::FiniteHull { generators, tensor_closed } => {
                let powered = generators
                    .iter()
                    .map(|g| super::channel_power(g, n))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FreeFamily::FiniteHull {
                    generators: powered,
                    tensor_closed: *tensor_closed,
                })
            }
        }
    }

    /// Deterministic covering of the family with mesh at most `resolution`
    /// (in diamond distance).
    ///
    /// Replacers with qubit outputs use a Bloch-ball lattice; hulls use a
    /// simplex lattice over generator weights. Replacer output dims above 2
    /// are unsupported here (iterative solvers handle those directly).
    pub fn members_grid(&self, resolution: f64) -> Result<Vec<CQChannel>> {
        if !(resolution > 0.0) {
            return Err(Error::Domain("grid resolution must be positive".into()));
        }
        match self {
            FreeFamily::Replacer { inputs, out_dim } => match out_dim {
                1 => Ok(vec![CQChannel::replacer(
                    inputs.clone(),
                    DensityOperator::maximally_mixed(1),
                )?]),
                2 => {
                    let states = bloch_grid(resolution);
                    states
                        .into_iter()
                        .map(|s| CQChannel::replacer(inputs.clone(), s))
                        .collect()
                }
                _ => Err(Error::Domain(
                    "replacer grid supports out_dim <= 2; use the iterative solver".into(),
                )),
            },
            FreeFamily::FiniteHull { generators, .. } => {
                let k = generators.len();
                let weights = solvers::simplex_grid(k, resolution);
                weights
                    .into_iter()
                    .map(|w| {
                        let parts: Vec<(f64, &CQChannel)> =
                            w.iter().copied().zip(generators.iter()).collect();
                        CQChannel::mix(&parts)
                    })
                    .collect()
            }
        }
    }

    /// Membership test. Replacers: all outputs pairwise equal within `1e-9`.
    /// Hulls: least-squares distance of the Choi operator to the hull
    /// polytope at most `1e-8`.
    pub fn contains(&self, phi: &CQChannel) -> Result<bool> {
        if !self.matches_shape(phi) {
            return Ok(false);
        }
        match self {
            FreeFamily::Replacer { .. } => Ok(phi.is_replacer(1e-9)),
            FreeFamily::FiniteHull { generators, .. } => {
                let (dist, _w) = hull_choi_distance(generators, phi)?;
                Ok(dist <= 1e-8)
            }
        }
    }

    /// Member channel built from hull weights (hull variant only).
    pub fn hull_member(&self, weights: &[f64]) -> Result<CQChannel> {
        match self {
            FreeFamily::FiniteHull { generators, .. } => {
                if weights.len() != generators.len() {
                    return Err(Error::ShapeMismatch("weight count vs generators".into()));
                }
                let parts: Vec<(f64, &CQChannel)> =
                    weights.iter().copied().zip(generators.iter()).collect();
                CQChannel::mix(&parts)
            }
            _ => Err(Error::Domain("hull_member on a replacer family".into())),
        }
    }
}

/// Frobenius distance from `phi`'s Choi operator to the hull polytope, with
/// the optimal weights. Solved by projected gradient on the simplex.
pub fn hull_choi_distance(generators: &[CQChannel], phi: &CQChannel) -> Result<(f64, Vec<f64>)> {
    let jg: Vec<HermitianOperator> = generators.iter().map(super::choi).collect();
    let jp = super::choi(phi);
    let k = generators.len();
    // Gram matrix and linear term of ||Σ w_i J_i - J||_F^2.
    let mut gram = vec![vec![0.0; k]; k];
    let mut lin = vec![0.0; k];
    for i in 0..k {
        lin[i] = jg[i].trace_product(&jp);
        for j in 0..k {
            gram[i][j] = jg[i].trace_product(&jg[j]);
        }
    }
    let jp_sq = jp.trace_product(&jp);
    let objective = |w: &[f64]| {
        let mut v = jp_sq;
        for i in 0..k {
            v -= 2.0 * w[i] * lin[i];
            for j in 0..k {
                v += w[i] * w[j] * gram[i][j];
            }
        }
        v.max(0.0)
    };
    let grad = |w: &[f64], g: &mut [f64]| {
        for i in 0..k {
            g[i] = -2.0 * lin[i];
            for j in 0..k {
                g[i] += 2.0 * gram[i][j] * w[j];
            }
        }
    };
    let mut w = vec![1.0 / k as f64; k];
    let mut g = vec![0.0; k];
    let lipschitz = 2.0 * gram.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max) * k as f64;
    let step = 1.0 / lipschitz.max(1e-12);
    for _ in 0..2000 {
        grad(&w, &mut g);
        for i in 0..k {
            w[i] -= step * g[i];
        }
        solvers::project_to_simplex(&mut w);
    }
    Ok((objective(&w).sqrt(), w))
}

/// Deterministic lattice of qubit states covering the Bloch ball with trace
/// -distance mesh at most `resolution`.
fn bloch_grid(resolution: f64) -> Vec<DensityOperator> {
    // Trace distance between qubit states is half the Euclidean Bloch
    // distance, so a cubic lattice of spacing h has mesh h*sqrt(3)/4 after
    // projection onto the ball.
    let h = (4.0 * resolution / 3.0_f64.sqrt()).min(2.0);
    let steps = (2.0 / h).ceil() as i64;
    let mut out = Vec::new();
    for ix in -steps..=steps {
        for iy in -steps..=steps {
            for iz in -steps..=steps {
                let mut r = [ix as f64 * h, iy as f64 * h, iz as f64 * h];
                let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                if norm > 1.0 {
                    // Keep boundary coverage by projecting just-outside points.
                    if norm > 1.0 + 1.8 * h {
                        continue;
                    }
                    for v in &mut r {
                        *v /= norm;
                    }
                }
                out.push(bloch_state(r[0], r[1], r[2]));
            }
        }
    }
    out
}

/// Qubit state `(𝟙 + r·σ)/2` for a Bloch vector inside the unit ball.
pub fn bloch_state(rx: f64, ry: f64, rz: f64) -> DensityOperator {
    let mut m = crate::hermit::ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex64::new((1.0 + rz) / 2.0, 0.0));
    m.set(1, 1, Complex64::new((1.0 - rz) / 2.0, 0.0));
    m.set(0, 1, Complex64::new(rx / 2.0, -ry / 2.0));
    m.set(1, 0, Complex64::new(rx / 2.0, ry / 2.0));
    DensityOperator::new(HermitianOperator::symmetrize(m)).expect("bloch vector inside the ball")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{diamond_distance, trace_distance};
    use crate::hermit::op_leq;
    use crate::sampling;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_labels() -> Vec<String> {
        vec!["0".into(), "1".into()]
    }

    #[test]
    fn replacer_witness_dominates_identity_floor() {
        let fam = FreeFamily::replacer(two_labels(), 2);
        let (witness, lambda) = fam.full_rank_witness().unwrap();
        assert!((lambda - 0.5).abs() < 1e-15);
        let floor = HermitianOperator::identity(2).scale(lambda);
        for out in witness.outputs() {
            assert!(op_leq(&floor, out.operator(), 1e-12).unwrap());
        }
    }

    #[test]
    fn hull_witness_dominates_identity_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g1 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let g2 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let fam = FreeFamily::finite_hull(vec![g1, g2]).unwrap();
        let (witness, lambda) = fam.full_rank_witness().unwrap();
        assert!(lambda > 0.0);
        let floor = HermitianOperator::identity(2).scale(lambda);
        for out in witness.outputs() {
            assert!(op_leq(&floor, out.operator(), 1e-9).unwrap());
        }
    }

    #[test]
    fn rank_deficient_hull_is_rejected() {
        let g = CQChannel::replacer(two_labels(), DensityOperator::basis(2, 0)).unwrap();
        assert!(FreeFamily::finite_hull(vec![g]).is_err());
    }

    #[test]
    fn replacer_grid_contains_maximally_mixed() {
        let fam = FreeFamily::replacer(two_labels(), 2);
        let grid = fam.members_grid(0.5).unwrap();
        let mm = CQChannel::replacer(two_labels(), DensityOperator::maximally_mixed(2)).unwrap();
        assert!(grid
            .iter()
            .any(|c| diamond_distance(c, &mm).unwrap() < 1e-12));
    }

    #[test]
    fn hull_grid_at_half_resolution_has_three_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let g1 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let g2 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let fam = FreeFamily::finite_hull(vec![g1, g2]).unwrap();
        let grid = fam.members_grid(0.5).unwrap();
        assert_eq!(grid.len(), 3); // weights {0, 1/2, 1}
    }

    #[test]
    fn grids_cover_sampled_family_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let resolution = 0.2;

        let fam = FreeFamily::replacer(two_labels(), 2);
        let grid = fam.members_grid(resolution).unwrap();
        for _ in 0..50 {
            let target =
                CQChannel::replacer(two_labels(), sampling::random_density(&mut rng, 2)).unwrap();
            let nearest = grid
                .iter()
                .map(|c| diamond_distance(c, &target).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= resolution + 1e-12, "nearest {nearest}");
        }

        let g1 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let g2 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let hull = FreeFamily::finite_hull(vec![g1.clone(), g2.clone()]).unwrap();
        let grid = hull.members_grid(resolution).unwrap();
        for _ in 0..50 {
            let w: f64 = rng.gen();
            let target = CQChannel::mix(&[(w, &g1), (1.0 - w, &g2)]).unwrap();
            let nearest = grid
                .iter()
                .map(|c| diamond_distance(c, &target).unwrap())
                .fold(f64::INFINITY, f64::min);
            // Simplex mesh bounds the weight deviation by `resolution`; the
            // diamond distance is 1-Lipschitz in the weights.
            assert!(nearest <= resolution + 1e-12, "nearest {nearest}");
        }
    }

    #[test]
    fn membership_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let fam = FreeFamily::replacer(two_labels(), 2);
        let rho = sampling::random_density(&mut rng, 2);
        let rep = CQChannel::replacer(two_labels(), rho).unwrap();
        assert!(fam.contains(&rep).unwrap());
        let phi = sampling::random_cq_channel(&mut rng, 2, 2);
        let far = (0..2)
            .map(|x| trace_distance(phi.output(x), phi.output((x + 1) % 2)).unwrap())
            .fold(0.0, f64::max);
        if far > 1e-6 {
            assert!(!fam.contains(&phi).unwrap());
        }

        let g1 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let g2 = sampling::random_full_rank_cq_channel(&mut rng, 2, 2, 0.05);
        let hull = FreeFamily::finite_hull(vec![g1.clone(), g2.clone()]).unwrap();
        let mixed = CQChannel::mix(&[(0.3, &g1), (0.7, &g2)]).unwrap();
        assert!(hull.contains(&mixed).unwrap());
    }

    #[test]
    fn replacer_power_shape() {
        let fam = FreeFamily::replacer(two_labels(), 2);
        let sq = fam.power(2).unwrap();
        assert_eq!(sq.num_inputs(), 4);
        assert_eq!(sq.out_dim(), 4);
        assert!(sq.input_labels().contains(&"0|1".to_string()));
    }
}
