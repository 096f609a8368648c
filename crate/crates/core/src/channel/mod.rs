//! CQ channels, distances, Choi operators, tensor powers, and free families.

mod family;
mod io;

pub use family::FreeFamily;
pub use io::{channel_from_json, channel_to_json, load_channel, save_channel};

use crate::error::{Error, Result};
use crate::hermit::{eig_hermitian, HermitianOperator};
use crate::tol;

/// Separator used to encode product-alphabet labels, e.g. `"x1|x2"`.
pub const LABEL_SEPARATOR: char = '|';

/// Probability distribution over a finite label set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("empty probability vector".into()));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < -tol::PROB_SUM) {
            return Err(Error::Domain("negative probability weight".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol::PROB_SUM {
            return Err(Error::Domain(format!(
                "probability weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            weights: weights.iter().map(|&w| w.max(0.0)).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[at] = 1.0;
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > tol::TRACE_ONE {
            return Err(Error::Domain(format!(
                "density operator trace {tr} deviates from 1"
            )));
        }
        let min = op.min_eigenvalue()?;
        if min < -tol::PSD_SLACK {
            return Err(Error::Domain(format!(
                "density operator has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { op })
    }

    /// Normalizes a PSD operator with positive trace into a state.
    pub fn normalized(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if tr <= 0.0 {
            return Err(Error::Domain("cannot normalize non-positive trace".into()));
        }
        Self::new(op.scale(1.0 / tr))
    }

    pub fn pure(amplitudes: &[num_complex::Complex64]) -> Self {
        Self {
            op: HermitianOperator::pure_projector(amplitudes),
        }
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[index] = 1.0;
        Self {
            op: HermitianOperator::from_diag(&diag),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            op: self.op.tensor(&other.op),
        }
    }

    /// Convex mixture of states.
    pub fn mix(states: &[(f64, &Self)]) -> Result<Self> {
        let dim = states
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1
            .dim();
        let mut acc = HermitianOperator::zeros(dim);
        for &(w, s) in states {
            if s.dim() != dim {
                return Err(Error::DimMismatch("mixture of unequal dims".into()));
            }
            acc = acc.add(&s.op.scale(w));
        }
        Self::new(acc)
    }
}

/// A CQ channel: a finite ordered input alphabet and one output state per
/// input label.
#[derive(Debug, Clone, PartialEq)]
pub struct CQChannel {
    inputs: Vec<String>,
    out_dim: usize,
    outputs: Vec<DensityOperator>,
}

impl CQChannel {
    pub fn new(inputs: Vec<String>, outputs: Vec<DensityOperator>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::Domain("channel must have at least one input".into()));
        }
        if inputs.len() != outputs.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} input labels but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &inputs {
            if !seen.insert(label) {
                return Err(Error::Domain(format!("duplicate input label '{label}'")));
            }
        }
        let out_dim = outputs[0].dim();
        if outputs.iter().any(|o| o.dim() != out_dim) {
            return Err(Error::DimMismatch("outputs of unequal dimension".into()));
        }
        Ok(Self {
            inputs,
            out_dim,
            outputs,
        })
    }

    /// Replacer channel: the same output state for every input.
    pub fn replacer(inputs: Vec<String>, state: DensityOperator) -> Result<Self> {
        let outputs = vec![state; inputs.len()];
        Self::new(inputs, outputs)
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, index: usize) -> &DensityOperator {
        &self.outputs[index]
    }

    pub fn output_by_label(&self, label: &str) -> Option<&DensityOperator> {
        self.inputs
            .iter()
            .position(|l| l == label)
            .map(|i| &self.outputs[i])
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.out_dim == other.out_dim
    }

    pub fn is_replacer(&self, tol: f64) -> bool {
        self.outputs
            .iter()
            .skip(1)
            .all(|o| o.operator().max_abs_diff(self.outputs[0].operator()) <= tol)
    }

    /// Convex mixture of channels with a shared shape.
    pub fn mix(channels: &[(f64, &Self)]) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::Domain("empty channel mixture".into()))?
            .1;
        for &(_, c) in channels {
            if !c.same_shape(first) {
                return Err(Error::ShapeMismatch("mixture of unequal channel shapes".into()));
            }
        }
        let outputs = (0..first.num_inputs())
            .map(|x| {
                let parts: Vec<(f64, &DensityOperator)> =
                    channels.iter().map(|&(w, c)| (w, c.output(x))).collect();
                DensityOperator::mix(&parts)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(first.inputs.clone(), outputs)
    }
}

/// Trace distance `(1/2)‖ρ1 − ρ2‖₁`.
pub fn trace_distance(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimMismatch(format!(
            "trace distance dims {} vs {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let diff = rho1.operator().sub(rho2.operator());
    let spec = eig_hermitian(&diff)?;
    Ok(0.5 * spec.eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
}

/// Diamond distance between CQ channels: the worst-case-over-inputs trace
/// distance of the outputs.
pub fn diamond_distance(phi1: &CQChannel, phi2: &CQChannel) -> Result<f64> {
    if !phi1.same_shape(phi2) {
        return Err(Error::ShapeMismatch(
            "diamond distance requires equal input alphabets and output dims".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for x in 0..phi1.num_inputs() {
        worst = worst.max(trace_distance(phi1.output(x), phi2.output(x))?);
    }
    Ok(worst)
}

/// Choi operator `Σ_x |x⟩⟨x| ⊗ Φ(x)`; block diagonal, trace `X`.
pub fn choi(phi: &CQChannel) -> HermitianOperator {
    let x = phi.num_inputs();
    let d = phi.out_dim();
    let mut mat = crate::hermit::ComplexMatrix::zeros(x * d, x * d);
    for (k, out) in phi.outputs().iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                mat.set(k * d + i, k * d + j, out.operator().matrix().get(i, j));
            }
        }
    }
    HermitianOperator::symmetrize(mat)
}

/// Tensor product of CQ channels: Cartesian-product alphabet, tensor-product
/// outputs.
pub fn tensor_channels(phi1: &CQChannel, phi2: &CQChannel) -> Result<CQChannel> {
    let size = phi1
        .num_inputs()
        .checked_mul(phi2.num_inputs())
        .and_then(|x| {
            phi1.out_dim()
                .checked_mul(phi2.out_dim())
                .map(|d| (x, d))
        });
    match size {
        Some((x, d)) if x <= 1 << 20 && d <= 4096 => {}
        _ => {
            return Err(Error::Capacity(
                "tensor product of channels exceeds the size guard".into(),
            ))
        }
    }
    let mut inputs = Vec::with_capacity(phi1.num_inputs() * phi2.num_inputs());
    let mut outputs = Vec::with_capacity(inputs.capacity());
    for (x1, o1) in phi1.inputs().iter().zip(phi1.outputs()) {
        for (x2, o2) in phi2.inputs().iter().zip(phi2.outputs()) {
            inputs.push(format!("{x1}{LABEL_SEPARATOR}{x2}"));
            outputs.push(o1.tensor(o2));
        }
    }
    CQChannel::new(inputs, outputs)
}

/// `Φ^{⊗n}` with the default copy cap [`tol::MAX_COPIES`].
pub fn channel_power(phi: &CQChannel, n: usize) -> Result<CQChannel> {
    channel_power_capped(phi, n, tol::MAX_COPIES)
}

/// `Φ^{⊗n}` with an explicit cap on `n`.
pub fn channel_power_capped(phi: &CQChannel, n: usize, cap: usize) -> Result<CQChannel> {
    if n == 0 {
        return Err(Error::Domain("channel power requires n >= 1".into()));
    }
    if n > cap {
        return Err(Error::Capacity(format!("{n} copies exceeds the cap of {cap}")));
    }
    let mut acc = phi.clone();
    for _ in 1..n {
        acc = tensor_channels(&acc, phi)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn ket_plus() -> DensityOperator {
        let h = 1.0 / 2.0_f64.sqrt();
        DensityOperator::pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)])
    }

    pub(crate) fn orthogonal_bit_channel() -> CQChannel {
        CQChannel::new(
            vec!["0".into(), "1".into()],
            vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn trace_distance_examples() {
        let rho = sampling::random_density(&mut ChaCha8Rng::seed_from_u64(1), 3);
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);

        let d = trace_distance(&DensityOperator::basis(2, 0), &DensityOperator::basis(2, 1))
            .unwrap();
        assert!((d - 1.0).abs() < 1e-12);

        // Pure states |0>, |+>: distance sqrt(1 - 1/2) = 1/sqrt(2).
        let d = trace_distance(&DensityOperator::basis(2, 0), &ket_plus()).unwrap();
        assert!((d - 0.7071067811865476).abs() < 1e-10);
    }

    #[test]
    fn diamond_distance_examples() {
        let phi = orthogonal_bit_channel();
        assert!(diamond_distance(&phi, &phi).unwrap() < 1e-12);

        let rep =
            CQChannel::replacer(vec!["0".into(), "1".into()], DensityOperator::basis(2, 0))
                .unwrap();
        assert!((diamond_distance(&phi, &rep).unwrap() - 1.0).abs() < 1e-12);

        // Equals the max of per-input trace distances.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = sampling::random_cq_channel(&mut rng, 3, 2);
        let b = sampling::random_cq_channel_like(&mut rng, &a);
        let expected = (0..3)
            .map(|x| trace_distance(a.output(x), b.output(x)).unwrap())
            .fold(0.0, f64::max);
        assert!((diamond_distance(&a, &b).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn diamond_distance_is_a_metric_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let a = sampling::random_cq_channel(&mut rng, 2, 2);
            let b = sampling::random_cq_channel_like(&mut rng, &a);
            let c = sampling::random_cq_channel_like(&mut rng, &a);
            let dab = diamond_distance(&a, &b).unwrap();
            let dba = diamond_distance(&b, &a).unwrap();
            let dac = diamond_distance(&a, &c).unwrap();
            let dcb = diamond_distance(&c, &b).unwrap();
            assert!((dab - dba).abs() <= 1e-10);
            assert!(dab <= dac + dcb + 1e-10);
        }
    }

    #[test]
    fn diamond_distance_is_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..25 {
            let a1 = sampling::random_cq_channel(&mut rng, 2, 2);
            let a2 = sampling::random_cq_channel_like(&mut rng, &a1);
            let b1 = sampling::random_cq_channel_like(&mut rng, &a1);
            let b2 = sampling::random_cq_channel_like(&mut rng, &a1);
            let p = 0.3;
            let ma = CQChannel::mix(&[(p, &a1), (1.0 - p, &a2)]).unwrap();
            let mb = CQChannel::mix(&[(p, &b1), (1.0 - p, &b2)]).unwrap();
            let lhs = diamond_distance(&ma, &mb).unwrap();
            let rhs = p * diamond_distance(&a1, &b1).unwrap()
                + (1.0 - p) * diamond_distance(&a2, &b2).unwrap();
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn choi_of_replacer_and_bit_channel() {
        let rho = sampling::random_density(&mut ChaCha8Rng::seed_from_u64(5), 2);
        let rep = CQChannel::replacer(vec!["a".into(), "b".into()], rho.clone()).unwrap();
        let j = choi(&rep);
        assert!((j.trace() - 2.0).abs() < 1e-12);
        let expected = HermitianOperator::identity(2).tensor(rho.operator());
        assert!(j.max_abs_diff(&expected) < 1e-12);

        let j = choi(&orthogonal_bit_channel());
        assert!(j.max_abs_diff(&HermitianOperator::from_diag(&[1.0, 0.0, 0.0, 1.0])) < 1e-12);
    }

    #[test]
    fn choi_is_linear_in_the_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = sampling::random_cq_channel(&mut rng, 2, 2);
        let b = sampling::random_cq_channel_like(&mut rng, &a);
        let m = CQChannel::mix(&[(0.4, &a), (0.6, &b)]).unwrap();
        let lhs = choi(&m);
        let rhs = choi(&a).scale(0.4).add(&choi(&b).scale(0.6));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn channel_power_matches_direct_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = sampling::random_cq_channel(&mut rng, 2, 2);
        let sq = channel_power(&phi, 2).unwrap();
        assert_eq!(sq.num_inputs(), 4);
        for (x1, l1) in phi.inputs().iter().enumerate() {
            for (x2, l2) in phi.inputs().iter().enumerate() {
                let label = format!("{l1}|{l2}");
                let got = sq.output_by_label(&label).unwrap();
                let expected = phi.output(x1).tensor(phi.output(x2));
                assert!(got.operator().max_abs_diff(expected.operator()) < 1e-14);
            }
        }
        assert_eq!(channel_power(&phi, 1).unwrap(), phi);
        assert!(channel_power(&phi, 9).is_err());
    }

    #[test]
    fn tensor_with_trivial_replacer_is_isomorphic() {
        let phi = orthogonal_bit_channel();
        let trivial = CQChannel::replacer(
            vec!["u".into()],
            DensityOperator::maximally_mixed(1),
        )
        .unwrap();
        let prod = tensor_channels(&phi, &trivial).unwrap();
        assert_eq!(prod.num_inputs(), 2);
        for x in 0..2 {
            assert!(prod
                .output(x)
                .operator()
                .max_abs_diff(phi.output(x).operator())
                < 1e-14);
        }
    }

    #[test]
    fn choi_of_power_is_permuted_choi_power() {
        // For X=1 the permutation is trivial, so equality is direct.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = sampling::random_density(&mut rng, 2);
        let phi = CQChannel::new(vec!["0".into()], vec![rho]).unwrap();
        let lhs = choi(&channel_power(&phi, 2).unwrap());
        let j = choi(&phi);
        let rhs = j.tensor(&j);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
