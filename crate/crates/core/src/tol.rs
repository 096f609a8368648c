//! Numerical tolerances used across the crate.
//!
//! These are pinned once so that validity checks, eigenvalue clustering and
//! solver stopping rules stay consistent between modules and tests.

/// Hermiticity deviation allowed when accepting external matrix data.
pub const HERMITICITY: f64 = 1e-8;

/// Residual allowed for an eigendecomposition reconstruction `V Λ V†`.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Scale coefficient for eigenvalue clustering: two eigenvalues belong to the
/// same cluster when they differ by at most `1e-9 * max(1, ‖A‖_max)`.
pub const SPECTRAL_CLUSTER_COEFF: f64 = 1e-9;

/// Scale coefficient for support detection: an eigenvalue counts as zero when
/// it is at most `1e-10 * dim`.
pub const SUPPORT_COEFF: f64 = 1e-10;

/// Slack allowed below zero when validating positive semidefiniteness.
pub const PSD_SLACK: f64 = 1e-10;

/// Deviation from unit trace allowed for density operators.
pub const TRACE_ONE: f64 = 1e-10;

/// Deviation allowed when validating probability vectors.
pub const PROB_SUM: f64 = 1e-12;

/// Target certified gap for divergence-to-family and robustness solvers.
pub const SOLVER_GAP: f64 = 1e-6;

/// Target primal-dual gap for the channel-vs-family saddle point.
pub const SADDLE_GAP: f64 = 1e-4;

/// Default duality-gap target for the Blahut-Arimoto capacity iteration.
pub const CAPACITY_GAP: f64 = 1e-9;

/// Default cap on tensor-power copy counts.
pub const MAX_COPIES: usize = 5;

/// Clustering threshold for a given max-abs scale.
pub fn spectral_cluster(scale: f64) -> f64 {
    SPECTRAL_CLUSTER_COEFF * scale.max(1.0)
}

/// Support threshold for a given dimension.
pub fn support(dim: usize) -> f64 {
    SUPPORT_COEFF * dim as f64
}
