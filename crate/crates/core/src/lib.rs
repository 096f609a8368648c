//! Numerical toolkit for the resource theory of classical-quantum (CQ) channels.
//!
//! A CQ channel maps a finite classical alphabet to density operators on a
//! finite-dimensional Hilbert space. This crate provides the machinery to
//! study such channels as dynamical resources:
//!
//! - [`hermit`]: dense complex Hermitian linear algebra (Jacobi
//!   eigendecomposition, matrix functions, operator orderings, tensor
//!   algebra) — the numeric substrate for everything else.
//! - [`channel`]: CQ channels, Choi operators, trace/diamond distances,
//!   tensor powers, and free families (replacers and finite convex hulls).
//! - [`divergence`]: quantum relative entropy, sandwiched Rényi divergence,
//!   channel divergences, divergence-to-family minimization, and the
//!   Blahut–Arimoto channel capacity.
//! - [`pinching`]: pinching maps and superchannels, spectrum rounding,
//!   distinct-eigenvalue accounting, and operator-inequality transfer bounds.
//! - [`hypothesis`]: optimal type-II errors for states, channels, and
//!   channel-vs-family saddle points; information-spectrum tests; finite-copy
//!   error-exponent scans; update constructions.
//! - [`robustness`]: generalized robustness of CQ channels with primal/dual
//!   certificates and its link to the relative entropy of resource.
//! - [`conversion`]: superchannels, non-signaling checks, measure-and-prepare
//!   converters, and conversion-rate reports.
//!
//! All values are in nats (natural logarithm). All operations are pure
//! functions of immutable inputs and safe to share across threads.

pub mod channel;
pub mod conversion;
pub mod divergence;
pub mod error;
pub mod hermit;
pub mod hypothesis;
pub mod pinching;
pub mod report;
pub mod robustness;
pub mod sampling;
pub mod solvers;
pub mod tol;

pub use channel::{CQChannel, DensityOperator, FreeFamily, ProbabilityVector};
pub use error::{Error, Result};
pub use hermit::{ComplexMatrix, HermitianOperator, SpectralDecomposition};
