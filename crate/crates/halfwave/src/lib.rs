//! Numerical half-order time calculus and monotone parabolic solvers.
//!
//! The crate covers five layers that build on each other:
//!
//! * [`fraccalc`]: forward/backward fractional derivatives of order in
//!   (0, 1] with a causal Grünwald–Letnikov backend, a spectral backend,
//!   and the Hilbert-transform bridge between the two directions.
//! * [`seminorms`]: half-order Gagliardo seminorms, Hardy terms, mean
//!   oscillation defects, cut-offs and reflection/zero extensions for
//!   functions of time and for space-time fields.
//! * [`flux`]: structural bounds (monotonicity, coercivity, growth) for
//!   nonlinear flux functions, with randomized audits.
//! * [`solver`]: a causal variational solver for p-parabolic equations on
//!   a space-time cylinder, with homogeneous and nonhomogeneous boundary
//!   data, manufactured-solution support, and uniqueness probes.
//! * [`traces`]: initial-value extension and trace operators, the split of
//!   a field into an initial-data part and a remainder with vanishing
//!   early-time behaviour, and lateral trace machinery.
//!
//! [`verify`] packages the library's calibrated checks into named suites
//! shared by the test battery and the command-line front end.
//!
//! All samples are `f64`, all grids uniform, and every parallel reduction
//! combines partial sums in a fixed order, so results do not depend on
//! thread count.

pub mod error;
pub mod flux;
pub mod fraccalc;
pub mod grid;
pub mod seminorms;
pub mod solver;
pub mod traces;
pub mod verify;
pub(crate) mod util;

pub use error::{HalfwaveError, Result};
pub use grid::{Grid1D, SampledField2D, SampledFunction1D, SpaceTimeGrid};

/// Crate version, echoed into run manifests by the command-line front end.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
