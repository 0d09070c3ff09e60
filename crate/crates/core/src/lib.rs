//! Numerical laboratory for KPZ-class growth models.
//!
//! The crate is split along the lines of the work it does:
//!
//! * [`sampler`]: Monte-Carlo samplers for TASEP on the line and the ring,
//!   last-passage percolation with several weight laws, Poisson LIS,
//!   Brownian last passage `D_k` and complex Wishart extreme eigenvalues.
//! * [`exact`]: finite-time transition probabilities of TASEP from
//!   contour-integral determinant formulas, Bethe roots, and their
//!   large-period limit.
//! * [`limits`]: Airy functions, the GUE Tracy–Widom distribution by two
//!   independent constructions, hydrodynamic profile and the 1:2:3 scaling.
//! * [`harness`]: empirical statistics, a CTMC matrix-exponential oracle and
//!   Monte-Carlo experiments that compare the samplers to the limit laws.
//!
//! Every sampler is a pure function of its parameters and an [`rng::StreamKey`],
//! so replicas can be fanned out over any number of workers.

pub mod complex_serde;
pub mod error;
pub mod exact;
pub mod harness;
pub mod limits;
pub mod linalg;
pub mod numerics;
pub mod rng;
pub mod sampler;

pub use error::{Error, Result};
pub use num_complex::Complex64;
