//! Limiting objects: Airy functions, the Tracy–Widom law, deterministic
//! profiles and the one-point scaling predictions.

pub mod airy;
pub mod cdf;
pub mod fredholm;
pub mod kpz;
pub mod painleve;
pub mod quadrature;

pub use airy::{airy, airy_bi};
pub use fredholm::tracy_widom_cdf;
pub use painleve::{painleve2_refinement_check, painleve2_tw_cdf, tracy_widom_moments, HastingsMcLeod, Moments};
pub use cdf::{uniform_grid, CdfTable};
pub use kpz::{d_matrix_diag, hydro_profile, kpz_one_point_cdf, kpz_rescale, MultiPointSpec, ScalePoint};
