//! Stochastic samplers for every model in the laboratory.
//!
//! All samplers are pure functions of their arguments and a [`StreamKey`];
//! none of them hold shared state.

mod brownian;
mod lis;
mod lpp;
mod tasep;
mod wishart;

pub use brownian::{sample_brownian_dk, default_brownian_grid};
pub use lis::{lis_length, sample_point_cloud, sample_poisson_lis, PointCloud};
pub use lpp::{
    dlpp_heights, dlpp_table, height_from_dlpp, last_passage_value, thin_dlpp_sample, LppTable, WeightSpec,
};
pub use tasep::{
    ring_initial_height, simulate_tasep_line, simulate_tasep_ring, step_line_state, HeightQuery,
    HeightSample, LineState, RingRun, RingState,
};
pub(crate) use tasep::simulate_ring_from;
pub use wishart::{sample_wishart_lmax, wishart_eigenvalues};

pub use crate::rng::StreamKey;
