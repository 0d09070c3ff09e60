//! Exact finite-time transition probabilities of TASEP on the line and on
//! the ring, the Bethe roots behind the ring formula and their limit.

pub mod bethe;
pub mod contour;
pub mod limit;
pub mod periodic;
pub mod schuetz;

pub use bethe::{bethe_roots, critical_z, BetheRootSet};
pub use contour::ContourSpec;
pub use limit::{limit_root_set, max_matching_distance, rescale_bethe_to_limit, LimitRootSet};
pub use periodic::{
    check_ring_state, periodic_radius_fraction, periodic_transition, periodic_transition_certified, periodic_z_contour,
    shift_labels,
};
pub use schuetz::{schuetz_entry, schuetz_transition, schuetz_transition_with};
