//! Every tolerance, grid, quadrature order and acceptance threshold in one place.
//!
//! The values are bundled under [`THRESHOLDS_VERSION`]; changing any constant
//! here should bump the version so that golden outputs can be matched to the
//! settings that produced them.

use serde::Serialize;

pub const THRESHOLDS_VERSION: &str = "kpzlab-thresholds/1";

// Airy
pub const AIRY_RANGE: f64 = 40.0;
pub const AIRY_ANCHOR_SPACING: f64 = 0.125;
pub const AIRY_ASYMPTOTIC_FROM: f64 = 10.0;

// Tracy–Widom
pub const TW_DOMAIN: (f64, f64) = (-12.0, 8.0);
pub const NYSTROM_ORDER: usize = 80;
pub const NYSTROM_MAP_SCALE: f64 = 10.0;
pub const NYSTROM_TOL: f64 = 1e-10;
pub const PAINLEVE_NODES: usize = 240;
pub const PAINLEVE_NEWTON_TOL: f64 = 1e-13;
pub const PAINLEVE_REFINE_TOL: f64 = 1e-9;
pub const TW_TABLE_GRID: (f64, f64) = (-10.0, 6.0);
pub const TW_TABLE_STEP: f64 = 0.01;

// Contour integrals
pub const CONTOUR_INITIAL_NODES: usize = 64;
pub const CONTOUR_MAX_NODES: usize = 1 << 16;
pub const CONTOUR_REL_TOL: f64 = 1e-13;
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;
pub const RADIUS_SENSITIVITY_TOL: f64 = 1e-9;

// Bethe roots
pub const ROOT_MAX_SWEEPS: usize = 500;
pub const ROOT_TOL: f64 = 1e-14;
pub const NEAR_CRITICAL_GAP: f64 = 1e-9;
pub const DEFAULT_Z_FRACTION: f64 = 0.5;
pub const Z_FRACTION_LADDER: [f64; 7] = [0.5, 2.0, 8.0, 32.0, 128.0, 512.0, 2048.0];

// CTMC oracle
pub const CTMC_MAX_STATES: usize = 10_000;
pub const EXPM_TAYLOR_TOL: f64 = 1e-17;

// Monte-Carlo acceptance
pub const DKW_DELTA: f64 = 0.01;
pub const KS_P_THRESHOLD: f64 = 0.01;
pub const KS_POISSON_LIS: f64 = 0.10;
pub const KS_TASEP_DLPP: f64 = 0.10;
pub const KS_THIN_DLPP: f64 = 0.10;
pub const KS_BROWNIAN_DK: f64 = 0.12;
pub const KS_GUE_EDGE: f64 = 0.10;
pub const KS_RING_RELAXATION: f64 = 0.10;
pub const HYDRO_SUP_ERROR: f64 = 0.02;
pub const PERIODIC_R2_MIN: f64 = 0.99;
pub const PERIODIC_SKEW_TOL: f64 = 0.15;
pub const EXACT_VS_MC_SIGMAS: f64 = 4.0;
pub const EXACT_VS_ORACLE_TOL: f64 = 1e-8;
pub const LABEL_SHIFT_TOL: f64 = 1e-10;
pub const THIN_DLPP_EXPONENT: f64 = 0.3;
pub const BROWNIAN_GRID_FACTOR: usize = 40;

/// One named constant for `--describe-numerics`.
#[derive(Debug, Clone, Serialize)]
pub struct Setting {
    pub name: &'static str,
    pub value: String,
    pub role: &'static str,
}

fn s(name: &'static str, value: impl ToString, role: &'static str) -> Setting {
    Setting { name, value: value.to_string(), role }
}

/// All settings in effect, in a stable order.
pub fn describe() -> Vec<Setting> {
    vec![
        s("thresholds_version", THRESHOLDS_VERSION, "identifier of this settings bundle"),
        s("airy_range", AIRY_RANGE, "airy() accepts |x| <= this"),
        s("airy_anchor_spacing", AIRY_ANCHOR_SPACING, "Taylor anchor spacing for Ai/Bi"),
        s("airy_asymptotic_from", AIRY_ASYMPTOTIC_FROM, "Ai uses the asymptotic series beyond this"),
        s("tw_domain", format!("{:?}", TW_DOMAIN), "accepted arguments of the Tracy-Widom CDFs"),
        s("nystrom_order", NYSTROM_ORDER, "Gauss-Legendre nodes for the Airy-kernel determinant"),
        s("nystrom_map_scale", NYSTROM_MAP_SCALE, "x = s + c tan(pi (u+1)/4)"),
        s("nystrom_tol", NYSTROM_TOL, "order-doubling agreement required"),
        s("painleve_nodes", PAINLEVE_NODES, "Chebyshev collocation nodes on the TW domain"),
        s("painleve_newton_tol", PAINLEVE_NEWTON_TOL, "Newton update norm at convergence"),
        s("painleve_refine_tol", PAINLEVE_REFINE_TOL, "agreement required under node doubling"),
        s("tw_table_grid", format!("{:?}", TW_TABLE_GRID), "default CdfTable range"),
        s("tw_table_step", TW_TABLE_STEP, "default CdfTable spacing"),
        s("contour_initial_nodes", CONTOUR_INITIAL_NODES, "first trapezoid node count"),
        s("contour_max_nodes", CONTOUR_MAX_NODES, "node doubling stops here"),
        s("contour_rel_tol", CONTOUR_REL_TOL, "doubling stops when successive estimates agree"),
        s("imaginary_residue_tol", IMAGINARY_RESIDUE_TOL, "allowed imaginary part of a probability"),
        s("radius_sensitivity_tol", RADIUS_SENSITIVITY_TOL, "allowed change under contour radius perturbation"),
        s("root_max_sweeps", ROOT_MAX_SWEEPS, "Aberth iteration cap"),
        s("root_tol", ROOT_TOL, "relative Aberth correction at convergence"),
        s("near_critical_gap", NEAR_CRITICAL_GAP, "minimum root separation"),
        s("default_z_fraction", DEFAULT_Z_FRACTION, "|z| as a fraction of the critical value"),
        s("z_fraction_ladder", format!("{:?}", Z_FRACTION_LADDER), "candidate radii for the ring formula"),
        s("ctmc_max_states", CTMC_MAX_STATES, "CTMC oracle state-space cap"),
        s("expm_taylor_tol", EXPM_TAYLOR_TOL, "Taylor truncation in scaling-and-squaring"),
        s("dkw_delta", DKW_DELTA, "confidence level of DKW bands"),
        s("ks_p_threshold", KS_P_THRESHOLD, "two-sample KS p-value for pass"),
        s("ks_poisson_lis", KS_POISSON_LIS, "KS bound for Poisson LIS at t=400"),
        s("ks_tasep_dlpp", KS_TASEP_DLPP, "KS bound for TASEP height at T=500"),
        s("ks_thin_dlpp", KS_THIN_DLPP, "KS bound for thin DLPP at n=2000"),
        s("ks_brownian_dk", KS_BROWNIAN_DK, "KS bound for the Brownian functional D_k"),
        s("ks_gue_edge", KS_GUE_EDGE, "KS bound for exponential DLPP and Wishart edges"),
        s("ks_ring_relaxation", KS_RING_RELAXATION, "KS bound for the ring in relaxation scaling"),
        s("hydro_sup_error", HYDRO_SUP_ERROR, "sup-grid bound at T=2000"),
        s("periodic_r2_min", PERIODIC_R2_MIN, "linear variance fit in the large-time ring regime"),
        s("periodic_skew_tol", PERIODIC_SKEW_TOL, "skewness distance to Tracy-Widom in the short-time ring regime"),
        s("exact_vs_mc_sigmas", EXACT_VS_MC_SIGMAS, "binomial sigmas allowed between exact and MC"),
        s("exact_vs_oracle_tol", EXACT_VS_ORACLE_TOL, "exact formula vs CTMC oracle"),
        s("label_shift_tol", LABEL_SHIFT_TOL, "ring formula under relabelling of particles"),
        s("thin_dlpp_exponent", THIN_DLPP_EXPONENT, "k = floor(n^a)"),
        s("brownian_grid_factor", BROWNIAN_GRID_FACTOR, "grid_m = factor * k^2"),
    ]
}
