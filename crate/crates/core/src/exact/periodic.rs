//! Transition probabilities of TASEP on the ring of `L` sites.
//!
//! Configurations are lifted: `x_1 < ... < x_N < x_1 + L`, with windings
//! retained. The probability is
//!
//! ```text
//! \oint dz / (2 pi i z) det[ (1/L) sum_w w^{j-i+1} (w+1)^{-x_i+y_j+i-j} e^{t w} / (w + N/L) ]
//! ```
//!
//! with `w` running over the roots of `w^N (w+1)^{L-N} = z` and the circle
//! `|z| = r`.

use std::collections::HashMap;

use num_complex::Complex64;

use super::bethe::{bethe_roots, critical_z};
use super::contour::ContourSpec;
use super::schuetz::{check_ordered, check_time};
use crate::error::{Error, Result};
use crate::linalg::det_complex;
use crate::numerics::{DEFAULT_Z_FRACTION, RADIUS_SENSITIVITY_TOL, Z_FRACTION_LADDER};

const PERIODIC_IMAGINARY_TOL: f64 = 1e-9;

/// Whether `x` is an admissible lifted ring configuration.
pub fn check_ring_state(x: &[i64], period: usize) -> Result<()> {
    check_ordered(x)?;
    if x.len() >= period || x[x.len() - 1] >= x[0] + period as i64 {
        return Err(Error::invalid(format!("{x:?} is not a lifted configuration on {period} sites")));
    }
    Ok(())
}

/// Default `z` contour: the circle of radius `0.5 z_c` about the origin.
pub fn periodic_z_contour(period: usize, particles: usize) -> ContourSpec {
    ContourSpec::origin(DEFAULT_Z_FRACTION * critical_z(period, particles))
}

fn validate(x: &[i64], y: &[i64], period: usize, t: f64) -> Result<()> {
    check_ring_state(x, period)?;
    check_ring_state(y, period)?;
    check_time(t)?;
    if x.len() != y.len() {
        return Err(Error::invalid("X and Y must have the same number of particles"));
    }
    Ok(())
}

/// Determinant of the root-sum matrix at one value of `z`.
fn root_sum_det(x: &[i64], y: &[i64], period: usize, t: f64, z: Complex64) -> Result<Complex64> {
    let n = x.len();
    let rho = n as f64 / period as f64;
    let inv_l = 1.0 / period as f64;
    let roots = bethe_roots(period, n, z)?.roots;
    let weights: Vec<Complex64> = roots.iter().map(|&w| (t * w).exp() / (w + rho) * inv_l).collect();
    let mut cache: HashMap<(i32, i32), Complex64> = HashMap::new();
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = j as i32 - i as i32 + 1;
            let b = (-x[i] + y[j]) as i32 + i as i32 - j as i32;
            let v = *cache.entry((a, b)).or_insert_with(|| {
                roots.iter().zip(&weights).map(|(&w, &c)| w.powi(a) * (w + 1.0).powi(b) * c).sum()
            });
            m.push(v);
        }
    }
    Ok(det_complex(m, n))
}

/// `P_Y(X; t)` on the ring with the given `z` contour.
///
/// The integrand is analytic in `z` away from the origin, so any circle about
/// `0` that avoids the collision point `(-1)^N z_c` is admissible.
pub fn periodic_transition(x: &[i64], y: &[i64], period: usize, t: f64, zc: &ContourSpec) -> Result<f64> {
    validate(x, y, period, t)?;
    if zc.center.norm() != 0.0 {
        return Err(Error::invalid("z contour must be centred at the origin"));
    }
    let mut failure: Option<Error> = None;
    let value = zc.integrate(|z| {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        match root_sum_det(x, y, period, t, z) {
            Ok(d) => d / z,
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let value = value?;
    if value.im.abs() > PERIODIC_IMAGINARY_TOL {
        return Err(Error::ImaginaryResidue { residue: value.im.abs(), tolerance: PERIODIC_IMAGINARY_TOL });
    }
    Ok(value.re)
}

/// Radius (as a multiple of `z_c`) among a fixed ladder that minimizes the
/// peak of the integrand; rounding error of the trapezoid sum scales with
/// that peak, which grows quickly with the winding of `X` relative to `Y`.
pub fn periodic_radius_fraction(x: &[i64], y: &[i64], period: usize, t: f64) -> Result<f64> {
    validate(x, y, period, t)?;
    let crit = critical_z(period, x.len());
    let mut best = (f64::INFINITY, DEFAULT_Z_FRACTION);
    for frac in Z_FRACTION_LADDER {
        let r = frac * crit;
        let mut peak = 0.0f64;
        for k in 0..16 {
            let z = Complex64::from_polar(r, std::f64::consts::PI * (2 * k + 1) as f64 / 16.0);
            peak = peak.max(root_sum_det(x, y, period, t, z)?.norm());
        }
        if peak < best.0 {
            best = (peak, frac);
        }
    }
    Ok(best.1)
}

/// `P_Y(X; t)` on the best-conditioned radius of the ladder, cross-checked
/// on a circle 1.5 times larger.
pub fn periodic_transition_certified(x: &[i64], y: &[i64], period: usize, t: f64) -> Result<f64> {
    let frac = periodic_radius_fraction(x, y, period, t)?;
    let crit = critical_z(period, x.len());
    let a = periodic_transition(x, y, period, t, &ContourSpec::origin(frac * crit))?;
    let b = periodic_transition(x, y, period, t, &ContourSpec::origin(1.5 * frac * crit))?;
    let delta = (a - b).abs();
    if delta > RADIUS_SENSITIVITY_TOL {
        return Err(Error::RadiusSensitivity { delta, tolerance: RADIUS_SENSITIVITY_TOL });
    }
    Ok(a)
}

/// Relabel `(x_1, ..., x_N) -> (x_2, ..., x_N, x_1 + L)`.
pub fn shift_labels(x: &[i64], period: usize) -> Vec<i64> {
    let mut out: Vec<i64> = x[1..].to_vec();
    out.push(x[0] + period as i64);
    out
}
