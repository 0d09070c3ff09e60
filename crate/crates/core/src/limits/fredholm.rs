//! Tracy–Widom CDF as the Fredholm determinant of the Airy kernel.

use std::f64::consts::PI;

use super::airy::airy_ai_unchecked;
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::linalg::det_real;
use crate::numerics::{NYSTROM_MAP_SCALE, NYSTROM_ORDER, NYSTROM_TOL, TW_DOMAIN};

pub(crate) fn check_domain(x: f64) -> Result<()> {
    if !(TW_DOMAIN.0..=TW_DOMAIN.1).contains(&x) {
        return Err(Error::invalid(format!(
            "argument {x} outside [{}, {}]",
            TW_DOMAIN.0, TW_DOMAIN.1
        )));
    }
    Ok(())
}

/// `det(I - K_Airy)` on `(s, inf)` with an `order`-point Nyström rule.
pub fn airy_determinant(s: f64, order: usize) -> f64 {
    let (u, w) = gauss_legendre(order);
    let mut xs = Vec::with_capacity(order);
    let mut ws = Vec::with_capacity(order);
    for (u, w) in u.iter().zip(&w) {
        let th = PI * (u + 1.0) / 4.0;
        let c = th.cos();
        xs.push(s + NYSTROM_MAP_SCALE * th.tan());
        ws.push(w * NYSTROM_MAP_SCALE * PI / 4.0 / (c * c));
    }
    let vals: Vec<(f64, f64)> = xs.iter().map(|&x| airy_ai_unchecked(x)).collect();
    let n = order;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        let (ai, di) = vals[i];
        for j in 0..n {
            let (aj, dj) = vals[j];
            let k = if i == j {
                di * di - xs[i] * ai * ai
            } else {
                (ai * dj - di * aj) / (xs[i] - xs[j])
            };
            let v = (ws[i] * ws[j]).sqrt() * k;
            m[i * n + j] = if i == j { 1.0 - v } else { -v };
        }
    }
    det_real(m, n)
}

/// GUE Tracy–Widom distribution function on `[-12, 8]`.
///
/// Evaluated at the default Nyström order and at twice that order; the finer
/// value is returned when the two agree.
pub fn tracy_widom_cdf(x: f64) -> Result<f64> {
    check_domain(x)?;
    let coarse = airy_determinant(x, NYSTROM_ORDER);
    let fine = airy_determinant(x, 2 * NYSTROM_ORDER);
    let delta = (coarse - fine).abs();
    if !(delta <= NYSTROM_TOL) {
        return Err(Error::QuadratureNotConverged { nodes: 2 * NYSTROM_ORDER, delta });
    }
    Ok(fine.clamp(0.0, 1.0))
}
