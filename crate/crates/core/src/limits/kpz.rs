//! Deterministic profile and one-point scaling predictions of the KPZ class.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::painleve::tw_cdf_clamped;
use crate::error::{Error, Result};

/// Law-of-large-numbers height for step initial data.
pub fn hydro_profile(x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("hydro profile needs t > 0 and finite x (t={t}, x={x})")));
    }
    Ok(if x.abs() >= t { x.abs() } else { (t * t + x * x) / (2.0 * t) })
}

/// Height fluctuation, scaled position and scaled time of the fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub h: f64,
    pub gamma: f64,
    pub tau: f64,
}

impl ScalePoint {
    pub fn new(h: f64, gamma: f64, tau: f64) -> Result<Self> {
        let p = Self { h, gamma, tau };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.h.is_finite() || !self.gamma.is_finite() {
            return Err(Error::invalid(format!("invalid scale point {self:?}")));
        }
        Ok(())
    }

    /// Tracy–Widom argument `h / tau^{1/3} + gamma^2 / (4 tau^{4/3})`.
    pub fn composed_argument(&self) -> f64 {
        let c = self.tau.cbrt();
        self.h / c + self.gamma * self.gamma / (4.0 * c * c * c * c)
    }
}

/// One-point distribution of the fixed point from step initial data.
pub fn kpz_one_point_cdf(p: &ScalePoint) -> Result<f64> {
    p.check()?;
    Ok(tw_cdf_clamped(p.composed_argument()))
}

/// The 1:2:3 scaling `(h, gamma, tau) -> (alpha h, alpha^2 gamma, alpha^3 tau)`.
pub fn kpz_rescale(p: &ScalePoint, alpha: f64) -> Result<ScalePoint> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("rescale factor must be positive, got {alpha}")));
    }
    ScalePoint::new(alpha * p.h, alpha * alpha * p.gamma, alpha.powi(3) * p.tau)
}

/// Several space-time points of a multi-point distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPointSpec {
    pub points: Vec<ScalePoint>,
}

impl MultiPointSpec {
    pub fn new(points: Vec<ScalePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a multi-point spec needs at least one point"));
        }
        for p in &points {
            p.check()?;
        }
        Ok(Self { points })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// Whether all times differ, as required in multi-time settings.
    pub fn times_distinct(&self) -> bool {
        let mut t: Vec<f64> = self.points.iter().map(|p| p.tau).collect();
        t.sort_by(f64::total_cmp);
        t.windows(2).all(|w| w[0] != w[1])
    }

    pub fn rescaled(&self, alpha: f64) -> Result<Self> {
        let points = self.points.iter().map(|p| kpz_rescale(p, alpha)).collect::<Result<_>>()?;
        Ok(Self { points })
    }
}

/// Diagonal of `D(z)`: `exp(-tau_i z^3 / 3 + gamma_i z^2 / 2 + h_i z)` for each
/// point, followed by a final `1`.
pub fn d_matrix_diag(z: Complex64, spec: &MultiPointSpec) -> Result<Vec<Complex64>> {
    if spec.points.is_empty() {
        return Err(Error::invalid("a multi-point spec needs at least one point"));
    }
    let z2 = z * z;
    let z3 = z2 * z;
    let mut out: Vec<Complex64> = spec
        .points
        .iter()
        .map(|p| (-p.tau / 3.0 * z3 + p.gamma / 2.0 * z2 + p.h * z).exp())
        .collect();
    out.push(Complex64::new(1.0, 0.0));
    Ok(out)
}
