//! Trapezoidal quadrature of contour integrals over circles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::numerics::{CONTOUR_INITIAL_NODES, CONTOUR_MAX_NODES, CONTOUR_REL_TOL};

/// A circle with an initial trapezoid node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    #[serde(with = "complex_serde::scalar")]
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        let c = Self { center, radius, nodes };
        c.validate()?;
        Ok(c)
    }

    /// Circle of radius 1 about `-1/2`, enclosing both `0` and `-1`.
    pub fn line_default() -> Self {
        Self { center: Complex64::new(-0.5, 0.0), radius: 1.0, nodes: CONTOUR_INITIAL_NODES }
    }

    /// Circle about the origin.
    pub fn origin(radius: f64) -> Self {
        Self { center: Complex64::new(0.0, 0.0), radius, nodes: CONTOUR_INITIAL_NODES }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::invalid(format!("contour radius must be positive, got {}", self.radius)));
        }
        if self.nodes < 8 || self.nodes % 2 != 0 {
            return Err(Error::invalid(format!("contour node count must be even and >= 8, got {}", self.nodes)));
        }
        Ok(())
    }

    pub fn encloses(&self, p: Complex64) -> bool {
        (p - self.center).norm() < self.radius
    }

    /// `(1 / 2 pi i) \oint f(s) ds`, doubling the node count until two
    /// successive estimates agree to the relative tolerance.
    pub fn integrate<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Complex64,
    {
        self.validate()?;
        let mut k = self.nodes;
        let (mut prev, _) = self.trapezoid(k, &mut f);
        loop {
            k *= 2;
            let (cur, scale) = self.trapezoid(k, &mut f);
            let delta = (cur - prev).norm();
            if delta <= CONTOUR_REL_TOL * scale.max(1.0) {
                return Ok(cur);
            }
            if k >= CONTOUR_MAX_NODES {
                return Err(Error::QuadratureNotConverged { nodes: k, delta });
            }
            prev = cur;
        }
    }

    /// Trapezoid estimate with `k` nodes and the largest single contribution.
    fn trapezoid<F: FnMut(Complex64) -> Complex64>(&self, k: usize, f: &mut F) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for m in 0..k {
            let e = Complex64::from_polar(self.radius, 2.0 * PI * m as f64 / k as f64);
            let v = f(self.center + e) * e;
            scale = scale.max(v.norm());
            sum += v;
        }
        (sum / k as f64, scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues() {
        let c = ContourSpec::line_default();
        let one = Complex64::new(1.0, 0.0);
        let r = c.integrate(|s| one / s).unwrap();
        assert!((r - one).norm() < 1e-14);
        let r = c.integrate(|s| one / (s * (s + 1.0))).unwrap();
        assert!(r.norm() < 1e-14);
        let r = c.integrate(|s| (2.0 * s).exp() / (s + 1.0).powi(3)).unwrap();
        let want = 2.0 * (-2f64).exp();
        assert!((r - want).norm() < 1e-13);
        let r = c.integrate(|s| s.powi(3) * (s + 1.0).powi(2)).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ContourSpec::new(Complex64::new(0.0, 0.0), -1.0, 16).is_err());
        assert!(ContourSpec::new(Complex64::new(0.0, 0.0), 1.0, 6).is_err());
        assert!(ContourSpec::new(Complex64::new(0.0, 0.0), 1.0, 9).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        // essential singularity of huge order inside the contour
        let c = ContourSpec::origin(0.1);
        let err = c.integrate(|s| (1.0 / s.powi(8)).exp()).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { nodes, .. } if nodes == CONTOUR_MAX_NODES));
    }
}
