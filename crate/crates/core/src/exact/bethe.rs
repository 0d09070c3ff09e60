//! Roots of `w^N (w+1)^{L-N} = z` by Aberth–Ehrlich simultaneous iteration.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_serde;
use crate::error::{Error, Result};
use crate::numerics::{NEAR_CRITICAL_GAP, ROOT_MAX_SWEEPS, ROOT_TOL};

/// All `L` roots for one value of `z`, each with its residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRootSet {
    pub period: usize,
    pub particles: usize,
    #[serde(with = "complex_serde::scalar")]
    pub z: Complex64,
    #[serde(with = "complex_serde::vec")]
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
}

impl BetheRootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_gap(&self) -> f64 {
        min_gap(&self.roots)
    }
}

/// `|z|` at which root clusters around `0` and `-1` collide.
pub fn critical_z(period: usize, particles: usize) -> f64 {
    let rho = particles as f64 / period as f64;
    rho.powi(particles as i32) * (1.0 - rho).powi((period - particles) as i32)
}

fn min_gap(roots: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            gap = gap.min((roots[i] - roots[j]).norm());
        }
    }
    gap
}

struct Poly {
    n: i32,
    m: i32,
    l: f64,
    z: Complex64,
}

impl Poly {
    fn value(&self, w: Complex64) -> Complex64 {
        w.powi(self.n) * (w + 1.0).powi(self.m) - self.z
    }

    fn derivative(&self, w: Complex64) -> Complex64 {
        w.powi(self.n - 1) * (w + 1.0).powi(self.m - 1) * (self.l * w + self.n as f64)
    }

    fn newton(&self, w: Complex64) -> Complex64 {
        self.value(w) / self.derivative(w)
    }
}

/// Solve `w^N (w+1)^{L-N} = z` for all `L` roots.
pub fn bethe_roots(period: usize, particles: usize, z: Complex64) -> Result<BetheRootSet> {
    if period < 2 || particles == 0 || particles >= period {
        return Err(Error::invalid(format!("need L >= 2 and 1 <= N < L, got L={period}, N={particles}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid("z must be finite"));
    }
    let p = Poly { n: particles as i32, m: (period - particles) as i32, l: period as f64, z };
    let rho = particles as f64 / period as f64;
    let mut w: Vec<Complex64> = (0..period)
        .map(|k| {
            let phase = (2.0 * PI * k as f64 + 0.7) / period as f64 + 0.013 * k as f64;
            Complex64::new(-rho, 0.0) + Complex64::from_polar(0.5, phase)
        })
        .collect();
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < ROOT_MAX_SWEEPS {
        sweeps += 1;
        let mut worst = 0.0f64;
        for k in 0..period {
            let r = p.newton(w[k]);
            let s: Complex64 = (0..period).filter(|&j| j != k).map(|j| 1.0 / (w[k] - w[j])).sum();
            let step = r / (1.0 - r * s);
            if step.re.is_finite() && step.im.is_finite() {
                w[k] -= step;
                worst = worst.max(step.norm() / w[k].norm().max(1.0));
            } else {
                worst = f64::INFINITY;
            }
        }
        if worst < ROOT_TOL {
            converged = true;
            break;
        }
    }
    for wk in w.iter_mut() {
        for _ in 0..2 {
            let step = p.newton(*wk);
            if step.re.is_finite() && step.im.is_finite() {
                *wk -= step;
            }
        }
    }
    let residuals: Vec<f64> = w.iter().map(|&wk| p.value(wk).norm()).collect();
    let residual = residuals.iter().copied().fold(0.0, f64::max);
    // near the collision point the gap is 2 sqrt(2 |z - p(-rho)| / |p''(-rho)|),
    // which f64 root-finding cannot resolve below roughly sqrt(eps)
    let sign = if particles % 2 == 0 { 1.0 } else { -1.0 };
    let collision = sign * critical_z(period, particles);
    let curvature = period as f64 * rho.powi(particles as i32 - 1) * (1.0 - rho).powi((period - particles) as i32 - 1);
    let predicted = 2.0 * (2.0 * (z - collision).norm() / curvature).sqrt();
    let gap = min_gap(&w).min(predicted);
    if gap < NEAR_CRITICAL_GAP {
        return Err(Error::NearCritical { gap });
    }
    if !converged || !(residual <= 1e-12 * z.norm().max(1.0)) {
        return Err(Error::RootsNotConverged { sweeps, residual });
    }
    let mut order: Vec<usize> = (0..period).collect();
    order.sort_by(|&a, &b| w[a].re.total_cmp(&w[b].re).then(w[a].im.total_cmp(&w[b].im)));
    Ok(BetheRootSet {
        period,
        particles,
        z,
        roots: order.iter().map(|&k| w[k]).collect(),
        residuals: order.iter().map(|&k| residuals[k]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn matches(got: &[Complex64], want: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; want.len()];
        got.iter().all(|g| {
            let best = (0..want.len())
                .filter(|&k| !used[k])
                .min_by(|&a, &b| (want[a] - g).norm().total_cmp(&(want[b] - g).norm()));
            match best {
                Some(k) if (want[k] - g).norm() < tol => {
                    used[k] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn quadratic_cases() {
        let r = bethe_roots(2, 1, c(0.0, 0.0)).unwrap();
        assert!(matches(&r.roots, &[c(0.0, 0.0), c(-1.0, 0.0)], 1e-14));
        for z in [c(0.1, 0.0), c(-0.2, 0.3), c(2.0, -1.0)] {
            let r = bethe_roots(2, 1, z).unwrap();
            let d = (1.0 + 4.0 * z).sqrt();
            assert!(matches(&r.roots, &[(-1.0 + d) / 2.0, (-1.0 - d) / 2.0], 1e-12), "{z}");
        }
    }

    #[test]
    fn two_clusters_at_half_critical() {
        let (l, n) = (24, 8);
        let zc = critical_z(l, n);
        let r = bethe_roots(l, n, c(0.5 * zc, 0.0)).unwrap();
        assert_eq!(r.roots.len(), 24);
        assert!(r.max_residual() < 1e-12);
        let rho = n as f64 / l as f64;
        // one closed cluster around 0 with N roots, one around -1 with L - N
        let right = r.roots.iter().filter(|w| w.re > -rho).count();
        assert_eq!(right, n);
        for w in &r.roots {
            let conj = w.conj();
            assert!(r.roots.iter().any(|v| (v - conj).norm() < 1e-12));
        }
        // roots stay on the level curve |w^N (w+1)^{L-N}| = |z|
        for w in &r.roots {
            let lvl = w.norm().powi(8) * (w + 1.0).norm().powi(16);
            assert!((lvl / (0.5 * zc) - 1.0).abs() < 1e-9);
        }
    }

    fn zc_even() -> f64 {
        critical_z(8, 4)
    }

    #[test]
    fn near_critical_is_reported() {
        let zc = critical_z(6, 3);
        // roots collide at w = -N/L, where w^N (w+1)^{L-N} = (-1)^N z_c
        let err = bethe_roots(6, 3, c(-zc, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NearCritical { .. }), "{err:?}");
        let err = bethe_roots(8, 4, c(zc_even(), 1e-21)).unwrap_err();
        assert!(matches!(err, Error::NearCritical { .. }), "{err:?}");
        // same modulus, away from the collision point, is fine
        assert!(bethe_roots(6, 3, c(zc, 0.0)).is_ok());
        assert!(bethe_roots(4, 0, c(0.1, 0.0)).is_err());
        assert!(bethe_roots(4, 4, c(0.1, 0.0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn certificates_hold(l in 3usize..30, nf in 0.05f64..0.95, frac in 0.05f64..0.9, arg in -3.1f64..3.1) {
            let n = ((l as f64 * nf) as usize).clamp(1, l - 1);
            let z = Complex64::from_polar(frac * critical_z(l, n), arg);
            let r = bethe_roots(l, n, z).unwrap();
            prop_assert_eq!(r.roots.len(), l);
            prop_assert!(r.max_residual() <= 1e-12);
            prop_assert!(r.min_gap() > 1e-9);
        }
    }
}
