//! The limiting discrete root set `exp(-s^2 / 2) = zeta` and the map from
//! finite half-filled rings onto it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bethe::BetheRootSet;
use crate::complex_serde;
use crate::error::{Error, Result};

/// Roots `s` of `exp(-s^2/2) = zeta` with `|s| <= radius_cap`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRootSet {
    #[serde(with = "complex_serde::scalar")]
    pub zeta: Complex64,
    pub radius_cap: f64,
    #[serde(with = "complex_serde::vec")]
    pub roots: Vec<Complex64>,
}

/// `s = +-(-2 Log zeta - 4 pi i k)^{1/2}` over all integers `k` with `|s| <= R`.
pub fn limit_root_set(zeta: Complex64, radius_cap: f64) -> Result<LimitRootSet> {
    let a = zeta.norm();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invalid(format!("|zeta| must lie in (0, 1), got {a}")));
    }
    if !(radius_cap > 0.0) || !radius_cap.is_finite() {
        return Err(Error::invalid("radius cap must be positive"));
    }
    let base = -2.0 * zeta.ln();
    // |base - 4 pi i k| >= 4 pi |k| - |base|
    let kmax = ((radius_cap * radius_cap + base.norm()) / (4.0 * PI)).ceil() as i64 + 1;
    let mut roots: Vec<Complex64> = Vec::new();
    for k in -kmax..=kmax {
        let s = (base - Complex64::new(0.0, 4.0 * PI * k as f64)).sqrt();
        for r in [s, -s] {
            if r.norm() <= radius_cap && !roots.iter().any(|q| (q - r).norm() < 1e-12) {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|p, q| p.norm().total_cmp(&q.norm()).then(p.arg().total_cmp(&q.arg())));
    Ok(LimitRootSet { zeta, radius_cap, roots })
}

/// Map the roots of a half-filled ring (`L = 2N`, `z = (-4)^{-N} zeta`)
/// through `s = 2 sqrt(2N) (w + 1/2)`.
pub fn rescale_bethe_to_limit(set: &BetheRootSet, zeta: Complex64) -> Result<Vec<Complex64>> {
    let n = set.particles;
    if set.period != 2 * n {
        return Err(Error::invalid(format!("need L = 2N, got L={}, N={n}", set.period)));
    }
    let expected = zeta * (-4f64).powi(-(n as i32));
    if (set.z - expected).norm() > 1e-12 * expected.norm() {
        return Err(Error::invalid("z is not (-4)^{-N} zeta"));
    }
    let c = 2.0 * (2.0 * n as f64).sqrt();
    Ok(set.roots.iter().map(|w| c * (w + 0.5)).collect())
}

/// Largest distance from each target with `|s| <= cap` to a distinct
/// candidate, pairing greedily in order of increasing distance.
pub fn max_matching_distance(candidates: &[Complex64], targets: &[Complex64], cap: f64) -> f64 {
    let targets: Vec<Complex64> = targets.iter().copied().filter(|s| s.norm() <= cap).collect();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        for (j, c) in candidates.iter().enumerate() {
            pairs.push(((t - c).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut t_used = vec![false; targets.len()];
    let mut c_used = vec![false; candidates.len()];
    let mut worst = 0.0f64;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if !t_used[i] && !c_used[j] {
            t_used[i] = true;
            c_used[j] = true;
            worst = worst.max(d);
            matched += 1;
        }
    }
    if matched < targets.len() { f64::INFINITY } else { worst }
}
