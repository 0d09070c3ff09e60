//! Longest increasing subsequences and Poisson last passage.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamKey;

/// Patience sorting over any totally ordered sequence.
fn patience<T: PartialOrd + Copy>(seq: impl IntoIterator<Item = T>) -> usize {
    let mut tops: Vec<T> = Vec::new();
    for v in seq {
        // strictly increasing: replace the first top that is >= v
        let k = tops.partition_point(|t| *t < v);
        if k == tops.len() {
            tops.push(v);
        } else {
            tops[k] = v;
        }
    }
    tops.len()
}

/// Length of the longest strictly increasing subsequence of a permutation
/// of `{1, ..., N}`.
pub fn lis_length(perm: &[u32]) -> Result<usize> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &v in perm {
        let v = v as usize;
        if v == 0 || v > n {
            return Err(Error::invalid(format!("entry {v} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::invalid(format!("duplicate entry {v}")));
        }
    }
    Ok(patience(perm.iter().copied()))
}

/// Points of a planar configuration with distinct coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub width: f64,
    pub height: f64,
    pub points: Vec<(f64, f64)>,
}

impl PointCloud {
    /// Relative order of the `y` coordinates after sorting by `x`.
    pub fn to_permutation(&self) -> Vec<u32> {
        let mut by_x: Vec<usize> = (0..self.points.len()).collect();
        by_x.sort_by(|&a, &b| self.points[a].0.total_cmp(&self.points[b].0));
        let mut by_y = by_x.clone();
        by_y.sort_by(|&a, &b| self.points[a].1.total_cmp(&self.points[b].1));
        let mut rank = vec![0u32; self.points.len()];
        for (r, &i) in by_y.iter().enumerate() {
            rank[i] = r as u32 + 1;
        }
        by_x.iter().map(|&i| rank[i]).collect()
    }

    /// Maximal number of points on an up/right path from the origin.
    pub fn last_passage(&self) -> usize {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        patience(pts.iter().map(|p| p.1))
    }
}

fn check_extents(t: f64, s: f64) -> Result<()> {
    if !(t > 0.0 && s > 0.0 && t.is_finite() && s.is_finite()) {
        return Err(Error::invalid(format!("extents must be positive, got ({t}, {s})")));
    }
    Ok(())
}

/// Poisson process of unit intensity on `(0, t) x (0, s)`.
pub fn sample_point_cloud(t: f64, s: f64, key: StreamKey) -> Result<PointCloud> {
    check_extents(t, s)?;
    let mut rng = key.rng();
    let count = Poisson::new(t * s)
        .map_err(|e| Error::invalid(e.to_string()))?
        .sample(&mut rng) as usize;
    let points = (0..count)
        .map(|_| (t * rng.random::<f64>(), s * rng.random::<f64>()))
        .collect();
    Ok(PointCloud { width: t, height: s, points })
}

/// Poisson last-passage time `L(t, s)`.
///
/// Conditional on the count, the `x`-order of the points is independent of
/// their `y` values, so the `y` values are drawn directly in `x`-order.
pub fn sample_poisson_lis(t: f64, s: f64, key: StreamKey) -> Result<usize> {
    check_extents(t, s)?;
    let mut rng = key.rng();
    let count = Poisson::new(t * s)
        .map_err(|e| Error::invalid(e.to_string()))?
        .sample(&mut rng) as usize;
    Ok(patience((0..count).map(|_| rng.random::<f64>())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::streams;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let perm: Vec<u32> = "475168293".bytes().map(|b| (b - b'0') as u32).collect();
        assert_eq!(lis_length(&perm).unwrap(), 5);
    }

    #[test]
    fn identity_and_reverse() {
        let id: Vec<u32> = (1..=50).collect();
        assert_eq!(lis_length(&id).unwrap(), 50);
        let rev: Vec<u32> = (1..=50).rev().collect();
        assert_eq!(lis_length(&rev).unwrap(), 1);
        assert_eq!(lis_length(&[]).unwrap(), 0);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(lis_length(&[1, 2, 2]).is_err());
        assert!(lis_length(&[0, 1]).is_err());
        assert!(lis_length(&[1, 5]).is_err());
    }

    #[test]
    fn empty_realization() {
        let pc = PointCloud { width: 1.0, height: 1.0, points: vec![] };
        assert_eq!(pc.last_passage(), 0);
        assert!(sample_poisson_lis(0.0, 1.0, StreamKey::new(1, 0, 0)).is_err());
        // intensity 1e-9: almost surely empty
        let k = StreamKey::new(1, 0, streams::POISSON_LIS);
        assert_eq!(sample_poisson_lis(1e-5, 1e-4, k).unwrap(), 0);
    }

    fn mean_scaled(t: f64, reps: u64) -> f64 {
        (0..reps)
            .map(|r| {
                let k = StreamKey::new(9, r, streams::POISSON_LIS);
                sample_poisson_lis(t, t, k).unwrap() as f64 / t
            })
            .sum::<f64>()
            / reps as f64
    }

    #[test]
    fn ulam_limit() {
        // E L(t,t) = 2t + mu t^{1/3} + o(t^{1/3}) with mu the Tracy-Widom mean
        let mu = -1.771_086_807;
        let mean = mean_scaled(100.0, 1000);
        assert!((mean - (2.0 + mu * 100f64.powf(-2.0 / 3.0))).abs() <= 0.01, "mean {mean}");
        let mean = mean_scaled(400.0, 200);
        assert!((mean - 2.0).abs() <= 0.05, "mean {mean}");
    }

    fn brute_lis(p: &[u32]) -> usize {
        let n = p.len();
        let mut best = vec![1usize; n];
        for i in 0..n {
            for j in 0..i {
                if p[j] < p[i] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    proptest! {
        #[test]
        fn patience_matches_quadratic_dp(perm in Just((1u32..=40).collect::<Vec<_>>()).prop_shuffle()) {
            prop_assert_eq!(lis_length(&perm).unwrap(), brute_lis(&perm));
        }

        #[test]
        fn cloud_permutation_roundtrip(seed in 0u64..2000) {
            let pc = sample_point_cloud(3.0, 4.0, StreamKey::new(seed, 0, streams::POISSON_LIS)).unwrap();
            let perm = pc.to_permutation();
            prop_assert_eq!(lis_length(&perm).unwrap(), pc.last_passage());
            prop_assert!(pc.points.iter().all(|&(x, y)| x > 0.0 && x < 3.0 && y > 0.0 && y < 4.0));
        }
    }
}
