//! Tabulated distribution functions with monotone cubic interpolation.

use std::sync::OnceLock;

use rand::Rng;

use super::painleve::tw_cdf_clamped;
use crate::error::{Error, Result};
use crate::numerics::{TW_TABLE_GRID, TW_TABLE_STEP};

/// A nondecreasing distribution function sampled on an increasing grid.
///
/// Between grid points the table is interpolated by the Fritsch–Carlson
/// monotone cubic; outside the grid it is constant at the end values.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    grid: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    method: String,
}

impl CdfTable {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, method: impl Into<String>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::invalid("a CDF table needs at least two matching grid/value entries"));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("CDF grid must be strictly increasing"));
        }
        if !values.iter().all(|v| (0.0..=1.0).contains(v)) || !values.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::invalid("CDF values must be nondecreasing in [0, 1]"));
        }
        let slopes = monotone_slopes(&grid, &values);
        Ok(Self { grid, values, slopes, method: method.into() })
    }

    /// Tabulate `f` on `grid`, enforcing monotonicity against rounding noise.
    pub fn from_fn(grid: Vec<f64>, method: impl Into<String>, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        let mut run = 0.0f64;
        for &x in &grid {
            run = run.max(f(x)?.clamp(0.0, 1.0));
            values.push(run);
        }
        Self::new(grid, values, method)
    }

    /// The shared Tracy–Widom table on the default grid, built from the
    /// Painlevé II solution.
    pub fn tracy_widom() -> &'static CdfTable {
        static T: OnceLock<CdfTable> = OnceLock::new();
        T.get_or_init(|| {
            Self::from_fn(uniform_grid(TW_TABLE_GRID.0, TW_TABLE_GRID.1, TW_TABLE_STEP), "painleve", |x| {
                Ok(tw_cdf_clamped(x))
            })
            .expect("Tracy-Widom table is monotone")
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    fn segment(&self, x: f64) -> usize {
        self.grid.partition_point(|g| *g <= x).clamp(1, self.grid.len() - 1) - 1
    }

    fn hermite(&self, k: usize, x: f64) -> f64 {
        let (x0, x1) = (self.grid[k], self.grid[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }

    /// Interpolated distribution function.
    pub fn eval(&self, x: f64) -> f64 {
        let last = self.grid.len() - 1;
        if x <= self.grid[0] {
            return self.values[0];
        }
        if x >= self.grid[last] {
            return self.values[last];
        }
        self.hermite(self.segment(x), x).clamp(self.values[0], self.values[last])
    }

    /// Generalized inverse `inf { x : F(x) >= u }`, restricted to the grid span.
    pub fn quantile(&self, u: f64) -> f64 {
        let last = self.grid.len() - 1;
        if u <= self.values[0] {
            return self.grid[0];
        }
        if u >= self.values[last] {
            return self.grid[last];
        }
        let k = self.values.partition_point(|v| *v < u).clamp(1, last) - 1;
        let (mut lo, mut hi) = (self.grid[k], self.grid[k + 1]);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.hermite(k, mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        hi
    }

    /// One draw by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `lo, lo + step, ..., hi` with the count rounded to the nearest integer.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn monotone_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for k in 1..n - 1 {
        m[k] = if d[k - 1] * d[k] <= 0.0 { 0.0 } else { 0.5 * (d[k - 1] + d[k]) };
    }
    for k in 0..n - 1 {
        if d[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / d[k];
        let b = m[k + 1] / d[k];
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[k] = tau * a * d[k];
            m[k + 1] = tau * b * d[k];
        }
    }
    m
}
