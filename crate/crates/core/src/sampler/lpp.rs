//! Directed last-passage percolation on the quarter lattice.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{SampleRng, StreamKey};

/// Law of the i.i.d. site weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightSpec {
    /// Exponential with mean 1.
    Exp,
    /// `P(w = k) = (1 - q) q^k` for `k >= 0`.
    Geometric { q: f64 },
    /// Rademacher: `+1` or `-1` with probability 1/2 each.
    PlusMinusOne,
    /// Uniform on `[-sqrt 3, sqrt 3]` (mean 0, variance 1).
    UniformCentered,
    /// Centered Gaussian with standard deviation `sigma`.
    GaussianScaled { sigma: f64 },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightSpec::Geometric { q } if !(0.0..1.0).contains(&q) => {
                Err(Error::invalid(format!("geometric parameter {q} not in [0, 1)")))
            }
            WeightSpec::GaussianScaled { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::invalid(format!("gaussian sigma {sigma} must be positive")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(self, WeightSpec::Exp | WeightSpec::Geometric { .. })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            WeightSpec::Exp => 1.0,
            WeightSpec::Geometric { q } => q / (1.0 - q),
            _ => 0.0,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            WeightSpec::Exp => 1.0,
            WeightSpec::Geometric { q } => q / ((1.0 - q) * (1.0 - q)),
            WeightSpec::PlusMinusOne | WeightSpec::UniformCentered => 1.0,
            WeightSpec::GaussianScaled { sigma } => sigma * sigma,
        }
    }

    #[inline]
    pub fn draw(&self, rng: &mut SampleRng) -> f64 {
        match *self {
            WeightSpec::Exp => Exp1.sample(rng),
            WeightSpec::Geometric { q } => {
                if q == 0.0 {
                    0.0
                } else {
                    let u: f64 = 1.0 - rng.random::<f64>();
                    (u.ln() / q.ln()).floor()
                }
            }
            WeightSpec::PlusMinusOne => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            WeightSpec::UniformCentered => {
                let s3 = 3f64.sqrt();
                rng.random_range(-s3..s3)
            }
            WeightSpec::GaussianScaled { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
        }
    }
}

/// Weight grid and its last-passage times, indexed from `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LppTable {
    pub m: usize,
    pub n: usize,
    /// Row-major, `weights[(i - 1) * n + (j - 1)]` is `w(i, j)`.
    pub weights: Vec<f64>,
    pub lpt: Vec<f64>,
}

impl LppTable {
    /// Builds the last-passage table for a given weight grid.
    ///
    /// Paths start at `(1, 1)`, so sites outside the grid are unreachable;
    /// for nonnegative weights this is the same as treating them as 0.
    pub fn from_weights(m: usize, n: usize, weights: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("grid extents must be positive, got {m}x{n}")));
        }
        if weights.len() != m * n {
            return Err(Error::invalid("weight grid has the wrong length"));
        }
        let mut lpt = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                let up = if i > 0 { lpt[(i - 1) * n + j] } else { f64::NEG_INFINITY };
                let left = if j > 0 { lpt[i * n + j - 1] } else { f64::NEG_INFINITY };
                let best = up.max(left);
                let best = if best == f64::NEG_INFINITY { 0.0 } else { best };
                lpt[i * n + j] = best + weights[i * n + j];
            }
        }
        Ok(Self { m, n, weights, lpt })
    }

    /// `L(i, j)` with 1-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lpt[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i - 1) * self.n + (j - 1)]
    }

    pub fn corner(&self) -> f64 {
        self.get(self.m, self.n)
    }
}

/// Samples an `m x n` weight grid and fills its last-passage table.
pub fn dlpp_table(m: usize, n: usize, spec: WeightSpec, key: StreamKey) -> Result<LppTable> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!("grid extents must be positive, got {m}x{n}")));
    }
    spec.validate()?;
    let mut rng = key.rng();
    let weights: Vec<f64> = (0..m * n).map(|_| spec.draw(&mut rng)).collect();
    LppTable::from_weights(m, n, weights)
}

/// TASEP height with step initial condition at `(x, t)` read off a DLPP table
/// with exponential weights: `h(x, t) = max{ m + n : m - n = x, L(m, n) <= t }`,
/// and `|x|` when no corner on that diagonal has been flipped.
pub fn height_from_dlpp(table: &LppTable, x: i64, t: f64) -> Result<i64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    let ax = x.unsigned_abs() as usize;
    let at = |k: usize| -> Option<f64> {
        // k-th site (k >= 1) on the diagonal m - n = x
        let (i, j) = if x >= 0 { (ax + k, k) } else { (k, ax + k) };
        (i <= table.m && j <= table.n).then(|| table.get(i, j))
    };
    let mut k = 0usize;
    loop {
        match at(k + 1) {
            Some(l) if l <= t => k += 1,
            Some(_) => break,
            None => {
                return Err(Error::TableTooSmall(format!(
                    "diagonal m - n = {x} leaves the {}x{} table with L <= {t}",
                    table.m, table.n
                )))
            }
        }
    }
    Ok(x.abs() + 2 * k as i64)
}

/// Heights `h(x, t)` for several `x` from one `m x n` exponential-weight
/// sample without storing the table.
///
/// Weights are drawn in the same row-major order as [`dlpp_table`], so the
/// result equals [`height_from_dlpp`] on `dlpp_table(m, n, WeightSpec::Exp, key)`.
pub fn dlpp_heights(m: usize, n: usize, xs: &[i64], t: f64, key: StreamKey) -> Result<Vec<i64>> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!("grid extents must be positive, got {m}x{n}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    // diagonal d = i - j is stored at offset d + n - 1
    let mut count = vec![0usize; m + n - 1];
    let mut deepest = vec![f64::NEG_INFINITY; m + n - 1];
    let mut rng = key.rng();
    let mut row = vec![0.0f64; n];
    for i in 0..m {
        let mut left = 0.0f64;
        for (j, cell) in row.iter_mut().enumerate() {
            let w: f64 = Exp1.sample(&mut rng);
            *cell = left.max(*cell) + w;
            left = *cell;
            let d = i + n - 1 - j;
            count[d] += usize::from(*cell <= t);
            deepest[d] = *cell;
        }
    }
    xs.iter()
        .map(|&x| {
            let d = x + n as i64 - 1;
            if d < 0 || d >= (m + n - 1) as i64 || deepest[d as usize] <= t {
                return Err(Error::TableTooSmall(format!(
                    "diagonal m - n = {x} leaves the {m}x{n} table with L <= {t}"
                )));
            }
            Ok(x.abs() + 2 * count[d as usize] as i64)
        })
        .collect()
}

/// Last-passage value `L(rows, cols)` without storing the table.
///
/// The rolling row keeps memory at `O(min)`; used by thin and Brownian DLPP.
pub fn last_passage_value(
    rows: usize,
    cols: usize,
    mut weight: impl FnMut() -> f64,
) -> Result<f64> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid(format!("grid extents must be positive, got {rows}x{cols}")));
    }
    let mut row = vec![f64::NEG_INFINITY; cols];
    for r in 0..rows {
        let mut left = f64::NEG_INFINITY;
        for (c, cell) in row.iter_mut().enumerate() {
            let best = left.max(*cell);
            let best = if r == 0 && c == 0 { 0.0 } else { best };
            *cell = best + weight();
            left = *cell;
        }
    }
    Ok(row[cols - 1])
}

/// `L(n, k)` on a thin `n x k` grid with i.i.d. weights of law `spec`.
pub fn thin_dlpp_sample(n: usize, k: usize, spec: WeightSpec, key: StreamKey) -> Result<f64> {
    spec.validate()?;
    let mut rng = key.rng();
    // k short rows of length n
    last_passage_value(k, n, || spec.draw(&mut rng))
}
