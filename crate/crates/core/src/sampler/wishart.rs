//! Complex Wishart matrices `W = X X*`.
//!
//! Entries of the `n x m` matrix `X` are standard complex Gaussians: real and
//! imaginary parts are independent `N(0, 1/2)`, so `E|X_ij|^2 = 1`.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::rng::StreamKey;

/// Eigenvalues of one Wishart draw, in decreasing order.
pub fn wishart_eigenvalues(n: usize, m: usize, key: StreamKey) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if m < n {
        return Err(Error::invalid(format!("need m >= n, got m = {m}, n = {n} (transpose instead)")));
    }
    let mut rng = key.rng();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut re = vec![0.0; n * m];
    let mut im = vec![0.0; n * m];
    for k in 0..n * m {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        re[k] = s * a;
        im[k] = s * b;
    }
    // W = A + iB with A symmetric, B antisymmetric
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (mut sr, mut si) = (0.0, 0.0);
            for k in 0..m {
                let (xr, xi) = (re[i * m + k], im[i * m + k]);
                let (yr, yi) = (re[j * m + k], -im[j * m + k]);
                sr += xr * yr - xi * yi;
                si += xr * yi + xi * yr;
            }
            a[i * n + j] = sr;
            b[i * n + j] = si;
        }
    }
    // real embedding [[A, -B], [B, A]] carries every eigenvalue twice
    let d = 2 * n;
    let mut e = vec![0.0; d * d];
    for i in 0..n {
        for j in 0..n {
            e[i * d + j] = a[i * n + j];
            e[(i + n) * d + (j + n)] = a[i * n + j];
            e[i * d + (j + n)] = -b[i * n + j];
            e[(i + n) * d + j] = b[i * n + j];
        }
    }
    let mut ev = symmetric_eigenvalues(e, d);
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev.into_iter().step_by(2).collect())
}

/// Largest eigenvalue of an `n x m` complex Wishart matrix.
pub fn sample_wishart_lmax(n: usize, m: usize, key: StreamKey) -> Result<f64> {
    Ok(wishart_eigenvalues(n, m, key)?[0])
}

/// Trace of `X X*` for the same draw, for consistency checks.
#[cfg(test)]
fn wishart_trace(n: usize, m: usize, key: StreamKey) -> f64 {
    let mut rng = key.rng();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..n * m)
        .map(|_| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            (s * a).powi(2) + (s * b).powi(2)
        })
        .sum()
}
