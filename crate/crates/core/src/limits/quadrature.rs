//! Gauss–Legendre and Chebyshev building blocks.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm) = if n == 0 { (1.0, 0.0) } else if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[n - 1 - i] = z;
        x[i] = -z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Chebyshev extreme points `cos(pi j / n)`, `j = 0..=n` (descending).
pub fn cheb_points(n: usize) -> Vec<f64> {
    (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

/// Chebyshev differentiation matrix on [`cheb_points`], row-major `(n+1)^2`.
pub fn cheb_diff_matrix(n: usize) -> Vec<f64> {
    let x = cheb_points(n);
    let m = n + 1;
    let c = |i: usize| if i == 0 || i == n { 2.0 } else { 1.0 };
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        let mut row = 0.0;
        for j in 0..m {
            if i != j {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let v = c(i) / c(j) * sign / (x[i] - x[j]);
                d[i * m + j] = v;
                row += v;
            }
        }
        d[i * m + i] = -row;
    }
    d
}

/// Coefficients `c` with `f = sum c_k T_k` interpolating values at [`cheb_points`].
pub fn cheb_coeffs(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    let mut c = vec![0.0; n + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, v) in values.iter().enumerate() {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            s += w * v * (PI * (j * k) as f64 / n as f64).cos();
        }
        *ck = 2.0 * s / n as f64;
    }
    c[0] /= 2.0;
    c[n] /= 2.0;
    c
}

/// Clenshaw evaluation of `sum c_k T_k(x)`.
pub fn cheb_eval(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

/// Coefficients of the antiderivative vanishing at `x = 1`.
pub fn cheb_integral_from_right(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let at = |k: usize| c.get(k).copied().unwrap_or(0.0);
    let mut b = vec![0.0; n + 1];
    b[1] = at(0) - at(2) / 2.0;
    for (k, bk) in b.iter_mut().enumerate().skip(2) {
        *bk = (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
    }
    b[0] = -b.iter().skip(1).sum::<f64>();
    b
}

/// `int_{-1}^{1} sum c_k T_k`.
pub fn cheb_definite(c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .map(|(k, ck)| ck * 2.0 / (1.0 - (k * k) as f64))
        .sum()
}
