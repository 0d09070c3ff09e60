//! Tracy–Widom CDF from the Hastings–McLeod solution of Painlevé II.
//!
//! The solution is computed as a boundary-value problem on the whole domain
//! `[-12, 8]` by Chebyshev collocation and Newton's method, which avoids the
//! exponential instability of marching leftward from the Airy tail. The
//! boundary values are `Ai(8)` on the right and the large-negative-argument
//! expansion `sqrt(-x/2) (1 + 1/(8x^3) - 73/(128x^6) + ...)` on the left.

use std::sync::OnceLock;

use super::airy::airy_ai_unchecked;
use super::fredholm::check_domain;
use super::quadrature::{
    cheb_coeffs, cheb_definite, cheb_diff_matrix, cheb_eval, cheb_integral_from_right, cheb_points,
};
use crate::error::{Error, Result};
use crate::linalg::solve_real;
use crate::numerics::{PAINLEVE_NEWTON_TOL, PAINLEVE_NODES, PAINLEVE_REFINE_TOL, TW_DOMAIN};

const LEFT_SERIES: [f64; 5] = [
    1.0 / 8.0,
    -73.0 / 128.0,
    10657.0 / 1024.0,
    -13_912_277.0 / 32768.0,
    8_045_883_943.0 / 262_144.0,
];

const AIRY_TAIL_FROM: f64 = 5.0;

fn left_boundary(x: f64) -> f64 {
    let y = x.powi(-3);
    let mut s = 1.0;
    let mut p = 1.0;
    for c in LEFT_SERIES {
        p *= y;
        s += c * p;
    }
    (-x / 2.0).sqrt() * s
}

/// A collocated Hastings–McLeod solution and the derived distribution function.
#[derive(Debug, Clone)]
pub struct HastingsMcLeod {
    left: f64,
    right: f64,
    nodes: Vec<f64>,
    q: Vec<f64>,
    /// antiderivatives (vanishing at the right end) of q^2 and s q^2
    int_q2: Vec<f64>,
    int_sq2: Vec<f64>,
    tail0: f64,
    tail1: f64,
}

impl HastingsMcLeod {
    /// Solve on the default domain with `nodes` collocation intervals.
    pub fn solve(nodes: usize) -> Result<Self> {
        let (a, b) = TW_DOMAIN;
        let n = nodes;
        let xi = cheb_points(n);
        let xs: Vec<f64> = xi.iter().map(|t| a + (b - a) * (t + 1.0) / 2.0).collect();
        let d = cheb_diff_matrix(n);
        let m = n + 1;
        let scale = (2.0 / (b - a)).powi(2);
        let mut d2 = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let dik = d[i * m + k];
                if dik == 0.0 {
                    continue;
                }
                for j in 0..m {
                    d2[i * m + j] += dik * d[k * m + j];
                }
            }
        }
        d2.iter_mut().for_each(|v| *v *= scale);

        let mut q: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let ai = airy_ai_unchecked(x).0;
                (x.min(0.0).abs() / 2.0 + ai * ai).sqrt()
            })
            .collect();
        q[0] = airy_ai_unchecked(b).0;
        q[n] = left_boundary(a);

        let inner = n - 1;
        let mut converged = false;
        for _ in 0..60 {
            let mut rhs = vec![0.0; inner];
            let mut jac = vec![0.0; inner * inner];
            for r in 0..inner {
                let i = r + 1;
                let lap: f64 = (0..m).map(|j| d2[i * m + j] * q[j]).sum();
                rhs[r] = -(lap - xs[i] * q[i] - 2.0 * q[i].powi(3));
                for c in 0..inner {
                    jac[r * inner + c] = d2[i * m + c + 1];
                }
                jac[r * inner + r] -= xs[i] + 6.0 * q[i] * q[i];
            }
            if !solve_real(jac, &mut rhs) {
                return Err(Error::BlowUp { x: a });
            }
            let step = rhs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            for r in 0..inner {
                q[r + 1] += rhs[r];
            }
            if let Some(j) = q.iter().position(|v| !v.is_finite() || v.abs() > 1e6) {
                return Err(Error::BlowUp { x: xs[j] });
            }
            if step < PAINLEVE_NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::BlowUp { x: a });
        }

        let half = (b - a) / 2.0;
        let q2: Vec<f64> = q.iter().map(|v| v * v).collect();
        let sq2: Vec<f64> = q2.iter().zip(&xs).map(|(v, x)| v * x).collect();
        let int_q2: Vec<f64> =
            cheb_integral_from_right(&cheb_coeffs(&q2)).iter().map(|c| -c * half).collect();
        let int_sq2: Vec<f64> =
            cheb_integral_from_right(&cheb_coeffs(&sq2)).iter().map(|c| -c * half).collect();
        let (ai, dai) = airy_ai_unchecked(b);
        Ok(Self {
            left: a,
            right: b,
            nodes: xi,
            q,
            int_q2,
            int_sq2,
            tail0: dai * dai - b * ai * ai,
            tail1: (2.0 * b * b * ai * ai - 2.0 * b * dai * dai - ai * dai) / 3.0,
        })
    }

    fn local(&self, x: f64) -> f64 {
        (2.0 * x - self.left - self.right) / (self.right - self.left)
    }

    /// Hastings–McLeod solution at `x` in the domain.
    pub fn q(&self, x: f64) -> f64 {
        let t = self.local(x);
        let n = self.nodes.len() - 1;
        let (mut num, mut den) = (0.0, 0.0);
        for (j, (&xj, &qj)) in self.nodes.iter().zip(&self.q).enumerate() {
            if t == xj {
                return qj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w /= 2.0;
            }
            let c = w / (t - xj);
            num += c * qj;
            den += c;
        }
        num / den
    }

    /// `int_x^inf (s - x) q(s)^2 ds`.
    pub fn log_cdf_integral(&self, x: f64) -> f64 {
        if x >= AIRY_TAIL_FROM {
            // q = Ai up to a relative O(Ai^2) correction here
            let (ai, dai) = airy_ai_unchecked(x);
            return (2.0 * x * x * ai * ai - 2.0 * x * dai * dai - ai * dai) / 3.0;
        }
        let t = self.local(x);
        let a0 = cheb_eval(&self.int_q2, t);
        let a1 = cheb_eval(&self.int_sq2, t);
        a1 - x * a0 + self.tail1 + (self.right - x) * self.tail0
    }

    /// Distribution function at `x`, clamped to `0` / `1` outside the domain.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.left {
            return 0.0;
        }
        if x >= self.right {
            return 1.0;
        }
        (-self.log_cdf_integral(x)).exp().clamp(0.0, 1.0)
    }
}

fn default_solution() -> &'static HastingsMcLeod {
    static S: OnceLock<HastingsMcLeod> = OnceLock::new();
    S.get_or_init(|| HastingsMcLeod::solve(PAINLEVE_NODES).expect("default collocation converges"))
}

/// GUE Tracy–Widom distribution function from Painlevé II, on `[-12, 8]`.
pub fn painleve2_tw_cdf(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(default_solution().cdf(x))
}

/// Same as [`painleve2_tw_cdf`] with the domain check replaced by clamping.
pub(crate) fn tw_cdf_clamped(x: f64) -> f64 {
    default_solution().cdf(x)
}

/// Largest CDF discrepancy between the default collocation and one with twice
/// the nodes, over `[-12, 8]`; errors if it exceeds the refinement tolerance.
pub fn painleve2_refinement_check() -> Result<f64> {
    let fine = HastingsMcLeod::solve(2 * PAINLEVE_NODES)?;
    let coarse = default_solution();
    let (a, b) = TW_DOMAIN;
    let mut worst = 0.0f64;
    for i in 0..=400 {
        let x = a + (b - a) * i as f64 / 400.0;
        worst = worst.max((fine.cdf(x) - coarse.cdf(x)).abs());
    }
    if worst > PAINLEVE_REFINE_TOL {
        return Err(Error::QuadratureNotConverged { nodes: 2 * PAINLEVE_NODES, delta: worst });
    }
    Ok(worst)
}

/// Mean, variance, skewness and excess kurtosis of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl Moments {
    pub fn from_raw(m1: f64, m2: f64, m3: f64, m4: f64) -> Self {
        let var = m2 - m1 * m1;
        let c3 = m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3);
        let c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1.powi(4);
        Self {
            mean: m1,
            variance: var,
            skewness: c3 / var.powf(1.5),
            excess_kurtosis: c4 / (var * var) - 3.0,
        }
    }
}

/// Moments of the Tracy–Widom law, integrating `E X^k = b^k - int k x^{k-1} F`
/// over the domain with Clenshaw–Curtis quadrature.
pub fn tracy_widom_moments() -> Moments {
    static M: OnceLock<Moments> = OnceLock::new();
    *M.get_or_init(|| {
        let (a, b) = TW_DOMAIN;
        let sol = default_solution();
        let n = 512;
        let xs: Vec<f64> = cheb_points(n).iter().map(|t| a + (b - a) * (t + 1.0) / 2.0).collect();
        let f: Vec<f64> = xs.iter().map(|&x| sol.cdf(x)).collect();
        let mut raw = [0.0; 4];
        for (k, r) in raw.iter_mut().enumerate() {
            let k = k as i32 + 1;
            let g: Vec<f64> =
                xs.iter().zip(&f).map(|(x, f)| k as f64 * x.powi(k - 1) * f).collect();
            *r = b.powi(k) - cheb_definite(&cheb_coeffs(&g)) * (b - a) / 2.0;
        }
        Moments::from_raw(raw[0], raw[1], raw[2], raw[3])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::tracy_widom_cdf;

    #[test]
    fn boundary_conditions() {
        let s = default_solution();
        let (a, b) = TW_DOMAIN;
        assert!((s.q(b) / airy_ai_unchecked(b).0 - 1.0).abs() < 1e-8);
        assert!((s.q(a) - left_boundary(a)).abs() < 1e-12);
        // Airy tail sets in well before the right end
        assert!((s.q(6.0) / airy_ai_unchecked(6.0).0 - 1.0).abs() < 1e-6, "{} {}", s.q(6.0), airy_ai_unchecked(6.0).0);
    }

    #[test]
    fn airy_tail_matches_quadrature() {
        use crate::limits::quadrature::gauss_legendre;
        let s = default_solution();
        let (u, w) = gauss_legendre(120);
        for x in [5.0, 6.5] {
            let got = s.log_cdf_integral(x);
            let want: f64 = u
                .iter()
                .zip(&w)
                .map(|(u, w)| {
                    let y = x + 6.0 * (u + 1.0);
                    let a = airy_ai_unchecked(y).0;
                    6.0 * w * (y - x) * a * a
                })
                .sum();
            assert!(((got - want) / want).abs() < 1e-9, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn satisfies_the_equation() {
        let s = default_solution();
        let h = 1e-3;
        for i in 0..=38 {
            let x = -11.0 + 0.5 * i as f64;
            let qpp = (s.q(x + h) - 2.0 * s.q(x) + s.q(x - h)) / (h * h);
            let q = s.q(x);
            assert!((qpp - x * q - 2.0 * q.powi(3)).abs() < 1e-5, "x={x}");
        }
    }

    #[test]
    fn stable_under_refinement() {
        let worst = painleve2_refinement_check().unwrap();
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn monotone_and_bounded() {
        let mut prev = 0.0;
        for i in 0..=2000 {
            let f = painleve2_tw_cdf(-12.0 + 0.01 * i as f64).unwrap();
            assert!((0.0..=1.0).contains(&f) && f >= prev, "{i} {f} {prev}");
            prev = f;
        }
    }

    #[test]
    fn agrees_with_fredholm() {
        for i in 0..100 {
            let x = -10.0 + 16.0 * i as f64 / 99.0;
            let a = tracy_widom_cdf(x).unwrap();
            let b = painleve2_tw_cdf(x).unwrap();
            assert!((a - b).abs() < 1e-8, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn moments() {
        let m = tracy_widom_moments();
        assert!((m.mean + 1.771_086_807).abs() < 1e-7, "{m:?}");
        assert!((m.variance - 0.813_194_792).abs() < 1e-6, "{m:?}");
        assert!((m.skewness - 0.224_084_203).abs() < 1e-6, "{m:?}");
        assert!((m.excess_kurtosis - 0.093_448_087).abs() < 1e-5, "{m:?}");
    }
}
