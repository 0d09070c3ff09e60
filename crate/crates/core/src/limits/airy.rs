//! Airy functions `Ai`, `Bi` and their derivatives on the real line.
//!
//! Values at anchor points spaced `1/8` apart are generated once by Taylor
//! stepping of `y'' = x y`; every evaluation then expands about the nearest
//! anchor. `Ai` on the positive axis is stepped backward from the asymptotic
//! expansion at `x = 10`, the stable direction for the recessive solution;
//! everything else is stepped outward from the exact values at the origin.
//! Beyond `x = 10`, `Ai` uses the asymptotic expansion directly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const AI0: f64 = 0.355_028_053_887_817_239_26;
pub const AIP0: f64 = -0.258_819_403_792_806_798_41;
pub const BI0: f64 = 0.614_926_627_446_000_735_15;
pub const BIP0: f64 = 0.448_288_357_353_826_357_91;

const STEP: f64 = crate::numerics::AIRY_ANCHOR_SPACING;
const AI_ASYMPTOTIC_FROM: f64 = crate::numerics::AIRY_ASYMPTOTIC_FROM;
const RANGE: f64 = crate::numerics::AIRY_RANGE;

/// Taylor expansion of a solution of `y'' = x y` about `x0`, evaluated at `x0 + h`.
fn taylor(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    // a[n+2] = (x0 a[n] + a[n-1]) / ((n+2)(n+1))
    let (mut a_prev, mut a0, mut a1) = (0.0, y, dy);
    let mut hp = 1.0; // h^n
    let mut val = 0.0;
    let mut der = 0.0;
    let mut small = 0;
    for n in 0..200usize {
        let term = a0 * hp;
        val += term;
        if n + 1 < 200 {
            der += (n + 1) as f64 * a1 * hp;
        }
        let a2 = (x0 * a0 + a_prev) / ((n + 2) as f64 * (n + 1) as f64);
        a_prev = a0;
        a0 = a1;
        a1 = a2;
        hp *= h;
        let scale = val.abs().max(der.abs()).max(1e-300);
        if (a0 * hp).abs() < 1e-18 * scale && (a1 * hp * h).abs() < 1e-18 * scale {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

/// Anchors `(y, y')` at `start + k * step` for `k = 0..count`, stepping from
/// the given initial value at `start`.
fn march(start: f64, step: f64, count: usize, y0: f64, dy0: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    let (mut y, mut dy) = (y0, dy0);
    out.push((y, dy));
    for k in 1..count {
        let x0 = start + (k - 1) as f64 * step;
        // two half steps per anchor
        let (y1, d1) = taylor(x0, y, dy, step / 2.0);
        let (y2, d2) = taylor(x0 + step / 2.0, y1, d1, step / 2.0);
        y = y2;
        dy = d2;
        out.push((y, dy));
    }
    out
}

struct Tables {
    // Ai on [-RANGE, 0] indexed from 0 outward; Ai on [0, 10] indexed from 0
    ai_neg: Vec<(f64, f64)>,
    ai_pos: Vec<(f64, f64)>,
    bi_neg: Vec<(f64, f64)>,
    bi_pos: Vec<(f64, f64)>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let n_range = (RANGE / STEP).round() as usize + 1;
        let n_pos = (AI_ASYMPTOTIC_FROM / STEP).round() as usize + 1;
        let (ya, da) = ai_asymptotic_positive(AI_ASYMPTOTIC_FROM);
        let mut ai_pos = march(AI_ASYMPTOTIC_FROM, -STEP, n_pos, ya, da);
        ai_pos.reverse();
        Tables {
            ai_neg: march(0.0, -STEP, n_range, AI0, AIP0),
            ai_pos,
            bi_neg: march(0.0, -STEP, n_range, BI0, BIP0),
            bi_pos: march(0.0, STEP, n_range, BI0, BIP0),
        }
    })
}

fn from_table(neg: &[(f64, f64)], pos: &[(f64, f64)], x: f64) -> (f64, f64) {
    let k = (x.abs() / STEP).round() as usize;
    let (tab, sign) = if x < 0.0 { (neg, -1.0) } else { (pos, 1.0) };
    let k = k.min(tab.len() - 1);
    let x0 = sign * k as f64 * STEP;
    let (y, dy) = tab[k];
    taylor(x0, y, dy, x - x0)
}

/// Leading asymptotic coefficients `u_k` of the Airy expansions.
fn u_coeff(k: usize, prev: f64) -> f64 {
    let k = k as f64;
    prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k)
}

/// `(Ai, Ai')` from the large-positive-argument expansion, truncated at the
/// smallest term.
pub(crate) fn ai_asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0;
    let mut su = 1.0;
    let mut sv = 1.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for k in 1..200 {
        u = u_coeff(k, u);
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        zk /= -zeta;
        let term = u * zk;
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        su += term;
        sv += v * zk;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

fn check_range(x: f64) -> Result<()> {
    if !(-RANGE..=RANGE).contains(&x) {
        return Err(Error::invalid(format!("Airy argument {x} outside [-{RANGE}, {RANGE}]")));
    }
    Ok(())
}

/// `(Ai(x), Ai'(x))` for `x >= -40`, including arguments beyond 40.
pub(crate) fn airy_ai_unchecked(x: f64) -> (f64, f64) {
    if x >= AI_ASYMPTOTIC_FROM {
        let (a, d) = ai_asymptotic_positive(x);
        // underflow is the correct limit
        if a.is_finite() { (a, d) } else { (0.0, 0.0) }
    } else {
        let t = tables();
        from_table(&t.ai_neg, &t.ai_pos, x)
    }
}

/// `(Ai(x), Ai'(x))` for `x` in `[-40, 40]`.
pub fn airy(x: f64) -> Result<(f64, f64)> {
    check_range(x)?;
    Ok(airy_ai_unchecked(x))
}

/// `(Bi(x), Bi'(x))` for `x` in `[-40, 40]`.
pub fn airy_bi(x: f64) -> Result<(f64, f64)> {
    check_range(x)?;
    let t = tables();
    Ok(from_table(&t.bi_neg, &t.bi_pos, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series evaluated in plain double precision; only accurate
    /// near the origin, which is where the tests use it.
    fn maclaurin(x: f64) -> (f64, f64) {
        // f = sum x^{3k} c_k, g = sum x^{3k+1} d_k; derivatives use x^{3k-1}, x^{3k}
        let (mut f, mut g) = (1.0, x);
        let (mut cf, mut cg) = (1.0, 1.0);
        let (mut df, mut dg) = (0.0, 1.0);
        for k in 1..60 {
            let k3 = 3 * k;
            cf /= (k3 - 1) as f64 * k3 as f64;
            cg /= k3 as f64 * (k3 + 1) as f64;
            f += cf * x.powi(k3 as i32);
            g += cg * x.powi(k3 as i32 + 1);
            df += k3 as f64 * cf * x.powi(k3 as i32 - 1);
            dg += (k3 + 1) as f64 * cg * x.powi(k3 as i32);
        }
        (AI0 * f + AIP0 * g, AI0 * df + AIP0 * dg)
    }

    /// Oscillatory expansion of `Ai(-x)` for large `x`.
    fn ai_negative_asymptotic(x: f64) -> f64 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let mut u = vec![1.0];
        for k in 1..60 {
            let prev = u[k - 1];
            u.push(u_coeff(k, prev));
        }
        let (mut p, mut q) = (0.0, 0.0);
        for k in 0..25 {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            p += s * u[2 * k] / zeta.powi(2 * k as i32);
            q += s * u[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        }
        let ph = zeta - PI / 4.0;
        (ph.cos() * p + ph.sin() * q) / (PI.sqrt() * x.powf(0.25))
    }

    #[test]
    fn value_at_origin() {
        // 3^{-2/3} / Gamma(2/3) from the Maclaurin series at 0
        let (a, d) = airy(0.0).unwrap();
        assert!((a - 0.355_028_053_887_817_2).abs() < 1e-12);
        assert!((d + 0.258_819_403_792_806_8).abs() < 1e-12);
        // the backward march from x = 10 must land on the same values
        let t = tables();
        let (y, dy) = t.ai_pos[0];
        assert!((y - AI0).abs() < 1e-14 && (dy - AIP0).abs() < 1e-14, "{y} {dy}");
    }

    #[test]
    fn matches_maclaurin_near_origin() {
        for i in -16..=16 {
            let x = i as f64 / 8.0;
            let (a, d) = airy(x).unwrap();
            let (ma, md) = maclaurin(x);
            assert!(((a - ma) / ma).abs() < 1e-13, "x={x}");
            assert!((d - md).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn reference_values() {
        // DLMF / A&S tabulated values
        let cases = [
            (1.0, 0.135_292_416_312_881_4),
            (2.0, 0.034_924_130_423_274_38),
            (5.0, 1.083_444_281_360_744e-4),
            (-1.0, 0.535_560_883_292_352_1),
            (-5.0, 0.350_761_009_024_114_2),
            (10.0, 1.104_753_255_289_868_7e-10),
        ];
        for (x, want) in cases {
            let (a, _) = airy(x).unwrap();
            assert!(((a - want) / want).abs() < 1e-12, "x={x}: {a} vs {want}");
        }
    }

    #[test]
    fn continuity_across_asymptotic_switch() {
        let (a1, d1) = from_table(&tables().ai_neg, &tables().ai_pos, 9.99);
        let (a2, d2) = ai_asymptotic_positive(9.99);
        assert!(((a1 - a2) / a2).abs() < 1e-12);
        assert!(((d1 - d2) / d2).abs() < 1e-12);
    }

    #[test]
    fn far_negative_matches_oscillatory_expansion() {
        for x in [22.0, 30.0, 39.5] {
            let (a, _) = airy(-x).unwrap();
            let want = ai_negative_asymptotic(x);
            // relative to the envelope x^{-1/4}/sqrt(pi)
            let env = 1.0 / (PI.sqrt() * x.powf(0.25));
            assert!((a - want).abs() < 1e-12 * env, "x={x}: {a} vs {want}");
        }
    }

    #[test]
    fn positive_and_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let x = i as f64 / 100.0;
            let (a, d) = airy(x).unwrap();
            assert!(a > 0.0 && a < prev && d < 0.0);
            prev = a;
        }
    }

    #[test]
    fn wronskian() {
        for i in -80..=80 {
            let x = i as f64 / 2.0;
            let (a, da) = airy(x).unwrap();
            let (b, db) = airy_bi(x).unwrap();
            let w = a * db - da * b;
            assert!((w - 1.0 / PI).abs() < 1e-12, "x={x}: {w}");
        }
    }

    #[test]
    fn ode_residual() {
        // Ai'' from a centered difference of Ai', error O(h^2 Ai'''')
        let h = 1e-4;
        for i in -60..=60 {
            let x = i as f64 / 4.0;
            let (a, _) = airy(x).unwrap();
            let (_, dp) = airy(x + h).unwrap();
            let (_, dm) = airy(x - h).unwrap();
            let second = (dp - dm) / (2.0 * h);
            assert!((second - x * a).abs() < 1e-8 * (1.0 + x.abs()), "x={x}");
        }
    }

    #[test]
    fn range_is_enforced() {
        assert!(airy(40.5).is_err());
        assert!(airy(-41.0).is_err());
        assert_eq!(airy_ai_unchecked(200.0), (0.0, 0.0));
    }
}
