//! Transition probabilities of TASEP on the line as an `N x N` determinant of
//! contour integrals.
//!
//! With `X, Y` increasing, `P_Y(X; t) = det[F(i, j)]` where
//!
//! ```text
//! F(i, j) = (1 / 2 pi i) \oint s^{j-i} (s+1)^{-x_i + y_j + i - j - 1} e^{t s} ds
//! ```
//!
//! around a circle enclosing `0` and `-1`. For `N = 1` this is the Poisson
//! law of `x - y` jumps.

use std::collections::HashMap;

use num_complex::Complex64;

use super::contour::ContourSpec;
use crate::error::{Error, Result};
use crate::linalg::det_complex;
use crate::numerics::IMAGINARY_RESIDUE_TOL;

pub(crate) fn check_ordered(x: &[i64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::invalid("at least one particle is required"));
    }
    if !x.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Unordered(x.to_vec()));
    }
    Ok(())
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

/// One matrix entry (rows and columns counted from 1).
pub fn schuetz_entry(i: i64, j: i64, xi: i64, yj: i64, t: f64, c: &ContourSpec) -> Result<Complex64> {
    check_time(t)?;
    let zero = Complex64::new(0.0, 0.0);
    let minus_one = Complex64::new(-1.0, 0.0);
    if !c.encloses(zero) || !c.encloses(minus_one) {
        return Err(Error::invalid("contour must enclose 0 and -1"));
    }
    let a = j - i;
    let b = -xi + yj + i - j - 1;
    if a >= 0 && b >= 0 {
        return Ok(zero);
    }
    let (a, b) = (a as i32, b as i32);
    c.integrate(|s| s.powi(a) * (s + 1.0).powi(b) * (t * s).exp())
}

/// `P_Y(X; t)` on the default contour.
pub fn schuetz_transition(x: &[i64], y: &[i64], t: f64) -> Result<f64> {
    schuetz_transition_with(x, y, t, &ContourSpec::line_default())
}

/// `P_Y(X; t)` on a given contour.
pub fn schuetz_transition_with(x: &[i64], y: &[i64], t: f64, c: &ContourSpec) -> Result<f64> {
    check_ordered(x)?;
    check_ordered(y)?;
    check_time(t)?;
    if x.len() != y.len() {
        return Err(Error::invalid("X and Y must have the same number of particles"));
    }
    let n = x.len();
    // entries depend only on (j - i, x_i - y_j)
    let mut cache: HashMap<(i64, i64), Complex64> = HashMap::new();
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let key = (j as i64 - i as i64, x[i] - y[j]);
            let v = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = schuetz_entry(i as i64 + 1, j as i64 + 1, x[i], y[j], t, c)?;
                    cache.insert(key, v);
                    v
                }
            };
            m.push(v);
        }
    }
    let d = det_complex(m, n);
    if d.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue { residue: d.im.abs(), tolerance: IMAGINARY_RESIDUE_TOL });
    }
    Ok(d.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{ctmc_oracle, CtmcModel};
    use proptest::prelude::*;

    fn poisson(k: i64, t: f64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        (0..k).fold((-t).exp(), |p, m| p * t / (m + 1) as f64)
    }

    #[test]
    fn nonnegative_exponents_vanish() {
        let c = ContourSpec::line_default();
        let v = schuetz_entry(1, 2, 0, 3, 1.0, &c).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn transcribed_exponents_fail_for_one_particle() {
        // exponents s^{j-i+1} (s+1)^{-x+y+i-j}: the i = j, x = y entry has no
        // pole inside the contour, so the probability of no jump would be 0
        let c = ContourSpec::line_default();
        let v = c.integrate(|s| s * (0.7 * s).exp()).unwrap();
        assert!(v.norm() < 1e-14);
        let p = schuetz_transition(&[0], &[0], 0.7).unwrap();
        assert!((p - (-0.7f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn one_particle_poisson() {
        for t in [0.3, 1.0, 2.5] {
            for k in -1..8 {
                let p = schuetz_transition(&[k + 3], &[3], t).unwrap();
                assert!((p - poisson(k, t)).abs() < 1e-12, "t={t} k={k}");
            }
        }
    }

    #[test]
    fn radius_independence() {
        let c2 = ContourSpec::new(Complex64::new(-0.5, 0.0), 2.0, 64).unwrap();
        let c3 = ContourSpec::new(Complex64::new(-0.5, 0.0), 3.0, 64).unwrap();
        for (i, j, x, y) in [(1, 1, 2, 0), (2, 1, 3, 0), (1, 2, 1, 1), (1, 3, 4, 0)] {
            let a = schuetz_entry(i, j, x, y, 1.2, &c2).unwrap();
            let b = schuetz_entry(i, j, x, y, 1.2, &c3).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn time_zero_indicator() {
        assert!((schuetz_transition(&[0, 1], &[0, 1], 0.0).unwrap() - 1.0).abs() < 1e-13);
        assert!(schuetz_transition(&[0, 2], &[0, 1], 0.0).unwrap().abs() < 1e-13);
        assert!(schuetz_transition(&[1, 4, 5], &[0, 4, 5], 0.0).unwrap().abs() < 1e-13);
    }

    #[test]
    fn packed_pair_stays_with_rate_one() {
        for t in [0.1, 0.5, 1.5] {
            let p = schuetz_transition(&[0, 1], &[0, 1], t).unwrap();
            assert!((p - (-t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_master_equation() {
        for (y, t) in [(vec![0, 1], 0.5), (vec![0, 2], 1.0), (vec![-1, 0, 2], 0.8)] {
            let d = ctmc_oracle(CtmcModel::Line, &y, t, 14).unwrap();
            for (state, want) in d.states.iter().zip(&d.probabilities) {
                let got = schuetz_transition(state, &y, t).unwrap();
                assert!((got - want).abs() < 1e-8, "{y:?} -> {state:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn normalization_three_particles() {
        let (y, t) = ([0i64, 2, 3], 1.0);
        // each particle jumps at most 12 times except with probability < 3e-10
        let cap = 12;
        let mut total = 0.0;
        for a in 0..=cap {
            for b in 0..=cap {
                for c in 0..=cap {
                    let x = [y[0] + a, y[1] + b, y[2] + c];
                    if x[0] < x[1] && x[1] < x[2] {
                        total += schuetz_transition(&x, &y, t).unwrap();
                    }
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn chapman_kolmogorov() {
        let (y, s, t) = ([0i64, 1], 0.4, 0.6);
        let x = [1i64, 3];
        let direct = schuetz_transition(&x, &y, s + t).unwrap();
        let mut via = 0.0;
        for a in 0..=x[0] - y[0] {
            for b in 0..=x[1] - y[1] {
                let z = [y[0] + a, y[1] + b];
                if z[0] < z[1] {
                    via += schuetz_transition(&z, &y, s).unwrap() * schuetz_transition(&x, &z, t).unwrap();
                }
            }
        }
        assert!((direct - via).abs() < 1e-6, "{direct} vs {via}");
    }

    #[test]
    fn rejects_unordered() {
        assert!(matches!(schuetz_transition(&[1, 0], &[0, 1], 1.0), Err(Error::Unordered(_))));
        assert!(schuetz_transition(&[0, 1], &[0], 1.0).is_err());
        assert!(schuetz_transition(&[0], &[0], -1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn probabilities_in_unit_interval(d0 in 0i64..4, d1 in 0i64..4, gap in 1i64..3, t in 0.0f64..2.0) {
            let y = [0, gap];
            let x = [d0, (gap + d1).max(d0 + 1)];
            let p = schuetz_transition(&x, &y, t).unwrap();
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p));
        }
    }
}
