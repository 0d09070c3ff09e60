//! Empirical distribution functions, Kolmogorov–Smirnov tests and DKW bands.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        check_samples(samples)?;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|s| *s <= x) as f64 / self.sorted.len() as f64
    }

    /// Jump points and the value just after each, ties merged.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = (i + 1) as f64 / n,
                _ => out.push((x, (i + 1) as f64 / n)),
            }
        }
        out
    }
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::invalid("sample must be nonempty"));
    }
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("sample contains non-finite value {x}")));
    }
    Ok(())
}

/// `sqrt(ln(2 / delta) / (2 n))`: with probability `1 - delta` the ECDF of `n`
/// draws stays within this distance of the true CDF.
pub fn dkw_epsilon(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // theta-function form, fast for small arguments
        let c = -PI * PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=12).map(|k| (c * ((2 * k - 1) * (2 * k - 1)) as f64).exp()).sum();
        (1.0 - (2.0 * PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value of a KS statistic with effective sample size `ne`.
pub fn ks_p_value(statistic: f64, ne: f64) -> f64 {
    let r = ne.sqrt();
    kolmogorov_survival((r + 0.12 + 0.11 / r) * statistic)
}

/// Pass rule for a KS comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KsCriterion {
    /// statistic must not exceed the bound
    MaxStatistic(f64),
    /// p-value must exceed the level
    MinPValue(f64),
    /// statistic must lie inside the DKW band
    Dkw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    /// size of the second sample for two-sample tests
    pub m: Option<usize>,
    pub p_value: f64,
    pub dkw_delta: f64,
    pub dkw_epsilon: f64,
    pub criterion: KsCriterion,
    pub pass: bool,
}

impl KsResult {
    fn build(statistic: f64, n: usize, m: Option<usize>, criterion: KsCriterion, delta: f64) -> Self {
        let ne = match m {
            Some(m) => (n * m) as f64 / (n + m) as f64,
            None => n as f64,
        };
        let p_value = ks_p_value(statistic, ne);
        let dkw = dkw_epsilon(ne.round().max(1.0) as usize, delta);
        let pass = match criterion {
            KsCriterion::MaxStatistic(b) => statistic <= b,
            KsCriterion::MinPValue(a) => p_value > a,
            KsCriterion::Dkw => statistic <= dkw,
        };
        Self { statistic, n, m, p_value, dkw_delta: delta, dkw_epsilon: dkw, criterion, pass }
    }
}

/// Sup distance between the ECDF of `samples` and a continuous `cdf`,
/// evaluated exactly on both sides of every jump.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let e = Ecdf::new(samples)?;
    let n = e.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in e.sorted().iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

pub fn ks_one_sample(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    criterion: KsCriterion,
    delta: f64,
) -> Result<KsResult> {
    let d = ks_statistic(samples, cdf)?;
    Ok(KsResult::build(d, samples.len(), None, criterion, delta))
}

/// Sup distance between two ECDFs, taken after all ties at a point.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    let (ea, eb) = (Ecdf::new(a)?, Ecdf::new(b)?);
    let (sa, sb) = (ea.sorted(), eb.sorted());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < sa.len() || j < sb.len() {
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn ks_two_sample(a: &[f64], b: &[f64], criterion: KsCriterion, delta: f64) -> Result<KsResult> {
    let d = ks_two_sample_statistic(a, b)?;
    Ok(KsResult::build(d, a.len(), Some(b.len()), criterion, delta))
}

/// Sample mean, unbiased variance and moment skewness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

impl Summary {
    pub fn of(samples: &[f64]) -> Result<Self> {
        check_samples(samples)?;
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let (mut m2, mut m3) = (0.0, 0.0);
        for x in samples {
            let d = x - mean;
            m2 += d * d;
            m3 += d * d * d;
        }
        m2 /= n;
        m3 /= n;
        let variance = if samples.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 };
        let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
        Ok(Self { n: samples.len(), mean, variance, skewness })
    }
}

/// Least-squares line with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("linear fit needs at least two matching points"));
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("linear fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{streams, StreamKey};
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::{Distribution, Exp1};

    fn exp_sample(n: usize, replica: u64) -> Vec<f64> {
        let mut rng = StreamKey::new(77, replica, streams::AUX).rng();
        (0..n).map(|_| Exp1.sample(&mut rng)).collect()
    }

    #[test]
    fn single_sample_is_unit_step() {
        let e = Ecdf::new(&[2.5]).unwrap();
        assert_eq!(e.eval(2.4999), 0.0);
        assert_eq!(e.eval(2.5), 1.0);
        assert_eq!(e.steps(), vec![(2.5, 1.0)]);
        assert!(Ecdf::new(&[]).is_err());
        assert!(Ecdf::new(&[f64::NAN]).is_err());
    }

    #[test]
    fn kolmogorov_branches_agree() {
        // both series are valid near the switch point
        let lam: f64 = 1.18;
        let c = -PI * PI / (8.0 * lam * lam);
        let small: f64 =
            1.0 - (2.0 * PI).sqrt() / lam * (1..=12).map(|k| (c * ((2 * k - 1) * (2 * k - 1)) as f64).exp()).sum::<f64>();
        assert!((small - kolmogorov_survival(lam)).abs() < 1e-12);
        // textbook critical value: P(K > 1.3581) = 0.05
        assert!((kolmogorov_survival(1.358_1) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.627_6) - 0.01).abs() < 1e-4);
    }

    #[test]
    fn against_exponential_cdf() {
        let s = exp_sample(100_000, 0);
        let r = ks_one_sample(&s, |x| 1.0 - (-x).exp(), KsCriterion::Dkw, 0.01).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.dkw_epsilon - (200f64.ln() / 200_000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_sample_extremes() {
        let a = exp_sample(500, 1);
        assert_eq!(ks_two_sample_statistic(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_statistic(&[0.0, 1.0], |x| if x < 0.0 { 0.0 } else if x < 1.0 { 0.5 } else { 1.0 }).unwrap(), 0.5);
        let b: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
        assert_eq!(ks_two_sample_statistic(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn two_sample_null_calibration() {
        let mut passes = 0;
        for rep in 0..100 {
            let a = exp_sample(10_000, 1000 + 2 * rep);
            let b = exp_sample(10_000, 1001 + 2 * rep);
            let r = ks_two_sample(&a, &b, KsCriterion::MinPValue(0.01), 0.01).unwrap();
            passes += usize::from(r.pass);
        }
        assert!(passes >= 98, "{passes}");
    }

    #[test]
    fn summary_and_fit() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 10.0]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert!((s.variance - 50.0 / 3.0).abs() < 1e-12);
        assert!(s.skewness > 0.0);
        let f = linear_fit(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && f.intercept.abs() < 1e-14 && (f.r_squared - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ecdf_is_permutation_invariant(mut v in proptest::collection::vec(-5.0f64..5.0, 1..40), seed in 0u64..1000) {
            let e1 = Ecdf::new(&v).unwrap();
            let mut rng = StreamKey::new(seed, 0, streams::AUX).rng();
            for i in (1..v.len()).rev() {
                let j = rng.random_range(0..=i);
                v.swap(i, j);
            }
            let e2 = Ecdf::new(&v).unwrap();
            prop_assert_eq!(e1.steps(), e2.steps());
        }

        #[test]
        fn two_sample_matches_brute_force(a in proptest::collection::vec(0i32..6, 1..15), b in proptest::collection::vec(0i32..6, 1..15)) {
            let (a, b): (Vec<f64>, Vec<f64>) = (a.iter().map(|&x| x as f64).collect(), b.iter().map(|&x| x as f64).collect());
            let (ea, eb) = (Ecdf::new(&a).unwrap(), Ecdf::new(&b).unwrap());
            let brute = (0..6).map(|x| (ea.eval(x as f64) - eb.eval(x as f64)).abs()).fold(0.0, f64::max);
            prop_assert!((ks_two_sample_statistic(&a, &b).unwrap() - brute).abs() < 1e-15);
        }
    }
}
