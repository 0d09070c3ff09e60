use rand_distr::{Distribution, StandardNormal};

use super::lpp::last_passage_value;
use crate::error::{Error, Result};
use crate::rng::StreamKey;

/// Default lattice refinement for `D_k`: `40 k^2` steps per unit time.
pub fn default_brownian_grid(k: usize) -> usize {
    40 * k * k
}

/// Approximates `D_k = sup sum_i (B_i(t_i) - B_i(t_{i-1}))` over nested
/// split times by DLPP on a `k x grid_m` lattice with `N(0, 1/grid_m)` weights.
pub fn sample_brownian_dk(k: usize, grid_m: usize, key: StreamKey) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if grid_m < k {
        return Err(Error::invalid(format!("grid_m = {grid_m} must be at least k = {k}")));
    }
    let mut rng = key.rng();
    let sd = (1.0 / grid_m as f64).sqrt();
    last_passage_value(k, grid_m, || {
        let z: f64 = StandardNormal.sample(&mut rng);
        sd * z
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::streams;

    fn key(r: u64) -> StreamKey {
        StreamKey::new(21, r, streams::BROWNIAN)
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(sample_brownian_dk(5, 4, key(0)).is_err());
        assert!(sample_brownian_dk(0, 4, key(0)).is_err());
    }

    #[test]
    fn d1_is_standard_gaussian() {
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|r| sample_brownian_dk(1, 1000, key(r)).unwrap()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn d2_refinement_is_cauchy() {
        // common random numbers: the 250 and 500 grids are coarsenings of
        // the same 1000-step increments
        use rand_distr::{Distribution, StandardNormal};
        let n = 4000u64;
        let fine = 1000usize;
        let mut sums = [0.0f64; 3];
        for r in 0..n {
            let mut rng = key(r).rng();
            let inc: Vec<f64> = (0..2 * fine)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z / (fine as f64).sqrt()
                })
                .collect();
            for (slot, m) in [250usize, 500, 1000].into_iter().enumerate() {
                let f = fine / m;
                let coarse: Vec<f64> =
                    inc.chunks(f).map(|c| c.iter().sum::<f64>()).collect();
                let mut it = coarse.into_iter();
                sums[slot] += last_passage_value(2, m, || it.next().unwrap()).unwrap();
            }
        }
        let means: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
        assert!(means[2] - means[1] < means[1] - means[0], "{means:?}");
    }
}
