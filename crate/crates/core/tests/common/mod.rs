//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use smnuc::constellation::SmSignalSet;
use smnuc::Complex64;

pub mod props;

/// Seeds every property test is repeated under.
pub const SEEDS: [u64; 3] = [11, 2024, 0x5eed];

/// BICM-AMI of a fixed-gain alphabet over complex AWGN of total variance
/// `n0`, by tensor-product Gauss-Hermite quadrature over the noise.
///
/// With `z = sqrt(n0) (u + j v)` the noise density becomes
/// `exp(-u^2 - v^2) / pi`, which is the Hermite weight in each coordinate.
pub fn gh_bicm_ami(points: &[Complex64], labels: &[u32], bits: u32, n0: f64, degree: usize) -> f64 {
    let rule = GaussHermite::new(NonZeroUsize::new(degree).unwrap());
    let nodes: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
    let n = points.len() as f64;
    let mut penalty = 0.0;
    for (x, &lx) in points.iter().zip(labels) {
        for &(u, wu) in &nodes {
            for &(v, wv) in &nodes {
                let z = Complex64::new(u, v) * n0.sqrt();
                let y = x + z;
                // log-likelihoods up to a common constant
                let ll: Vec<f64> = points.iter().map(|p| -(y - p).norm_sqr() / n0).collect();
                let all = log_sum_exp(&ll);
                for i in 0..bits {
                    let b = (lx >> (bits - 1 - i)) & 1;
                    let same: Vec<f64> = ll
                        .iter()
                        .zip(labels)
                        .filter(|(_, &l)| (l >> (bits - 1 - i)) & 1 == b)
                        .map(|(v, _)| *v)
                        .collect();
                    penalty += wu * wv / std::f64::consts::PI * (all - log_sum_exp(&same));
                }
            }
        }
    }
    bits as f64 - penalty / n / std::f64::consts::LN_2
}

pub fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Points and labels of `set` with every gain set to `h`.
pub fn received_alphabet(set: &SmSignalSet, gains: &[Complex64]) -> (Vec<Complex64>, Vec<u32>) {
    let points = (0..set.len())
        .map(|j| gains[set.antenna_of(j)] * set.point(j))
        .collect();
    let labels = (0..set.len()).map(|j| set.labeling().label(j)).collect();
    (points, labels)
}

/// Exhaustive nearest-point search written without the library's helpers.
pub fn brute_force_ml(y: Complex64, set: &SmSignalSet, gains: &[Complex64]) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for (k, (h, alpha)) in gains
        .iter()
        .zip(set.pre_scaling().coefficients())
        .enumerate()
    {
        for (m, s) in set.constellation().symbols().iter().enumerate() {
            let d = (y - h * alpha * s).norm_sqr();
            let j = k * set.order() + m;
            if d < best.0 {
                best = (d, j);
            }
        }
    }
    best.1
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Block error probability of `n_bits` uncoded Gray-QPSK bits over AWGN at
/// `snr_db` (Es/N0 with unit symbol energy).
pub fn uncoded_qpsk_bler(n_bits: usize, snr_db: f64) -> f64 {
    let snr = 10f64.powf(snr_db / 10.0);
    1.0 - (1.0 - q_function(snr.sqrt())).powi(n_bits as i32)
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic against `cdf`.
pub fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}
