//! Monte-Carlo BICM average mutual information of an SM signal set.
//!
//! For a transmitted vector `x` with label bits `b_i`, received through
//! gains `h` as `y = h_k alpha_k s_m + z`, one sample contributes
//!
//! ```text
//! sum_i log2( sum_{x' in X} p(y|x') / sum_{x' in X_{b_i}^i} p(y|x') )
//! ```
//!
//! and the estimate is `log2(M N_t)` minus the sample mean. Densities are
//! handled in the log domain with the largest metric subtracted, so nothing
//! underflows at high SNR. Samples are cut into batches of [`BATCH`], each
//! drawn from its own ChaCha stream, which makes a result a function of
//! `(seed, n_samples)` only.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{complex_gaussian, fill_rayleigh, ChannelRealization, SnrPoint};
use crate::constellation::SmSignalSet;
use crate::rng::{batches, stream_rng};
use crate::stats::Moments;
use crate::{Error, Result};

/// Samples per random stream.
pub const BATCH: usize = 4096;

/// Samples per estimate inside the optimizer loop.
pub const DEFAULT_OPT_SAMPLES: usize = 200_000;

/// Samples per estimate for reported numbers.
pub const DEFAULT_REPORT_SAMPLES: usize = 2_000_000;

/// A BICM-AMI estimate in bits per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct AmiEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    /// Sample mean and standard error of each per-bit penalty term.
    pub per_bit: Vec<(f64, f64)>,
}

/// Difference `a - b` of two estimates computed on identical random draws.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedAmi {
    pub a: AmiEstimate,
    pub b: AmiEstimate,
    pub diff: f64,
    pub diff_std_error: f64,
}

#[derive(Clone, Copy)]
enum Fading<'a> {
    Rayleigh,
    Fixed(&'a [Complex64]),
}

struct Scratch {
    gains: Vec<Complex64>,
    rx: Vec<Complex64>,
    metric: Vec<f64>,
    weight: Vec<f64>,
    terms: Vec<f64>,
}

impl Scratch {
    fn new(set: &SmSignalSet) -> Self {
        Self {
            gains: vec![Complex64::new(0.0, 0.0); set.n_t()],
            rx: Vec::with_capacity(set.len()),
            metric: vec![0.0; set.len()],
            weight: vec![0.0; set.len()],
            terms: vec![0.0; set.bits_per_vector() as usize],
        }
    }
}

/// Per-bit penalty terms for one received sample; returns their sum.
fn sample_terms(set: &SmSignalSet, y: Complex64, tx: usize, inv_n0: f64, s: &mut Scratch) -> f64 {
    let mut lmax = f64::NEG_INFINITY;
    for (m, p) in s.metric.iter_mut().zip(&s.rx) {
        *m = -(y - p).norm_sqr() * inv_n0;
        lmax = lmax.max(*m);
    }
    let mut total = 0.0;
    for (w, m) in s.weight.iter_mut().zip(&s.metric) {
        *w = (m - lmax).exp();
        total += *w;
    }
    let mut sum = 0.0;
    for i in 0..set.bits_per_vector() {
        let subset = &set.bit_partition(i)[set.bit(tx, i) as usize];
        let part: f64 = subset.iter().map(|&j| s.weight[j as usize]).sum();
        let term = if part > 1e-250 {
            (total / part).log2()
        } else {
            // the subset sits hundreds of nats below the best candidate
            let sub_max = subset
                .iter()
                .map(|&j| s.metric[j as usize])
                .fold(f64::NEG_INFINITY, f64::max);
            let sub: f64 = subset
                .iter()
                .map(|&j| (s.metric[j as usize] - sub_max).exp())
                .sum();
            ((lmax + total.ln()) - (sub_max + sub.ln())) * std::f64::consts::LOG2_E
        };
        s.terms[i as usize] = term;
        sum += term;
    }
    sum
}

#[derive(Clone)]
struct Accum {
    total: Moments,
    per_bit: Vec<Moments>,
}

impl Accum {
    fn new(bits: usize) -> Self {
        Self {
            total: Moments::default(),
            per_bit: vec![Moments::default(); bits],
        }
    }

    fn merge(self, other: Accum) -> Accum {
        Accum {
            total: self.total.merge(other.total),
            per_bit: self
                .per_bit
                .into_iter()
                .zip(other.per_bit)
                .map(|(a, b)| a.merge(b))
                .collect(),
        }
    }

    fn estimate(&self, bits: u32) -> AmiEstimate {
        AmiEstimate {
            value: bits as f64 - self.total.mean,
            std_error: self.total.std_error(),
            n_samples: self.total.n,
            per_bit: self
                .per_bit
                .iter()
                .map(|m| (m.mean, m.std_error()))
                .collect(),
        }
    }
}

/// Draws `(tx index, gains, y)` for one sample into `s.gains`.
#[inline]
fn draw_sample<R: Rng>(
    rng: &mut R,
    n_vectors: usize,
    fading: Fading<'_>,
    noise_var: f64,
    gains: &mut [Complex64],
) -> (usize, Complex64) {
    let tx = rng.random_range(0..n_vectors);
    match fading {
        Fading::Rayleigh => fill_rayleigh(rng, gains),
        Fading::Fixed(h) => gains.copy_from_slice(h),
    }
    (tx, complex_gaussian(rng, noise_var))
}

fn run(
    sets: &[&SmSignalSet],
    fading: Fading<'_>,
    noise_var: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(Vec<Accum>, Moments)> {
    if n_samples == 0 {
        return Err(Error::NoSamples);
    }
    let first = sets[0];
    for s in sets {
        if s.len() != first.len() || s.n_t() != first.n_t() {
            return Err(Error::Dimension("paired sets must share M and N_t".into()));
        }
    }
    if let Fading::Fixed(h) = fading {
        if h.len() != first.n_t() {
            return Err(Error::Dimension(format!(
                "{} gains for {} antennas",
                h.len(),
                first.n_t()
            )));
        }
    }
    let bits = first.bits_per_vector() as usize;
    let inv_n0 = noise_var.recip();
    let plan: Vec<_> = batches(n_samples, BATCH).collect();
    let parts: Vec<(Vec<Accum>, Moments)> = plan
        .par_iter()
        .map(|&(stream, _, len)| {
            let mut rng = stream_rng(seed, stream);
            let mut scratch: Vec<Scratch> = sets.iter().map(|s| Scratch::new(s)).collect();
            let mut acc = vec![Accum::new(bits); sets.len()];
            let mut diff = Moments::default();
            let mut gains = vec![Complex64::new(0.0, 0.0); first.n_t()];
            for _ in 0..len {
                let (tx, z) = draw_sample(&mut rng, first.len(), fading, noise_var, &mut gains);
                let mut totals = [0.0f64; 2];
                for (idx, (set, s)) in sets.iter().zip(scratch.iter_mut()).enumerate() {
                    s.gains.copy_from_slice(&gains);
                    set.received_points_into(&s.gains, &mut s.rx);
                    let y = s.rx[tx] + z;
                    let t = sample_terms(set, y, tx, inv_n0, s);
                    acc[idx].total.push(t);
                    for (m, &x) in acc[idx].per_bit.iter_mut().zip(&s.terms) {
                        m.push(x);
                    }
                    if idx < 2 {
                        totals[idx] = t;
                    }
                }
                if sets.len() == 2 {
                    // a - b in capacity is b's penalty minus a's
                    diff.push(totals[1] - totals[0]);
                }
            }
            (acc, diff)
        })
        .collect();
    let mut iter = parts.into_iter();
    let first_part = iter.next().expect("at least one batch");
    Ok(iter.fold(first_part, |(acc, diff), (a2, d2)| {
        (
            acc.into_iter().zip(a2).map(|(x, y)| x.merge(y)).collect(),
            diff.merge(d2),
        )
    }))
}

/// BICM-AMI over i.i.d. Rayleigh fading at `snr`.
pub fn estimate_bicm_ami(
    set: &SmSignalSet,
    snr: SnrPoint,
    n_samples: usize,
    seed: u64,
) -> Result<AmiEstimate> {
    let (acc, _) = run(&[set], Fading::Rayleigh, snr.noise_var(), n_samples, seed)?;
    Ok(acc[0].estimate(set.bits_per_vector()))
}

/// BICM-AMI with the gains held at `channel` and its noise variance.
pub fn estimate_bicm_ami_fixed_channel(
    set: &SmSignalSet,
    channel: &ChannelRealization,
    n_samples: usize,
    seed: u64,
) -> Result<AmiEstimate> {
    let (acc, _) = run(
        &[set],
        Fading::Fixed(channel.gains()),
        channel.noise_var(),
        n_samples,
        seed,
    )?;
    Ok(acc[0].estimate(set.bits_per_vector()))
}

/// Estimates both sets on common random numbers and reports `a - b` with
/// the standard error of the paired difference.
pub fn estimate_bicm_ami_paired(
    a: &SmSignalSet,
    b: &SmSignalSet,
    snr: SnrPoint,
    n_samples: usize,
    seed: u64,
) -> Result<PairedAmi> {
    let (acc, diff) = run(&[a, b], Fading::Rayleigh, snr.noise_var(), n_samples, seed)?;
    let ea = acc[0].estimate(a.bits_per_vector());
    let eb = acc[1].estimate(b.bits_per_vector());
    Ok(PairedAmi {
        diff: ea.value - eb.value,
        diff_std_error: diff.std_error(),
        a: ea,
        b: eb,
    })
}

/// SNR at which the Rayleigh BICM-AMI reaches `target_bits`, by bisection
/// on a fixed random stream over `[low_db, high_db]` down to `tol_db`.
pub fn snr_for_ami(
    set: &SmSignalSet,
    target_bits: f64,
    n_samples: usize,
    seed: u64,
    (low_db, high_db): (f64, f64),
    tol_db: f64,
) -> Result<f64> {
    let ami = |db: f64| estimate_bicm_ami(set, SnrPoint::db(db), n_samples, seed).map(|e| e.value);
    if ami(high_db)? < target_bits {
        return Err(Error::RangeExhausted {
            target: target_bits,
            low_db,
            high_db,
        });
    }
    if ami(low_db)? >= target_bits {
        return Ok(low_db);
    }
    let (mut lo, mut hi) = (low_db, high_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if ami(mid)? >= target_bits {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
