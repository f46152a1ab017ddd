//! Rayleigh MISO channel and AWGN.
//!
//! SNR is `E|h alpha s|^2 / E|z|^2` with unit-power signals and unit-variance
//! gains, so `noise_var = 10^(-snr_db/10)` is the total complex noise
//! variance and each real dimension carries half of it.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::constellation::SmSignalSet;
use crate::{Error, Result};

/// One MISO channel use: per-antenna gains `h_k` and the noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    gains: Vec<Complex64>,
    noise_var: f64,
}

impl ChannelRealization {
    pub fn new(gains: Vec<Complex64>, noise_var: f64) -> Result<Self> {
        if !(noise_var > 0.0 && noise_var.is_finite()) {
            return Err(Error::Config(format!(
                "noise variance {noise_var} must be positive"
            )));
        }
        if gains.is_empty() {
            return Err(Error::Dimension("channel without antennas".into()));
        }
        Ok(Self { gains, noise_var })
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    /// Total complex noise variance `E|z|^2`.
    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    /// Noise variance per real dimension.
    pub fn sigma2_per_dim(&self) -> f64 {
        self.noise_var / 2.0
    }

    pub fn with_noise_var(mut self, noise_var: f64) -> Result<Self> {
        self.noise_var = noise_var;
        Self::new(self.gains, self.noise_var)
    }
}

/// An operating point in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub snr_db: f64,
}

impl SnrPoint {
    pub fn db(snr_db: f64) -> Self {
        Self { snr_db }
    }

    pub fn noise_var(&self) -> f64 {
        10f64.powf(-self.snr_db / 10.0)
    }
}

/// Circularly symmetric complex Gaussian with `E|z|^2 = var`.
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Fills `gains` with i.i.d. unit-variance Rayleigh coefficients.
#[inline]
pub fn fill_rayleigh<R: Rng + ?Sized>(rng: &mut R, gains: &mut [Complex64]) {
    for g in gains {
        *g = complex_gaussian(rng, 1.0);
    }
}

/// Draws an `n_t`-antenna Rayleigh realization at the given SNR.
pub fn draw_rayleigh<R: Rng + ?Sized>(
    n_t: usize,
    snr: SnrPoint,
    rng: &mut R,
) -> ChannelRealization {
    assert!(n_t >= 1, "at least one antenna");
    let mut gains = vec![Complex64::new(0.0, 0.0); n_t];
    fill_rayleigh(rng, &mut gains);
    ChannelRealization {
        gains,
        noise_var: snr.noise_var(),
    }
}

/// Received sample `h_k alpha_k s_m + z` for vector `j`; `rng = None` disables noise.
pub fn receive<R: Rng + ?Sized>(
    set: &SmSignalSet,
    j: usize,
    channel: &ChannelRealization,
    rng: Option<&mut R>,
) -> Result<Complex64> {
    set.check_channel(channel)?;
    if j >= set.len() {
        return Err(Error::Dimension(format!(
            "vector index {j} out of {}",
            set.len()
        )));
    }
    let clean = channel.gains[set.antenna_of(j)] * set.point(j);
    Ok(match rng {
        Some(rng) => clean + complex_gaussian(rng, channel.noise_var),
        None => clean,
    })
}
