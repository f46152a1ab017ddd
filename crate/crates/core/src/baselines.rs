//! Reference schemes: conventional SM and phase pre-scaled SM (SM-P).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::constellation::{build_signal_set, square_qam, PreScaling, SmSignalSet};
use crate::{Error, Result};

/// Whether the SM-P transmitter knows the channel phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmpMode {
    PerfectCsi,
    NoFeedback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmpConfig {
    pub mode: SmpMode,
    pub theta: Vec<f64>,
}

impl SmpConfig {
    /// `theta_k = 2 pi (k-1) / (M N_t)`.
    pub fn new(mode: SmpMode, m_order: usize, n_t: usize) -> Self {
        let denom = (m_order * n_t) as f64;
        Self {
            mode,
            theta: (0..n_t).map(|k| 2.0 * PI * k as f64 / denom).collect(),
        }
    }
}

/// SM-P coefficients: `exp(j(theta_k - arg h_k))` with CSI, `exp(j theta_k)` without.
pub fn smp_coefficients(
    config: &SmpConfig,
    channel: Option<&ChannelRealization>,
) -> Result<PreScaling> {
    let coefficients = match config.mode {
        SmpMode::NoFeedback => config
            .theta
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect(),
        SmpMode::PerfectCsi => {
            let ch = channel.ok_or(Error::MissingChannel)?;
            if ch.gains().len() != config.theta.len() {
                return Err(Error::Dimension(format!(
                    "{} gains for {} phases",
                    ch.gains().len(),
                    config.theta.len()
                )));
            }
            smp_perfect_coefficients(&config.theta, ch.gains())
        }
    };
    PreScaling::new(coefficients)
}

/// Channel-compensating SM-P phases; a zero gain keeps phase `theta_k`.
pub(crate) fn smp_perfect_coefficients(theta: &[f64], gains: &[Complex64]) -> Vec<Complex64> {
    theta
        .iter()
        .zip(gains)
        .map(|(&t, h)| Complex64::from_polar(1.0, t - h.arg()))
        .collect()
}

/// Conventional SM: Gray square QAM on every antenna, `alpha_k = 1`.
pub fn conventional_sm_set(m_order: usize, n_t: usize) -> Result<SmSignalSet> {
    build_signal_set(&square_qam(m_order)?, &PreScaling::unit(n_t), n_t)
}
