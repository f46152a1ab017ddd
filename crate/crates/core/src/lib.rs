//! Spatial-modulation (SM) link toolkit.
//!
//! The crate builds quadrant-symmetric non-uniform constellations together
//! with per-antenna pre-scaling coefficients for an `N_t x 1` MISO spatial
//! modulation link, scores them by their Monte-Carlo BICM average mutual
//! information over Rayleigh fading, optimizes them with a particle swarm,
//! and measures coded block error rates against conventional SM and phase
//! pre-scaled SM (SM-P) baselines.
//!
//! Module map:
//!
//! - [`constellation`]: constellations, labelings, pre-scaling vectors and the
//!   composed SM signal set, plus the text file format.
//! - [`channel`]: Rayleigh MISO realizations, SNR conventions and AWGN.
//! - [`detection`]: ML detection and Max-Log-MAP bit LLRs.
//! - [`capacity`]: BICM-AMI Monte-Carlo estimation.
//! - [`optimizer`]: particle swarm, waterfall search and the outer re-anchoring loop.
//! - [`baselines`]: conventional SM and SM-P reference schemes.
//! - [`fec`]: LDPC codec, bit interleaver and the MCS table.
//! - [`harness`]: BLER simulation, scheme comparison and result export.
//!
//! Conventions used throughout: the transmit signal has unit average energy,
//! Rayleigh gains have unit variance, and `noise_var` is the total complex
//! noise variance `N0 = E|z|^2`, so `snr_db = -10 log10(noise_var)`. LLRs are
//! positive when bit 0 is more likely.

pub mod baselines;
pub mod capacity;
pub mod channel;
pub mod constellation;
pub mod detection;
mod error;
pub mod fec;
pub mod harness;
pub mod optimizer;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;
