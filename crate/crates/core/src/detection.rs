//! ML detection and Max-Log-MAP demapping.
//!
//! LLRs are `ln P(b=0|y) / P(b=1|y)` approximated by the nearest candidate
//! in each half of the bit partition, so a positive value favours bit 0.

use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::constellation::SmSignalSet;
use crate::Result;

/// Per-bit LLRs for one received sample, MSB (first antenna bit) first.
#[derive(Debug, Clone, PartialEq)]
pub struct BitLlrVector {
    pub llrs: Vec<f64>,
}

impl BitLlrVector {
    /// Hard decisions packed into a label word.
    pub fn hard_label(&self) -> u32 {
        self.llrs
            .iter()
            .fold(0, |w, &l| (w << 1) | u32::from(l < 0.0))
    }
}

/// Index of the candidate nearest to `y`; lowest index on ties.
pub fn ml_detect_points(y: Complex64, rx_points: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, p) in rx_points.iter().enumerate() {
        let d = (y - p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

/// `argmin_j |y - h_k alpha_k s_m|` over all `M * N_t` vectors.
pub fn ml_detect(y: Complex64, set: &SmSignalSet, channel: &ChannelRealization) -> Result<usize> {
    set.check_channel(channel)?;
    Ok(ml_detect_points(y, &set.received_points(channel.gains())))
}

/// Max-Log LLRs against precomputed received points, written to `out`
/// (`bits_per_vector` entries).
pub fn maxlog_llrs_into(
    y: Complex64,
    rx_points: &[Complex64],
    set: &SmSignalSet,
    noise_var: f64,
    out: &mut [f64],
) {
    let bits = set.bits_per_vector() as usize;
    debug_assert_eq!(out.len(), bits);
    let mut mins = [[f64::INFINITY; 2]; 32];
    let labeling = set.labeling();
    for (j, p) in rx_points.iter().enumerate() {
        let d = (y - p).norm_sqr();
        let w = labeling.label(j);
        for (i, m) in mins.iter_mut().enumerate().take(bits) {
            let b = ((w >> (bits - 1 - i)) & 1) as usize;
            if d < m[b] {
                m[b] = d;
            }
        }
    }
    let inv = noise_var.recip();
    for (o, m) in out.iter_mut().zip(&mins) {
        *o = (m[1] - m[0]) * inv;
    }
}

/// Max-Log-MAP bit LLRs `(min_{b=1} d - min_{b=0} d) / noise_var`.
///
/// `noise_var` is the total complex noise variance, i.e. twice the
/// per-dimension variance in the Gaussian density exponent.
pub fn maxlog_llrs(
    y: Complex64,
    set: &SmSignalSet,
    channel: &ChannelRealization,
    noise_var: f64,
) -> Result<BitLlrVector> {
    set.check_channel(channel)?;
    let rx = set.received_points(channel.gains());
    let mut llrs = vec![0.0; set.bits_per_vector() as usize];
    maxlog_llrs_into(y, &rx, set, noise_var, &mut llrs);
    Ok(BitLlrVector { llrs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{complex_gaussian, draw_rayleigh, SnrPoint};
    use crate::constellation::{
        build_signal_set, make_apsk_initial, make_initial_prescaling, Constellation, Labeling,
        PreScaling,
    };
    use crate::rng::stream_rng;

    fn set16x4() -> SmSignalSet {
        build_signal_set(
            &make_apsk_initial(16).unwrap(),
            &make_initial_prescaling(16, 4).unwrap(),
            4,
        )
        .unwrap()
    }

    #[test]
    fn exact_candidate_is_detected() {
        let set = set16x4();
        let ch = draw_rayleigh(4, SnrPoint::db(20.0), &mut stream_rng(1, 0));
        let rx = set.received_points(ch.gains());
        for (j, &p) in rx.iter().enumerate() {
            assert_eq!(ml_detect(p, &set, &ch).unwrap(), j);
            let llr = maxlog_llrs(p, &set, &ch, ch.noise_var()).unwrap();
            assert_eq!(llr.hard_label(), set.labeling().label(j));
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let s = Complex64::new(1.0, 0.0);
        let c = Constellation::new(
            vec![s, -s, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
            Labeling::natural(4).unwrap(),
        )
        .unwrap();
        let set = build_signal_set(&c, &PreScaling::unit(1), 1).unwrap();
        let ch = ChannelRealization::new(vec![Complex64::new(1.0, 0.0)], 1.0).unwrap();
        // origin is equidistant from all four points
        assert_eq!(ml_detect(Complex64::new(0.0, 0.0), &set, &ch).unwrap(), 0);
        // on the bisector of points 0 and 2
        assert_eq!(ml_detect(Complex64::new(0.5, 0.5), &set, &ch).unwrap(), 0);
    }

    #[test]
    fn llrs_scale_inversely_with_noise_var() {
        let set = set16x4();
        let mut rng = stream_rng(2, 0);
        let ch = draw_rayleigh(4, SnrPoint::db(5.0), &mut rng);
        let y = complex_gaussian(&mut rng, 1.0);
        let a = maxlog_llrs(y, &set, &ch, 0.3).unwrap();
        let b = maxlog_llrs(y, &set, &ch, 0.9).unwrap();
        for (x, z) in a.llrs.iter().zip(&b.llrs) {
            assert!((x / 3.0 - z).abs() < 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn invariant_under_common_offset() {
        let set = set16x4();
        let mut rng = stream_rng(3, 0);
        let ch = draw_rayleigh(4, SnrPoint::db(5.0), &mut rng);
        let rx = set.received_points(ch.gains());
        let shift = Complex64::new(3.7, -1.2);
        let shifted: Vec<_> = rx.iter().map(|p| p + shift).collect();
        for _ in 0..200 {
            let y = complex_gaussian(&mut rng, 2.0);
            assert_eq!(
                ml_detect_points(y, &rx),
                ml_detect_points(y + shift, &shifted)
            );
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let set = set16x4();
        let ch = ChannelRealization::new(vec![Complex64::new(1.0, 0.0); 2], 1.0).unwrap();
        assert!(ml_detect(Complex64::new(0.0, 0.0), &set, &ch).is_err());
    }
}
