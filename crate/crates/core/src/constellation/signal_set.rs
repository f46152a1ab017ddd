use num_complex::Complex64;

use super::{Constellation, Labeling, PreScaling};
use crate::channel::ChannelRealization;
use crate::{Error, Result};

/// The `M * N_t` SM transmit vectors after pre-scaling.
///
/// Vector `j = k * M + m` is `e_k * alpha_k * s_m`. Its label is the
/// antenna index `k` in natural binary followed by the symbol label of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmSignalSet {
    n_t: usize,
    constellation: Constellation,
    pre_scaling: PreScaling,
    points: Vec<Complex64>,
    labeling: Labeling,
    partition: Vec<[Vec<u16>; 2]>,
}

/// Composes a constellation and a pre-scaling vector into the SM vector set.
pub fn build_signal_set(
    constellation: &Constellation,
    pre_scaling: &PreScaling,
    n_t: usize,
) -> Result<SmSignalSet> {
    if n_t == 0 || !n_t.is_power_of_two() {
        return Err(Error::AntennaCount(n_t));
    }
    if pre_scaling.n_t() != n_t {
        return Err(Error::Dimension(format!(
            "{} pre-scaling coefficients for {n_t} antennas",
            pre_scaling.n_t()
        )));
    }
    let m = constellation.order();
    let m_bits = constellation.bits_per_symbol();
    let points = pre_scaling
        .coefficients()
        .iter()
        .flat_map(|a| constellation.symbols().iter().map(move |s| a * s))
        .collect();
    let labels = (0..n_t * m)
        .map(|j| ((j / m) as u32) << m_bits | constellation.labeling().label(j % m))
        .collect();
    let labeling = Labeling::new(labels)?;
    let bits = labeling.bits();
    let partition = (0..bits)
        .map(|i| {
            let mut sets = [Vec::new(), Vec::new()];
            for j in 0..n_t * m {
                sets[bit_of(labeling.label(j), bits, i) as usize].push(j as u16);
            }
            sets
        })
        .collect();
    Ok(SmSignalSet {
        n_t,
        constellation: constellation.clone(),
        pre_scaling: pre_scaling.clone(),
        points,
        labeling,
        partition,
    })
}

/// Bit `i` of a `bits`-wide word, counted from the most significant bit.
#[inline]
pub(crate) fn bit_of(word: u32, bits: u32, i: u32) -> u8 {
    ((word >> (bits - 1 - i)) & 1) as u8
}

impl SmSignalSet {
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn order(&self) -> usize {
        self.constellation.order()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `log2(M * N_t)`.
    pub fn bits_per_vector(&self) -> u32 {
        self.labeling.bits()
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn pre_scaling(&self) -> &PreScaling {
        &self.pre_scaling
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn antenna_of(&self, j: usize) -> usize {
        j / self.order()
    }

    pub fn symbol_of(&self, j: usize) -> usize {
        j % self.order()
    }

    /// The nonzero entry `alpha_k * s_m` of vector `j`.
    pub fn point(&self, j: usize) -> Complex64 {
        self.points[j]
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// The full `N_t`-dimensional transmit vector.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.n_t];
        v[self.antenna_of(j)] = self.points[j];
        v
    }

    /// Bit `i` (MSB first) of the label of vector `j`.
    pub fn bit(&self, j: usize, i: u32) -> u8 {
        bit_of(self.labeling.label(j), self.bits_per_vector(), i)
    }

    /// Vector indices whose bit `i` equals 0 and 1 respectively.
    pub fn bit_partition(&self, i: u32) -> &[Vec<u16>; 2] {
        &self.partition[i as usize]
    }

    /// `(1 / (M N_t)) sum |alpha_k s_m|^2`.
    pub fn average_power(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// Noiseless received points `h_k alpha_k s_m` for every vector.
    pub fn received_points(&self, gains: &[Complex64]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        self.received_points_into(gains, &mut out);
        out
    }

    pub fn received_points_into(&self, gains: &[Complex64], out: &mut Vec<Complex64>) {
        let m = self.order();
        out.clear();
        out.extend(
            self.points
                .iter()
                .enumerate()
                .map(|(j, p)| gains[j / m] * p),
        );
    }

    pub(crate) fn check_channel(&self, channel: &ChannelRealization) -> Result<()> {
        if channel.gains().len() != self.n_t {
            return Err(Error::Dimension(format!(
                "channel has {} gains, signal set has {} antennas",
                channel.gains().len(),
                self.n_t
            )));
        }
        Ok(())
    }
}

/// Smallest squared distance between two distinct noiseless received vectors.
pub fn min_euclidean_distance(set: &SmSignalSet, channel: &ChannelRealization) -> Result<f64> {
    set.check_channel(channel)?;
    let rx = set.received_points(channel.gains());
    let mut best = f64::INFINITY;
    for i in 0..rx.len() {
        for j in i + 1..rx.len() {
            best = best.min((rx[i] - rx[j]).norm_sqr());
        }
    }
    Ok(best)
}
