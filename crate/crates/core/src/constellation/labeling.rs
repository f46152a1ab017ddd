//! Bit labelings.

use crate::{Error, Result};

/// Binary-reflected Gray code.
pub fn gray(x: u32) -> u32 {
    x ^ (x >> 1)
}

/// A bijection between symbol indices and `bits`-bit label words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    bits: u32,
    label_of: Vec<u32>,
    index_of: Vec<u32>,
}

impl Labeling {
    /// `label_of[i]` is the label word carried by symbol `i`.
    pub fn new(label_of: Vec<u32>) -> Result<Self> {
        let n = label_of.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Constellation(format!(
                "labeling size {n} is not a power of two"
            )));
        }
        let mut index_of = vec![u32::MAX; n];
        for (i, &w) in label_of.iter().enumerate() {
            let slot = index_of.get_mut(w as usize).ok_or_else(|| {
                Error::Constellation(format!("label {w} out of range for {n} symbols"))
            })?;
            if *slot != u32::MAX {
                return Err(Error::Constellation(format!("label {w} assigned twice")));
            }
            *slot = i as u32;
        }
        Ok(Self {
            bits: n.trailing_zeros(),
            label_of,
            index_of,
        })
    }

    pub fn natural(n: usize) -> Result<Self> {
        Self::new((0..n as u32).collect())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.label_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label_of.is_empty()
    }

    pub fn label(&self, index: usize) -> u32 {
        self.label_of[index]
    }

    pub fn index(&self, label: u32) -> usize {
        self.index_of[label as usize] as usize
    }

    /// Symbol index to label, as stored in constellation files.
    pub fn as_permutation(&self) -> &[u32] {
        &self.label_of
    }
}

/// Labeling for a quadrant-symmetric constellation of order `m_order`,
/// indexed the way [`super::expand_quadrant`] orders its output.
///
/// Index `q * M/4 + f` is the image of free point `f` in quadrant `q`, with
/// quadrants visited as identity, `-conj`, `conj`, negation (first, second,
/// fourth, third quadrant for a first-quadrant point). For the APSK orders
/// 4, 16 and 64 the free point `f` is ring `f / (P/4)`, phase slot
/// `f % (P/4)` and the word is `gray(ring) ++ gray(phase slot)` where `P`
/// is the ring size, so the quadrant falls out as the two top phase bits.
/// Other orders put Gray-coded quadrant bits first, then `gray(f)`.
pub fn quadrant_labeling(m_order: usize) -> Result<Labeling> {
    if m_order < 4 || !m_order.is_power_of_two() {
        return Err(Error::Constellation(format!(
            "quadrant-symmetric order must be a power of two >= 4, got {m_order}"
        )));
    }
    let quarter = m_order / 4;
    let mut label_of = vec![0u32; m_order];
    let m = m_order.trailing_zeros();
    if m.is_multiple_of(2) {
        let ring_size = 1u32 << (m / 2 + 1);
        let phase_bits = m / 2 + 1;
        let slots = ring_size / 4;
        for f in 0..quarter as u32 {
            let (ring, slot) = (f / slots, f % slots);
            let phase_idx = [
                slot,
                ring_size / 2 - 1 - slot,
                ring_size - 1 - slot,
                slot + ring_size / 2,
            ];
            for (q, &p) in phase_idx.iter().enumerate() {
                label_of[q * quarter + f as usize] = (gray(ring) << phase_bits) | gray(p);
            }
        }
    } else {
        let inner = m - 2;
        for f in 0..quarter as u32 {
            for q in 0..4u32 {
                label_of[q as usize * quarter + f as usize] = (gray(q) << inner) | gray(f);
            }
        }
    }
    Labeling::new(label_of)
}

/// Gray labeling of a square QAM grid with `side` levels per axis, symbol
/// index `i * side + q` for in-phase level `i` and quadrature level `q`.
pub fn square_qam_labeling(side: usize) -> Result<Labeling> {
    let half = side.trailing_zeros();
    let label_of = (0..side as u32)
        .flat_map(|i| (0..side as u32).map(move |q| (gray(i) << half) | gray(q)))
        .collect();
    Labeling::new(label_of)
}
