//! Constellations, pre-scaling vectors and the SM transmit-vector set.
//!
//! Power is normalized per factor: every [`Constellation`] has unit average
//! symbol energy and every [`PreScaling`] has unit mean `|alpha_k|^2`, which
//! together give unit average energy over the `M * N_t` SM vectors.

mod io;
mod labeling;
mod signal_set;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use io::{read_design, write_design, Design};
pub use labeling::{gray, quadrant_labeling, square_qam_labeling, Labeling};
pub use signal_set::{build_signal_set, min_euclidean_distance, SmSignalSet};

use crate::{Error, Result};

/// Tolerance used when checking unit-power invariants.
pub const POWER_TOL: f64 = 1e-12;

fn mean_power(points: &[Complex64]) -> f64 {
    points.iter().map(|s| s.norm_sqr()).sum::<f64>() / points.len() as f64
}

/// `M` labeled complex symbols with unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    symbols: Vec<Complex64>,
    labeling: Labeling,
}

impl Constellation {
    /// Builds a constellation, rescaling `symbols` to unit average power.
    pub fn new(symbols: Vec<Complex64>, labeling: Labeling) -> Result<Self> {
        let m = symbols.len();
        if m < 4 || !m.is_power_of_two() {
            return Err(Error::Constellation(format!(
                "order {m} is not a power of two >= 4"
            )));
        }
        if labeling.len() != m {
            return Err(Error::Dimension(format!(
                "labeling covers {} symbols, constellation has {m}",
                labeling.len()
            )));
        }
        if symbols
            .iter()
            .any(|s| !s.re.is_finite() || !s.im.is_finite())
        {
            return Err(Error::Constellation("non-finite symbol".into()));
        }
        let p = mean_power(&symbols);
        if p <= 0.0 {
            return Err(Error::Constellation("all symbols are zero".into()));
        }
        let scale = p.sqrt().recip();
        let symbols = symbols.into_iter().map(|s| s * scale).collect();
        Ok(Self { symbols, labeling })
    }

    /// Rebuilds from stored coordinates without rescaling; rejects anything
    /// that is not already normalized.
    pub fn from_normalized(symbols: Vec<Complex64>, labeling: Labeling) -> Result<Self> {
        let p = mean_power(&symbols);
        if (p - 1.0).abs() > 1e-9 {
            return Err(Error::Constellation(format!("average power {p} is not 1")));
        }
        let c = Self::new(symbols.clone(), labeling)?;
        Ok(Self { symbols, ..c })
    }

    pub fn order(&self) -> usize {
        self.symbols.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.labeling.bits()
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn average_power(&self) -> f64 {
        mean_power(&self.symbols)
    }

    /// Replaces the labeling, keeping the points.
    pub fn with_labeling(self, labeling: Labeling) -> Result<Self> {
        Self::new(self.symbols, labeling)
    }

    /// True when the points follow the quadrant image pattern of
    /// [`expand_quadrant`] to within `tol`.
    pub fn is_quadrant_symmetric(&self, tol: f64) -> bool {
        let q = self.order() / 4;
        (0..q).all(|f| {
            let s = self.symbols[f];
            (self.symbols[q + f] + s.conj()).norm() <= tol
                && (self.symbols[2 * q + f] - s.conj()).norm() <= tol
                && (self.symbols[3 * q + f] + s).norm() <= tol
        })
    }

    /// The first `M/4` points, i.e. the free parameters of a
    /// quadrant-symmetric constellation.
    pub fn quadrant_params(&self) -> Option<QuadrantParams> {
        self.is_quadrant_symmetric(1e-12).then(|| QuadrantParams {
            free_points: self.symbols[..self.order() / 4].to_vec(),
        })
    }
}

/// The `M/4` free points of a quadrant-symmetric constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantParams {
    pub free_points: Vec<Complex64>,
}

/// Expands free points `s_f` into `[s, -conj(s), conj(s), -s]` blocks, then
/// normalizes to unit power and attaches [`quadrant_labeling`].
pub fn expand_quadrant(params: &QuadrantParams) -> Result<Constellation> {
    let free = &params.free_points;
    let q = free.len();
    if q == 0 || !q.is_power_of_two() {
        return Err(Error::Constellation(format!(
            "{q} free points do not give a power-of-two order"
        )));
    }
    if let Some(f) = free.iter().position(|s| *s == Complex64::new(0.0, 0.0)) {
        return Err(Error::Constellation(format!(
            "free point {f} is zero; its images would coincide"
        )));
    }
    let mut symbols = Vec::with_capacity(4 * q);
    symbols.extend(free.iter().copied());
    symbols.extend(free.iter().map(|s| -s.conj()));
    symbols.extend(free.iter().map(|s| s.conj()));
    symbols.extend(free.iter().map(|s| -s));
    Constellation::new(symbols, quadrant_labeling(4 * q)?)
}

fn even_log2(m_order: usize) -> Result<u32> {
    match m_order {
        4 | 16 | 64 => Ok(m_order.trailing_zeros()),
        _ => Err(Error::UnsupportedOrder(m_order)),
    }
}

/// APSK starting point: `2^(m/2-1)` rings with radii `1, 2, ...`, each
/// holding `2^(m/2+1)` points at phases `(p + 1/2) * 2pi / P`.
///
/// All rings share the half-slot phase offset. A further half-slot shift on
/// alternate rings would place points on the axes, where a point and its
/// conjugate image coincide, so the result could not be quadrant symmetric.
pub fn make_apsk_initial(m_order: usize) -> Result<Constellation> {
    let m = even_log2(m_order)?;
    let rings = 1usize << (m / 2 - 1);
    let ring_size = 1usize << (m / 2 + 1);
    let slots = ring_size / 4;
    let step = 2.0 * PI / ring_size as f64;
    let free_points = (0..rings)
        .flat_map(|r| {
            (0..slots).map(move |p| Complex64::from_polar((r + 1) as f64, (p as f64 + 0.5) * step))
        })
        .collect();
    expand_quadrant(&QuadrantParams { free_points })
}

/// Gray-labeled square QAM of order 4, 16 or 64, unit power.
pub fn square_qam(m_order: usize) -> Result<Constellation> {
    let m = even_log2(m_order)?;
    let side = 1usize << (m / 2);
    let level = |i: usize| (2 * i) as f64 - (side - 1) as f64;
    let symbols = (0..side)
        .flat_map(|i| (0..side).map(move |q| Complex64::new(level(i), level(q))))
        .collect();
    Constellation::new(symbols, square_qam_labeling(side)?)
}

/// Per-antenna complex coefficients with `(1/N_t) sum |alpha_k|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreScaling {
    coefficients: Vec<Complex64>,
}

impl PreScaling {
    /// Rescales `coefficients` to unit mean power.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::PreScaling("no coefficients".into()));
        }
        if coefficients
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::PreScaling("non-finite coefficient".into()));
        }
        let p = mean_power(&coefficients);
        if p <= 0.0 {
            return Err(Error::PreScaling("all coefficients are zero".into()));
        }
        let scale = p.sqrt().recip();
        Ok(Self {
            coefficients: coefficients.into_iter().map(|a| a * scale).collect(),
        })
    }

    /// Stored coefficients, accepted only if already normalized.
    pub fn from_normalized(coefficients: Vec<Complex64>) -> Result<Self> {
        let p = mean_power(&coefficients);
        if (p - 1.0).abs() > 1e-9 {
            return Err(Error::PreScaling(format!("mean power {p} is not 1")));
        }
        Self::new(coefficients.clone())?;
        Ok(Self { coefficients })
    }

    pub fn unit(n_t: usize) -> Self {
        Self {
            coefficients: vec![Complex64::new(1.0, 0.0); n_t],
        }
    }

    pub fn n_t(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn mean_power(&self) -> f64 {
        mean_power(&self.coefficients)
    }

    /// Rotates every coefficient so that `alpha_1` has zero phase. Over
    /// circularly symmetric fading this does not change the link.
    pub fn canonical(&self) -> Self {
        let rot = Complex64::from_polar(1.0, -self.coefficients[0].arg());
        Self {
            coefficients: self.coefficients.iter().map(|a| a * rot).collect(),
        }
    }
}

/// Starting pre-scaling `alpha_k = exp(j pi (k-1) / (2^(m/2) N_t))`.
pub fn make_initial_prescaling(m_order: usize, n_t: usize) -> Result<PreScaling> {
    let m = even_log2(m_order)?;
    if n_t == 0 {
        return Err(Error::AntennaCount(n_t));
    }
    let denom = (1u64 << (m / 2)) as f64 * n_t as f64;
    Ok(PreScaling {
        coefficients: (0..n_t)
            .map(|k| Complex64::from_polar(1.0, PI * k as f64 / denom))
            .collect(),
    })
}
