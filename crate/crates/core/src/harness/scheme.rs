use num_complex::Complex64;

use crate::baselines::{
    conventional_sm_set, smp_coefficients, smp_perfect_coefficients, SmpConfig, SmpMode,
};
use crate::constellation::{build_signal_set, Constellation, PreScaling, SmSignalSet};
use crate::Result;

/// How the transmitter forms its SM vectors.
#[derive(Debug, Clone)]
pub enum SchemeKind {
    /// Channel-independent pre-scaling, already folded into the set.
    Fixed(SmSignalSet),
    /// SM-P with channel-phase compensation; `set` carries unit pre-scaling.
    SmpPerfectCsi { set: SmSignalSet, theta: Vec<f64> },
}

/// A named transmit scheme.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub id: String,
    pub kind: SchemeKind,
}

impl Scheme {
    pub fn fixed(id: impl Into<String>, set: SmSignalSet) -> Self {
        Self {
            id: id.into(),
            kind: SchemeKind::Fixed(set),
        }
    }

    /// Conventional SM with square QAM.
    pub fn conventional(m_order: usize, n_t: usize) -> Result<Self> {
        Ok(Self::fixed("sm", conventional_sm_set(m_order, n_t)?))
    }

    /// SM-P over square QAM, with or without channel feedback.
    pub fn smp(m_order: usize, n_t: usize, mode: SmpMode) -> Result<Self> {
        let qam = crate::constellation::square_qam(m_order)?;
        Self::smp_with(&qam, n_t, mode)
    }

    pub fn smp_with(constellation: &Constellation, n_t: usize, mode: SmpMode) -> Result<Self> {
        let config = SmpConfig::new(mode, constellation.order(), n_t);
        Ok(match mode {
            SmpMode::NoFeedback => Self::fixed(
                "smp-nofb",
                build_signal_set(constellation, &smp_coefficients(&config, None)?, n_t)?,
            ),
            SmpMode::PerfectCsi => Self {
                id: "smp-csi".into(),
                kind: SchemeKind::SmpPerfectCsi {
                    set: build_signal_set(constellation, &PreScaling::unit(n_t), n_t)?,
                    theta: config.theta,
                },
            },
        })
    }

    pub fn set(&self) -> &SmSignalSet {
        match &self.kind {
            SchemeKind::Fixed(set) | SchemeKind::SmpPerfectCsi { set, .. } => set,
        }
    }

    /// Gains the receiver sees per antenna: `h_k alpha_k` with any
    /// channel-dependent pre-scaling applied. The set's own pre-scaling is
    /// applied separately by [`SmSignalSet::received_points`].
    pub(crate) fn effective_gains(&self, h: &[Complex64], out: &mut [Complex64]) {
        match &self.kind {
            SchemeKind::Fixed(_) => out.copy_from_slice(h),
            SchemeKind::SmpPerfectCsi { theta, .. } => {
                for ((o, a), g) in out
                    .iter_mut()
                    .zip(smp_perfect_coefficients(theta, h))
                    .zip(h)
                {
                    *o = g * a;
                }
            }
        }
    }
}
