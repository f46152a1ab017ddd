use num_complex::Complex64;

use crate::constellation::{
    build_signal_set, expand_quadrant, PreScaling, QuadrantParams, SmSignalSet,
};
use crate::{Error, Result};

/// Coordinates of a particle: `M/4` free points as `(I, Q)` pairs followed by
/// `N_t` pre-scaling coefficients as `(I, Q)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParticleLayout {
    pub m_order: usize,
    pub n_t: usize,
}

impl ParticleLayout {
    pub fn new(m_order: usize, n_t: usize) -> Result<Self> {
        if m_order < 4 || !m_order.is_power_of_two() {
            return Err(Error::UnsupportedOrder(m_order));
        }
        if n_t == 0 || !n_t.is_power_of_two() {
            return Err(Error::AntennaCount(n_t));
        }
        Ok(Self { m_order, n_t })
    }

    pub fn free_points(&self) -> usize {
        self.m_order / 4
    }

    pub fn dims(&self) -> usize {
        2 * (self.free_points() + self.n_t)
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(2 * self.free_points())
    }

    pub fn encode(&self, params: &QuadrantParams, pre: &PreScaling) -> Result<Vec<f64>> {
        if params.free_points.len() != self.free_points() || pre.n_t() != self.n_t {
            return Err(Error::Dimension("parameters do not match layout".into()));
        }
        Ok(params
            .free_points
            .iter()
            .chain(pre.coefficients())
            .flat_map(|c| [c.re, c.im])
            .collect())
    }

    pub fn decode(&self, x: &[f64]) -> Result<(QuadrantParams, PreScaling)> {
        self.check_len(x)?;
        let (c, a) = self.split(x);
        let pairs = |v: &[f64]| -> Vec<Complex64> {
            v.chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect()
        };
        Ok((
            QuadrantParams {
                free_points: pairs(c),
            },
            PreScaling::new(pairs(a))?,
        ))
    }

    pub fn signal_set(&self, x: &[f64]) -> Result<SmSignalSet> {
        let (params, pre) = self.decode(x)?;
        build_signal_set(&expand_quadrant(&params)?, &pre, self.n_t)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dims() {
            return Err(Error::Dimension(format!(
                "position has {} coordinates, layout needs {}",
                x.len(),
                self.dims()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Infeasible("non-finite coordinate".into()));
        }
        Ok(())
    }
}

/// Rescales the constellation part so its quadrant expansion has unit
/// average power and the pre-scaling part to unit mean power. Idempotent
/// and invariant to positive scaling of either part.
pub fn project_feasible(layout: &ParticleLayout, raw: &[f64]) -> Result<Vec<f64>> {
    layout.check_len(raw)?;
    let (c, a) = layout.split(raw);
    let scale = |part: &[f64], what: &str| -> Result<f64> {
        // every quadrant image has the magnitude of its free point
        let p = part.iter().map(|v| v * v).sum::<f64>() / (part.len() / 2) as f64;
        if p > 0.0 {
            Ok(p.sqrt().recip())
        } else {
            Err(Error::Infeasible(format!("{what} part is all zero")))
        }
    };
    let (sc, sa) = (scale(c, "constellation")?, scale(a, "pre-scaling")?);
    Ok(c.iter()
        .map(|v| v * sc)
        .chain(a.iter().map(|v| v * sa))
        .collect())
}
