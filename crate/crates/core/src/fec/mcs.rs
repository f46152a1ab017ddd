//! MCS table.

use crate::{Error, Result};

const TABLE: &str = include_str!("../../data/mcs_table.csv");

/// One modulation-and-coding point as used on an `n_t`-antenna SM link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub id: u32,
    pub order: usize,
    /// Code rate of the single-antenna scheme.
    pub rate: f64,
    /// Code rate carrying the same information per channel use over the SM
    /// alphabet: `rate_sm * log2(M N_t) = rate * log2(M)`.
    pub rate_sm: f64,
    pub n_t: usize,
}

impl McsEntry {
    /// Information bits per channel use.
    pub fn spectral_efficiency(&self) -> f64 {
        self.rate * (self.order as f64).log2()
    }
}

/// Parses a table in the bundled CSV layout.
pub fn parse_mcs_table(text: &str) -> Result<Vec<(u32, usize, f64)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(err("expected mcs,modulation_order,code_rate"));
            }
            Ok((
                f[0].parse().map_err(|_| err("bad mcs id"))?,
                f[1].parse().map_err(|_| err("bad modulation order"))?,
                f[2].parse().map_err(|_| err("bad code rate"))?,
            ))
        })
        .collect()
}

/// All bundled MCS points for `n_t` antennas.
pub fn mcs_table(n_t: usize) -> Vec<McsEntry> {
    parse_mcs_table(TABLE)
        .expect("bundled MCS table parses")
        .into_iter()
        .map(|(id, order, rate)| McsEntry {
            id,
            order,
            rate,
            rate_sm: rate * (order as f64).log2() / ((order * n_t) as f64).log2(),
            n_t,
        })
        .collect()
}

pub fn mcs_entry(id: u32, n_t: usize) -> Result<McsEntry> {
    if n_t == 0 || !n_t.is_power_of_two() {
        return Err(Error::AntennaCount(n_t));
    }
    mcs_table(n_t)
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Config(format!("unknown MCS {id}")))
}
