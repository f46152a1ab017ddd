use crate::fec::{Fec, McsEntry};
use crate::optimizer::{find_waterfall_snr_for, SearchConfig, WaterfallResult};
use crate::{Error, Result};

use super::Scheme;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub scheme: String,
    pub snr_db: f64,
    /// `SNR_reference - SNR_scheme`; positive means the scheme needs less SNR.
    pub gain_db: f64,
    pub waterfall: WaterfallResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub mcs: Option<u32>,
    pub n_t: usize,
    pub reference: String,
    pub bler_target: f64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn row(&self, scheme: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.scheme == scheme)
    }
}

/// Waterfall threshold of every scheme at `bler_target`, and its gain over
/// the scheme named `reference`. All schemes share the search seed, so
/// equal-size alphabets see identical random draws.
pub fn compare_schemes(
    mcs: Option<&McsEntry>,
    schemes: &[Scheme],
    reference: &str,
    fec: &Fec,
    bler_target: f64,
    grid: &SearchConfig,
) -> Result<ComparisonTable> {
    let first = schemes
        .first()
        .ok_or_else(|| Error::Config("no schemes to compare".into()))?;
    let n_t = first.set().n_t();
    if schemes
        .iter()
        .any(|s| s.set().n_t() != n_t || s.set().len() != first.set().len())
    {
        return Err(Error::Dimension("schemes must share M and N_t".into()));
    }
    let results = schemes
        .iter()
        .map(|s| find_waterfall_snr_for(s, fec, bler_target, grid).map(|w| (s.id.clone(), w)))
        .collect::<Result<Vec<_>>>()?;
    let ref_snr = results
        .iter()
        .find(|(id, _)| id == reference)
        .map(|(_, w)| w.snr_db)
        .ok_or_else(|| Error::Config(format!("reference scheme `{reference}` missing")))?;
    let mcs_id = mcs.map(|e| e.id);
    Ok(ComparisonTable {
        mcs: mcs_id,
        n_t,
        reference: reference.to_string(),
        bler_target,
        rows: results
            .into_iter()
            .map(|(scheme, mut waterfall)| {
                for p in &mut waterfall.probes {
                    p.mcs = mcs_id;
                }
                ComparisonRow {
                    gain_db: ((ref_snr - waterfall.snr_db) * 1e6).round() / 1e6,
                    snr_db: waterfall.snr_db,
                    scheme,
                    waterfall,
                }
            })
            .collect(),
    })
}
