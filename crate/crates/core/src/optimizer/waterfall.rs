use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::channel::SnrPoint;
use crate::constellation::SmSignalSet;
use crate::fec::Fec;
use crate::harness::{simulate_bler, BlerRow, FadingModel, Scheme, StopRule};
use crate::{Error, Result};

/// Where and how finely to look for a BLER threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub low_db: f64,
    pub high_db: f64,
    pub coarse_step_db: f64,
    pub grid_db: f64,
    pub stop: StopRule,
    pub fading: FadingModel,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            low_db: -10.0,
            high_db: 40.0,
            coarse_step_db: 1.0,
            grid_db: 0.1,
            // enough blocks to see BLER 1e-2 with twice the error margin
            stop: StopRule {
                min_errors: 100,
                max_blocks: 20_000,
            },
            fading: FadingModel::PerSymbol,
            seed: 1,
        }
    }
}

/// Threshold plus every BLER point measured on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfallResult {
    pub snr_db: f64,
    pub probes: Vec<BlerRow>,
    pub stop: StopRule,
}

/// Smallest grid SNR whose measured BLER is at most `target`: a coarse
/// upward sweep brackets the crossing, bisection on the grid narrows it.
/// `measure` is called at most once per grid point.
pub fn find_threshold<F>(
    mut measure: F,
    target: f64,
    cfg: &SearchConfig,
) -> Result<(f64, Vec<BlerRow>)>
where
    F: FnMut(f64) -> Result<BlerRow>,
{
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::Config(format!(
            "BLER target {target} outside (0, 1]"
        )));
    }
    if !(cfg.grid_db > 0.0 && cfg.high_db >= cfg.low_db) {
        return Err(Error::Config("empty SNR search range".into()));
    }
    let top = ((cfg.high_db - cfg.low_db) / cfg.grid_db).round() as i64;
    let coarse = ((cfg.coarse_step_db / cfg.grid_db).round() as i64).max(1);
    let at = |i: i64| cfg.low_db + i as f64 * cfg.grid_db;
    let mut seen: BTreeMap<i64, BlerRow> = BTreeMap::new();
    let mut passes = |i: i64, seen: &mut BTreeMap<i64, BlerRow>| -> Result<bool> {
        if let Entry::Vacant(slot) = seen.entry(i) {
            slot.insert(measure(at(i))?);
        }
        Ok(seen[&i].bler <= target)
    };

    let (mut lo, mut hi) = (None, None);
    let mut i = 0;
    loop {
        if passes(i, &mut seen)? {
            hi = Some(i);
            break;
        }
        lo = Some(i);
        if i >= top {
            break;
        }
        i = (i + coarse).min(top);
    }
    let Some(mut hi) = hi else {
        return Err(Error::RangeExhausted {
            target,
            low_db: cfg.low_db,
            high_db: cfg.high_db,
        });
    };
    if let Some(mut lo) = lo {
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if passes(mid, &mut seen)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok((at(hi), seen.into_values().collect()))
}

/// Waterfall SNR of `scheme` at `bler_target` with the given codec.
pub fn find_waterfall_snr_for(
    scheme: &Scheme,
    fec: &Fec,
    bler_target: f64,
    cfg: &SearchConfig,
) -> Result<WaterfallResult> {
    let measure = |db: f64| {
        simulate_bler(
            scheme,
            fec,
            SnrPoint::db(db),
            cfg.fading,
            cfg.stop,
            cfg.seed,
        )
    };
    let (snr_db, probes) = find_threshold(measure, bler_target, cfg)?;
    Ok(WaterfallResult {
        snr_db,
        probes,
        stop: cfg.stop,
    })
}

/// Waterfall SNR of a fixed signal set.
pub fn find_waterfall_snr(
    set: &SmSignalSet,
    fec: &Fec,
    bler_target: f64,
    cfg: &SearchConfig,
) -> Result<WaterfallResult> {
    find_waterfall_snr_for(&Scheme::fixed("set", set.clone()), fec, bler_target, cfg)
}
