use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::Scheme;
use crate::channel::{complex_gaussian, fill_rayleigh, SnrPoint};
use crate::detection::maxlog_llrs_into;
use crate::fec::Fec;
use crate::rng::stream_rng;
use crate::stats::wilson_95;
use crate::Result;

/// Channel time variation within a codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    /// `h = 1` on every antenna.
    Awgn,
    /// Independent Rayleigh draw for every channel use.
    PerSymbol,
    /// Rayleigh gains held for this many channel uses.
    Block(usize),
    /// One Rayleigh draw per codeword.
    PerCodeword,
}

impl FadingModel {
    pub fn name(&self) -> String {
        match self {
            FadingModel::Awgn => "awgn".into(),
            FadingModel::PerSymbol => "per-symbol".into(),
            FadingModel::Block(n) => format!("block-{n}"),
            FadingModel::PerCodeword => "per-codeword".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "awgn" => Some(Self::Awgn),
            "per-symbol" => Some(Self::PerSymbol),
            "per-codeword" => Some(Self::PerCodeword),
            _ => s
                .strip_prefix("block-")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n > 0)
                .map(Self::Block),
        }
    }

    fn coherence(&self, symbols: usize) -> usize {
        match *self {
            FadingModel::Awgn | FadingModel::PerCodeword => symbols,
            FadingModel::PerSymbol => 1,
            FadingModel::Block(n) => n,
        }
    }
}

/// Stop after `min_errors` block errors or `max_blocks` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_blocks: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_blocks: 100_000,
        }
    }
}

/// One measured BLER point.
#[derive(Debug, Clone, PartialEq)]
pub struct BlerRow {
    pub scheme: String,
    pub mcs: Option<u32>,
    pub n_t: usize,
    pub snr_db: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BlerRow {
    pub fn new(
        scheme: &str,
        mcs: Option<u32>,
        n_t: usize,
        snr_db: f64,
        blocks: u64,
        errors: u64,
    ) -> Self {
        let (ci_low, ci_high) = wilson_95(errors, blocks);
        Self {
            scheme: scheme.to_string(),
            mcs,
            n_t,
            snr_db,
            blocks,
            block_errors: errors,
            bler: if blocks == 0 {
                0.0
            } else {
                errors as f64 / blocks as f64
            },
            ci_low,
            ci_high,
        }
    }
}

/// Blocks simulated between stop-rule checks.
const CHUNK: u64 = 16;

/// Runs the coded link for one block, drawing everything from stream
/// `block` of `seed`. Returns true on a block error.
fn run_block(
    scheme: &Scheme,
    fec: &Fec,
    noise_var: f64,
    fading: FadingModel,
    seed: u64,
    block: u64,
) -> bool {
    let set = scheme.set();
    let bits = set.bits_per_vector() as usize;
    let n_t = set.n_t();
    let mut rng = stream_rng(seed, block);
    let info: Vec<u8> = (0..fec.k()).map(|_| rng.random_range(0..2u8)).collect();
    let cw = fec.encode(&info).expect("info length matches");
    let tx = fec.interleaver().interleave(&cw);
    let symbols = tx.len() / bits;
    let coherence = fading.coherence(symbols);

    let mut h = vec![Complex64::new(1.0, 0.0); n_t];
    let mut g = vec![Complex64::new(0.0, 0.0); n_t];
    let mut rx = Vec::with_capacity(set.len());
    let mut llrs = vec![0.0; tx.len()];
    for (t, chunk) in tx.chunks_exact(bits).enumerate() {
        if t % coherence == 0 {
            if fading != FadingModel::Awgn {
                fill_rayleigh(&mut rng, &mut h);
            }
            scheme.effective_gains(&h, &mut g);
            set.received_points_into(&g, &mut rx);
        }
        let word = chunk.iter().fold(0u32, |w, &b| (w << 1) | u32::from(b));
        let j = set.labeling().index(word);
        let y = rx[j] + complex_gaussian(&mut rng, noise_var);
        maxlog_llrs_into(y, &rx, set, noise_var, &mut llrs[t * bits..(t + 1) * bits]);
    }
    let out = fec
        .decode(&fec.interleaver().deinterleave(&llrs))
        .expect("llr length matches");
    out.info != info
}

/// Measures the coded BLER of `scheme` at `snr`.
///
/// Block `b` always uses random stream `b`, so two schemes with the same
/// alphabet size see identical bits, gains and noise, and the result does not
/// depend on the worker count. Counting stops at the first block where the
/// error count reaches `stop.min_errors`, or at `stop.max_blocks`.
pub fn simulate_bler(
    scheme: &Scheme,
    fec: &Fec,
    snr: SnrPoint,
    fading: FadingModel,
    stop: StopRule,
    seed: u64,
) -> Result<BlerRow> {
    let set = scheme.set();
    fec.config().validate(set.bits_per_vector())?;
    let noise_var = snr.noise_var();
    let (mut blocks, mut errors) = (0u64, 0u64);
    'outer: while blocks < stop.max_blocks {
        let end = (blocks + CHUNK).min(stop.max_blocks);
        let results: Vec<bool> = (blocks..end)
            .into_par_iter()
            .map(|b| run_block(scheme, fec, noise_var, fading, seed, b))
            .collect();
        for e in results {
            blocks += 1;
            errors += u64::from(e);
            if errors >= stop.min_errors {
                break 'outer;
            }
        }
    }
    Ok(BlerRow::new(
        &scheme.id,
        None,
        set.n_t(),
        snr.snr_db,
        blocks,
        errors,
    ))
}
