//! BICM chain coding: LDPC codec, bit interleaver and MCS table.
//!
//! The bundled code is not the 5G NR LDPC; it is a random systematic LDPC
//! with an accumulator parity part, built directly at each MCS rate so the
//! relative behaviour of different signal sets can be compared.

mod interleaver;
mod ldpc;
mod mcs;

pub use interleaver::{deinterleave, interleave, Interleaver};
pub use ldpc::{info_column_weight, DecodeOutput, LdpcCode};
pub use mcs::{mcs_entry, mcs_table, parse_mcs_table, McsEntry};

use crate::{Error, Result};

/// Target codeword length; the actual length is rounded to a multiple of
/// the bits carried per SM vector.
pub const DEFAULT_CODEWORD_BITS: usize = 4000;
pub const DEFAULT_MAX_ITERS: usize = 50;
pub const DEFAULT_MIN_SUM_SCALE: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodecId {
    /// Bundled LDPC.
    Ldpc,
    /// Identity code, decoded by hard decision. Used for oracle checks.
    Uncoded,
}

impl CodecId {
    pub fn name(self) -> &'static str {
        match self {
            CodecId::Ldpc => "ldpc",
            CodecId::Uncoded => "uncoded",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FecConfig {
    pub codec: CodecId,
    pub k: usize,
    pub n: usize,
    pub code_seed: u64,
    pub interleaver_seed: u64,
    pub max_iters: usize,
    pub min_sum_scale: f64,
}

impl FecConfig {
    /// LDPC sized for `entry`: `n` is the multiple of `log2(M N_t)` nearest
    /// `target_n`, and `k = round(rate_sm * n)`.
    pub fn ldpc_for_mcs(entry: &McsEntry, target_n: usize, seed: u64) -> Result<Self> {
        let bps = (entry.order * entry.n_t).trailing_zeros() as usize;
        Self::ldpc_for_rate(entry.rate_sm, bps, target_n, seed)
    }

    pub fn ldpc_for_rate(
        rate: f64,
        bits_per_vector: usize,
        target_n: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::Config(format!("code rate {rate} outside (0, 1)")));
        }
        let n =
            ((target_n as f64 / bits_per_vector as f64).round() as usize).max(1) * bits_per_vector;
        let k = (rate * n as f64).round() as usize;
        if k == 0 || k >= n {
            return Err(Error::Config(format!("rate {rate} degenerate at n = {n}")));
        }
        Ok(Self {
            codec: CodecId::Ldpc,
            k,
            n,
            code_seed: seed,
            interleaver_seed: seed,
            max_iters: DEFAULT_MAX_ITERS,
            min_sum_scale: DEFAULT_MIN_SUM_SCALE,
        })
    }

    pub fn uncoded(n: usize, seed: u64) -> Self {
        Self {
            codec: CodecId::Uncoded,
            k: n,
            n,
            code_seed: seed,
            interleaver_seed: seed,
            max_iters: 0,
            min_sum_scale: 1.0,
        }
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Codewords must fill a whole number of SM vectors.
    pub fn validate(&self, bits_per_vector: u32) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::Config(format!(
                "k = {} invalid for n = {}",
                self.k, self.n
            )));
        }
        if !self.n.is_multiple_of(bits_per_vector as usize) {
            return Err(Error::Config(format!(
                "codeword length {} is not a multiple of {bits_per_vector} bits per vector",
                self.n
            )));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Fec> {
        let code = match self.codec {
            CodecId::Ldpc => Some(LdpcCode::construct(self.n, self.k, self.code_seed)?),
            CodecId::Uncoded => {
                if self.k != self.n {
                    return Err(Error::Config("uncoded requires k = n".into()));
                }
                None
            }
        };
        Ok(Fec {
            config: self.clone(),
            code,
            interleaver: Interleaver::new(self.n, self.interleaver_seed),
        })
    }
}

/// A built codec plus interleaver.
#[derive(Debug, Clone)]
pub struct Fec {
    config: FecConfig,
    code: Option<LdpcCode>,
    interleaver: Interleaver,
}

impl Fec {
    pub fn config(&self) -> &FecConfig {
        &self.config
    }

    pub fn code(&self) -> Option<&LdpcCode> {
        self.code.as_ref()
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        match &self.code {
            Some(code) => code.encode(info),
            None if info.len() == self.config.k => Ok(info.to_vec()),
            None => Err(Error::Length {
                expected: self.config.k,
                got: info.len(),
            }),
        }
    }

    /// Decodes channel LLRs (positive favours 0).
    pub fn decode(&self, llrs: &[f64]) -> Result<DecodeOutput> {
        match &self.code {
            Some(code) => code.decode(llrs, self.config.max_iters, self.config.min_sum_scale),
            None => {
                if llrs.len() != self.config.n {
                    return Err(Error::Length {
                        expected: self.config.n,
                        got: llrs.len(),
                    });
                }
                Ok(DecodeOutput {
                    info: llrs.iter().map(|&l| u8::from(l < 0.0)).collect(),
                    converged: llrs.iter().all(|&l| l != 0.0),
                    iterations: 0,
                })
            }
        }
    }
}

pub fn encode(info: &[u8], fec: &Fec) -> Result<Vec<u8>> {
    fec.encode(info)
}

pub fn decode(llrs: &[f64], fec: &Fec) -> Result<DecodeOutput> {
    fec.decode(llrs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mcs_sizing() {
        let e = mcs_entry(16, 4).unwrap();
        let c = FecConfig::ldpc_for_mcs(&e, DEFAULT_CODEWORD_BITS, 1).unwrap();
        assert_eq!(c.n % 6, 0);
        assert!((c.rate() - e.rate_sm).abs() <= 0.5 / c.n as f64);
        c.validate(6).unwrap();
        assert!(c.validate(7).is_err());
    }

    #[test]
    fn every_mcs_builds_a_valid_code() {
        for n_t in [2, 4] {
            for e in mcs_table(n_t) {
                let c = FecConfig::ldpc_for_mcs(&e, DEFAULT_CODEWORD_BITS, 3).unwrap();
                let bps = (e.order * n_t).trailing_zeros();
                c.validate(bps).unwrap();
                let fec = c.build().unwrap();
                let info: Vec<u8> = (0..c.k).map(|i| (i % 3 == 1) as u8).collect();
                let cw = fec.encode(&info).unwrap();
                assert!(fec.code().unwrap().check(&cw));
                let mut p = fec.interleaver().permutation().to_vec();
                p.sort_unstable();
                assert!(p.iter().enumerate().all(|(i, &x)| i as u32 == x));
            }
        }
    }

    #[test]
    fn noiseless_roundtrip_through_interleaver() {
        let e = mcs_entry(10, 2).unwrap();
        let fec = FecConfig::ldpc_for_mcs(&e, 1000, 4)
            .unwrap()
            .build()
            .unwrap();
        let info: Vec<u8> = (0..fec.k()).map(|i| ((i * 31) % 7 < 3) as u8).collect();
        let tx = fec.interleaver().interleave(&fec.encode(&info).unwrap());
        let llrs: Vec<f64> = tx
            .iter()
            .map(|&b| if b == 0 { 8.0 } else { -8.0 })
            .collect();
        let out = fec.decode(&fec.interleaver().deinterleave(&llrs)).unwrap();
        assert!(out.converged);
        assert_eq!(out.info, info);
    }

    #[test]
    fn uncoded_passthrough() {
        let fec = FecConfig::uncoded(8, 0).build().unwrap();
        let cw = fec.encode(&[1, 0, 1, 1, 0, 0, 1, 0]).unwrap();
        let llrs: Vec<f64> = cw
            .iter()
            .map(|&b| if b == 0 { 1.0 } else { -1.0 })
            .collect();
        assert_eq!(fec.decode(&llrs).unwrap().info, cw);
        assert!(!fec.decode(&[0.0; 8]).unwrap().converged);
    }
}
