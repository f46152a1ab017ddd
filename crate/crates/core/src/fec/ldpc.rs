//! Systematic LDPC codes with an accumulator parity part, and a layered
//! normalized min-sum decoder.
//!
//! The parity-check matrix is `H = [H_u | H_p]` where `H_u` spreads each
//! information bit over `q` distinct checks and `H_p` is dual diagonal
//! (check `r` touches parity bits `r - 1` and `r`). Encoding is then a
//! running XOR, and any `(N, K)` pair can be built directly.
//!
//! Parity-check text format:
//!
//! ```text
//! # smnuc ldpc v1
//! n <N> k <K>
//! row <v> <v> ...     one line per check, variable indices ascending
//! ```

use std::fmt::Write as _;

use rand::Rng;

use crate::rng::{derive_seed, stream_rng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    rows: Vec<Vec<u32>>,
}

/// Result of one decoding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutput {
    pub info: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

const SIGN_BIT: u64 = 1 << 63;

/// Information bits each check should see on average.
pub const CHECK_INFO_DEGREE: f64 = 3.0;

/// Information-bit column weight: enough edges that every check sees about
/// [`CHECK_INFO_DEGREE`] information bits, and never below three.
pub fn info_column_weight(k: usize, n: usize) -> usize {
    let m = (n - k) as f64;
    ((CHECK_INFO_DEGREE * m / k as f64).round() as usize).max(3)
}

impl LdpcCode {
    /// Random construction with balanced check degrees. Information columns
    /// avoid length-4 cycles with each other and with the parity chain where
    /// a random search finds room.
    pub fn construct(n: usize, k: usize, seed: u64) -> Result<Self> {
        Self::construct_with(n, k, info_column_weight(k, n), seed)
    }

    pub fn construct_with(n: usize, k: usize, column_weight: usize, seed: u64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Config(format!(
                "invalid LDPC dimensions n={n} k={k}"
            )));
        }
        let m = n - k;
        let q = column_weight.clamp(1, m);
        let mut rng = stream_rng(derive_seed(seed, "ldpc"), ((n as u64) << 32) | k as u64);
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); m];
        // rows already adjacent to a given row through some information column
        let mut neighbours: Vec<Vec<u32>> = vec![Vec::new(); m];
        let cap = (q * k).div_ceil(m);
        let spacing = (m / (4 * q)).clamp(2, 32);
        let mut chosen: Vec<usize> = Vec::with_capacity(q);
        for col in 0..k {
            chosen.clear();
            let mut tries = 0usize;
            while chosen.len() < q {
                let r = rng.random_range(0..m);
                tries += 1;
                if chosen.contains(&r) {
                    continue;
                }
                let strict = tries < 200 * q;
                let relaxed = tries < 400 * q;
                if relaxed && rows[r].len() >= cap {
                    continue;
                }
                if strict {
                    // A single information bit flips the parity run between
                    // consecutive rows and from its last row to the end, so
                    // rows close together or near the end make light codewords.
                    let light = chosen.iter().any(|&c| c.abs_diff(r) < spacing);
                    let cycle = chosen
                        .iter()
                        .any(|&c| neighbours[r].binary_search(&(c as u32)).is_ok());
                    if light || cycle {
                        continue;
                    }
                }
                chosen.push(r);
            }
            for &r in &chosen {
                rows[r].push(col as u32);
                for &c in &chosen {
                    if c != r {
                        if let Err(pos) = neighbours[r].binary_search(&(c as u32)) {
                            neighbours[r].insert(pos, c as u32);
                        }
                    }
                }
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            if r > 0 {
                row.push((k + r - 1) as u32);
            }
            row.push((k + r) as u32);
            row.sort_unstable();
        }
        Ok(Self { n, k, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `[info | parity]`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(Error::Length {
                expected: self.k,
                got: info.len(),
            });
        }
        let mut cw = Vec::with_capacity(self.n);
        cw.extend(info.iter().map(|b| b & 1));
        let mut acc = 0u8;
        for row in &self.rows {
            let s = row
                .iter()
                .take_while(|&&v| (v as usize) < self.k)
                .fold(0u8, |s, &v| s ^ cw[v as usize]);
            acc ^= s;
            cw.push(acc);
        }
        Ok(cw)
    }

    /// True when every check is satisfied.
    pub fn check(&self, cw: &[u8]) -> bool {
        cw.len() == self.n
            && self
                .rows
                .iter()
                .all(|row| row.iter().fold(0u8, |s, &v| s ^ cw[v as usize]) == 0)
    }

    /// Layered min-sum with extrinsic messages scaled by `scale`.
    ///
    /// Stops as soon as the hard decisions satisfy every check. A zero
    /// posterior LLR is undecided and blocks convergence.
    pub fn decode(&self, llrs: &[f64], max_iters: usize, scale: f64) -> Result<DecodeOutput> {
        if llrs.len() != self.n {
            return Err(Error::Length {
                expected: self.n,
                got: llrs.len(),
            });
        }
        let mut post = llrs.to_vec();
        let mut msgs = vec![0.0f64; self.edges()];
        let mut hard = vec![0u8; self.n];
        let max_deg = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut q = vec![0.0f64; max_deg];
        let mut converged = self.hard_decide(&post, &mut hard);
        let mut iterations = 0;
        while !converged && iterations < max_iters {
            iterations += 1;
            let mut e0 = 0;
            for row in &self.rows {
                let deg = row.len();
                let r_old = &mut msgs[e0..e0 + deg];
                let q = &mut q[..deg];
                let (mut min1, mut min2, mut pos) = (f64::INFINITY, f64::INFINITY, 0);
                let mut sign = 0u64;
                for i in 0..deg {
                    let x = post[row[i] as usize] - r_old[i];
                    q[i] = x;
                    let a = x.abs();
                    sign ^= x.to_bits();
                    // branch-free: input signs and magnitudes are random
                    pos = if a < min1 { i } else { pos };
                    min2 = min2.min(min1.max(a));
                    min1 = min1.min(a);
                }
                let mags = [scale * min1, scale * min2];
                for i in 0..deg {
                    let mag = mags[usize::from(i == pos)];
                    // sign of the product of the other inputs
                    let r = f64::from_bits(mag.to_bits() | ((sign ^ q[i].to_bits()) & SIGN_BIT));
                    r_old[i] = r;
                    post[row[i] as usize] = q[i] + r;
                }
                e0 += deg;
            }
            converged = self.hard_decide(&post, &mut hard);
        }
        Ok(DecodeOutput {
            info: hard[..self.k].to_vec(),
            converged,
            iterations,
        })
    }

    fn hard_decide(&self, post: &[f64], hard: &mut [u8]) -> bool {
        let mut undecided = false;
        for (h, &l) in hard.iter_mut().zip(post) {
            *h = u8::from(l < 0.0);
            undecided |= l == 0.0 || l.is_nan();
        }
        !undecided && self.check(hard)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# smnuc ldpc v1\n");
        let _ = writeln!(out, "n {} k {}", self.n, self.k);
        for row in &self.rows {
            out.push_str("row");
            for v in row {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dims = None;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let f: Vec<&str> = line.split_whitespace().collect();
            match f.first() {
                None => continue,
                Some(s) if s.starts_with('#') => continue,
                Some(&"n") if f.len() == 4 && f[2] == "k" => {
                    let n = f[1].parse().map_err(|_| err("bad n".into()))?;
                    let k = f[3].parse().map_err(|_| err("bad k".into()))?;
                    dims = Some((n, k));
                }
                Some(&"row") => rows.push(
                    f[1..]
                        .iter()
                        .map(|v| v.parse::<u32>().map_err(|_| err(format!("bad index {v}"))))
                        .collect::<Result<Vec<_>>>()?,
                ),
                Some(other) => return Err(err(format!("unexpected entry `{other}`"))),
            }
        }
        let (n, k): (usize, usize) = dims.ok_or(Error::Parse {
            line: 0,
            msg: "missing dimensions".into(),
        })?;
        if rows.len() != n.saturating_sub(k) || rows.iter().flatten().any(|&v| v as usize >= n) {
            return Err(Error::Parse {
                line: 0,
                msg: "rows do not match dimensions".into(),
            });
        }
        Ok(Self { n, k, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::complex_gaussian;

    fn random_info(k: usize, seed: u64) -> Vec<u8> {
        let mut rng = stream_rng(seed, 0);
        (0..k).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn zero_info_gives_zero_codeword() {
        let c = LdpcCode::construct(600, 300, 1).unwrap();
        assert!(c.encode(&vec![0; 300]).unwrap().iter().all(|&b| b == 0));
    }

    #[test]
    fn codewords_satisfy_every_check() {
        for (n, k) in [(600, 300), (1000, 90), (800, 640)] {
            let c = LdpcCode::construct(n, k, 2).unwrap();
            for s in 0..5 {
                let cw = c.encode(&random_info(k, s)).unwrap();
                assert_eq!(cw.len(), n);
                assert_eq!(&cw[..k], &random_info(k, s)[..]);
                assert!(c.check(&cw));
            }
        }
    }

    #[test]
    fn wrong_length_is_rejected() {
        let c = LdpcCode::construct(100, 50, 0).unwrap();
        assert!(matches!(c.encode(&[0; 49]), Err(Error::Length { .. })));
        assert!(c.decode(&[1.0; 99], 10, 0.75).is_err());
    }

    #[test]
    fn strong_correct_llrs_decode_immediately() {
        let c = LdpcCode::construct(1200, 600, 3).unwrap();
        let info = random_info(600, 7);
        let cw = c.encode(&info).unwrap();
        let llrs: Vec<f64> = cw
            .iter()
            .map(|&b| if b == 0 { 1e6 } else { -1e6 })
            .collect();
        let out = c.decode(&llrs, 50, 0.75).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.info, info);
    }

    #[test]
    fn zero_llrs_do_not_converge() {
        let c = LdpcCode::construct(400, 200, 3).unwrap();
        let out = c.decode(&[0.0; 400], 20, 0.75).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn corrects_noise_on_bpsk() {
        // BPSK over AWGN at Eb/N0 around 2.5 dB for a rate-1/2 code
        let (n, k) = (2000, 1000);
        let c = LdpcCode::construct(n, k, 5).unwrap();
        let mut rng = stream_rng(11, 0);
        let sigma2 = 0.28;
        let (mut raw_err, mut dec_err) = (0, 0);
        for t in 0..20 {
            let info = random_info(k, 100 + t);
            let cw = c.encode(&info).unwrap();
            let llrs: Vec<f64> = cw
                .iter()
                .map(|&b| {
                    let x = if b == 0 { 1.0 } else { -1.0 };
                    let y = x + complex_gaussian(&mut rng, 2.0 * sigma2).re;
                    2.0 * y / sigma2
                })
                .collect();
            raw_err += llrs[..k]
                .iter()
                .zip(&info)
                .filter(|(l, &b)| (**l < 0.0) != (b == 1))
                .count();
            let out = c.decode(&llrs, 50, 0.75).unwrap();
            dec_err += out.info.iter().zip(&info).filter(|(a, b)| a != b).count();
        }
        assert!(raw_err > 500, "{raw_err}");
        assert!(dec_err * 50 < raw_err, "raw {raw_err} decoded {dec_err}");
    }

    #[test]
    fn text_roundtrip() {
        let c = LdpcCode::construct(300, 120, 8).unwrap();
        assert_eq!(LdpcCode::from_text(&c.to_text()).unwrap(), c);
        assert!(LdpcCode::from_text("n 10 k 5\nrow 1 2\n").is_err());
    }

    #[test]
    fn checks_have_no_repeated_edges() {
        let c = LdpcCode::construct(2000, 400, 1).unwrap();
        for row in c.rows() {
            assert!(row.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
