//! Plain-text design files.
//!
//! ```text
//! # smnuc design v1
//! order 16
//! n_t 2
//! symbol <I> <Q>        one line per symbol, in index order
//! prescale <I> <Q>      one line per antenna
//! labeling <w0> <w1> ...  label word of each symbol index
//! ```
//!
//! Coordinates are written with 17 significant digits, so every `f64`
//! survives a write/read cycle exactly and rewriting a parsed file
//! reproduces it byte for byte. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Constellation, Labeling, PreScaling};
use crate::{Error, Result};

const HEADER: &str = "# smnuc design v1";

/// A constellation together with the pre-scaling it is used with.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub constellation: Constellation,
    pub pre_scaling: PreScaling,
}

impl Design {
    pub fn n_t(&self) -> usize {
        self.pre_scaling.n_t()
    }
}

/// Serializes a design to the text format.
pub fn write_design(design: &Design) -> String {
    let c = &design.constellation;
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "order {}", c.order());
    let _ = writeln!(out, "n_t {}", design.n_t());
    for s in c.symbols() {
        let _ = writeln!(out, "symbol {:.16e} {:.16e}", s.re, s.im);
    }
    for a in design.pre_scaling.coefficients() {
        let _ = writeln!(out, "prescale {:.16e} {:.16e}", a.re, a.im);
    }
    out.push_str("labeling");
    for w in c.labeling().as_permutation() {
        let _ = write!(out, " {w}");
    }
    out.push('\n');
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_pair(line: usize, rest: &[&str]) -> Result<Complex64> {
    match rest {
        [i, q] => {
            let re = i
                .parse()
                .map_err(|e| parse_err(line, format!("{i}: {e}")))?;
            let im = q
                .parse()
                .map_err(|e| parse_err(line, format!("{q}: {e}")))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(parse_err(line, "expected two coordinates")),
    }
}

/// Parses the text format. Stored coordinates are kept as written; files
/// whose constellation or pre-scaling power is off by more than 1e-9 are
/// rejected.
pub fn read_design(text: &str) -> Result<Design> {
    let mut order = None;
    let mut n_t = None;
    let mut symbols = Vec::new();
    let mut coeffs = Vec::new();
    let mut labels = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(line, format!("{s}: {e}")))
        };
        match fields[0] {
            "order" if fields.len() == 2 => order = Some(parse_usize(fields[1])?),
            "n_t" if fields.len() == 2 => n_t = Some(parse_usize(fields[1])?),
            "symbol" => symbols.push(parse_pair(line, &fields[1..])?),
            "prescale" => coeffs.push(parse_pair(line, &fields[1..])?),
            "labeling" => {
                labels = Some(
                    fields[1..]
                        .iter()
                        .map(|w| {
                            w.parse::<u32>()
                                .map_err(|e| parse_err(line, format!("{w}: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            other => return Err(parse_err(line, format!("unexpected entry `{other}`"))),
        }
    }
    let order = order.ok_or_else(|| parse_err(0, "missing `order`"))?;
    let n_t = n_t.ok_or_else(|| parse_err(0, "missing `n_t`"))?;
    if symbols.len() != order {
        return Err(parse_err(
            0,
            format!("{} symbols for order {order}", symbols.len()),
        ));
    }
    if coeffs.len() != n_t {
        return Err(parse_err(
            0,
            format!("{} coefficients for n_t {n_t}", coeffs.len()),
        ));
    }
    let labeling = Labeling::new(labels.ok_or_else(|| parse_err(0, "missing `labeling`"))?)?;
    Ok(Design {
        constellation: Constellation::from_normalized(symbols, labeling)?,
        pre_scaling: PreScaling::from_normalized(coeffs)?,
    })
}
