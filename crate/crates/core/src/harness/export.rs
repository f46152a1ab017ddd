use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{BlerRow, RunManifest};
use crate::{Error, Result};

/// Column order of BLER CSV files.
pub const BLER_CSV_HEADER: &str = "scheme,mcs,n_t,snr_db,blocks,block_errors,bler,ci_low,ci_high";

pub fn write_bler_csv(rows: &[BlerRow]) -> String {
    let mut out = format!("{BLER_CSV_HEADER}\n");
    for r in rows {
        let mcs = r.mcs.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scheme, mcs, r.n_t, r.snr_db, r.blocks, r.block_errors, r.bler, r.ci_low, r.ci_high
        );
    }
    out
}

pub fn parse_bler_csv(text: &str) -> Result<Vec<BlerRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == BLER_CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "unexpected header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let err = |what: &str| Error::Parse {
                line: i + 1,
                msg: format!("bad {what}"),
            };
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 9 {
                return Err(err("column count"));
            }
            let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(what));
            let int = |s: &str, what: &str| s.parse::<u64>().map_err(|_| err(what));
            Ok(BlerRow {
                scheme: f[0].to_string(),
                mcs: if f[1].is_empty() {
                    None
                } else {
                    Some(int(f[1], "mcs")? as u32)
                },
                n_t: int(f[2], "n_t")? as usize,
                snr_db: num(f[3], "snr_db")?,
                blocks: int(f[4], "blocks")?,
                block_errors: int(f[5], "block_errors")?,
                bler: num(f[6], "bler")?,
                ci_low: num(f[7], "ci_low")?,
                ci_high: num(f[8], "ci_high")?,
            })
        })
        .collect()
}

/// Whitespace-separated `snr_db bler ci_low ci_high` blocks, one per scheme,
/// separated by two blank lines (gnuplot `index` layout).
pub fn write_plot_data(rows: &[BlerRow]) -> String {
    let mut schemes: Vec<&str> = Vec::new();
    for r in rows {
        if !schemes.contains(&r.scheme.as_str()) {
            schemes.push(&r.scheme);
        }
    }
    let mut out = String::new();
    for (i, s) in schemes.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# scheme {s}\n# snr_db bler ci_low ci_high");
        let mut pts: Vec<&BlerRow> = rows.iter().filter(|r| r.scheme == *s).collect();
        pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        for r in pts {
            let _ = writeln!(out, "{} {} {} {}", r.snr_db, r.bler, r.ci_low, r.ci_high);
        }
    }
    out
}

/// Writes `bler.csv`, `bler_plot.dat` and `manifest.txt` into `dir`.
pub fn export_results(
    rows: &[BlerRow],
    manifest: &RunManifest,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = [
        ("bler.csv", write_bler_csv(rows)),
        ("bler_plot.dat", write_plot_data(rows)),
        ("manifest.txt", manifest.to_text()),
    ];
    files
        .into_iter()
        .map(|(name, body)| {
            let p = dir.join(name);
            fs::write(&p, body)?;
            Ok(p)
        })
        .collect()
}
