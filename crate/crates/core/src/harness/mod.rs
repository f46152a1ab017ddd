//! End-to-end BLER simulation, scheme comparison and result export.

mod bler;
mod compare;
mod export;
mod manifest;
mod scheme;

pub use bler::{simulate_bler, BlerRow, FadingModel, StopRule};
pub use compare::{compare_schemes, ComparisonRow, ComparisonTable};
pub use export::{
    export_results, parse_bler_csv, write_bler_csv, write_plot_data, BLER_CSV_HEADER,
};
pub use manifest::{sha256_hex, RunManifest};
pub use scheme::{Scheme, SchemeKind};
