//! `smnuc`: capacity estimates, constellation optimization, baselines and
//! coded BLER comparisons for spatial-modulation links.
//!
//! Set `SMNUC_WORKERS` to fix the worker count. Results do not depend on it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smnuc::baselines::SmpMode;
use smnuc::capacity::{estimate_bicm_ami, DEFAULT_OPT_SAMPLES, DEFAULT_REPORT_SAMPLES};
use smnuc::channel::SnrPoint;
use smnuc::constellation::{
    build_signal_set, make_apsk_initial, make_initial_prescaling, read_design, write_design,
    Design, SmSignalSet,
};
use smnuc::fec::{mcs_entry, Fec, FecConfig, McsEntry, DEFAULT_CODEWORD_BITS};
use smnuc::harness::{
    compare_schemes, export_results, simulate_bler, write_bler_csv, BlerRow, FadingModel,
    RunManifest, Scheme, StopRule,
};
use smnuc::optimizer::{optimize, AnchorMode, OptimizeConfig, PsoHyperParams, SearchConfig};
use smnuc::rng::configure_workers;
use smnuc::{Error, Result};

const FEC_NOTE: &str = "bundled LDPC (accumulator parity, layered min-sum); not the 5G NR code";

#[derive(Parser)]
#[command(
    name = "smnuc",
    version,
    about = "Spatial-modulation constellation design and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rayleigh BICM-AMI of a design over a list of SNRs, as CSV.
    Capacity(CapacityArgs),
    /// Jointly optimize constellation and pre-scaling.
    Optimize(OptimizeArgs),
    /// Write a baseline design file.
    Baseline(BaselineArgs),
    /// Coded BLER of one scheme over an SNR list.
    Bler(BlerArgs),
    /// Waterfall thresholds and gains of several schemes.
    Compare(CompareArgs),
}

#[derive(Args)]
struct CapacityArgs {
    /// Design file (constellation and pre-scaling).
    #[arg(long)]
    design: PathBuf,
    /// Expected antenna count; must match the design.
    #[arg(long)]
    n_t: Option<usize>,
    /// SNRs in dB, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    snr: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_REPORT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Coded,
    CapacityAnchor,
}

/// Code-rate selection shared by the coded subcommands.
#[derive(Args)]
struct RateArgs {
    /// MCS id from the bundled table.
    #[arg(long, conflicts_with = "rate")]
    mcs: Option<u32>,
    /// Explicit single-antenna code rate R, used with --m.
    #[arg(long)]
    rate: Option<f64>,
}

impl RateArgs {
    fn entry(&self, m: Option<usize>, n_t: usize) -> Result<McsEntry> {
        match (self.mcs, self.rate) {
            (Some(id), _) => {
                let e = mcs_entry(id, n_t)?;
                if m.is_some_and(|m| m != e.order) {
                    return Err(Error::Config(format!("MCS {id} uses M = {}", e.order)));
                }
                Ok(e)
            }
            (None, Some(rate)) => {
                let order = m.ok_or_else(|| Error::Config("--rate needs --m".into()))?;
                Ok(McsEntry {
                    id: 0,
                    order,
                    rate,
                    rate_sm: rate * (order as f64).log2() / ((order * n_t) as f64).log2(),
                    n_t,
                })
            }
            (None, None) => Err(Error::Config("one of --mcs or --rate is required".into())),
        }
    }
}

#[derive(Args)]
struct CodedArgs {
    /// Block errors before a BLER point is final.
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    /// Block cap per BLER point.
    #[arg(long, default_value_t = 100_000)]
    max_blocks: u64,
    /// awgn, per-symbol, per-codeword or block-<n>.
    #[arg(long, default_value = "per-symbol", value_parser = parse_fading)]
    fading: FadingModel,
    /// Target codeword length in bits.
    #[arg(long, default_value_t = DEFAULT_CODEWORD_BITS)]
    codeword_bits: usize,
    /// Seed of the code construction and interleaver.
    #[arg(long, default_value_t = 1)]
    code_seed: u64,
}

impl CodedArgs {
    fn stop(&self) -> StopRule {
        StopRule {
            min_errors: self.min_errors,
            max_blocks: self.max_blocks,
        }
    }

    fn fec_config(&self, entry: &McsEntry) -> Result<FecConfig> {
        FecConfig::ldpc_for_mcs(entry, self.codeword_bits, self.code_seed)
    }

    fn record(&self, m: &mut RunManifest, fec: &FecConfig) {
        m.set("min_errors", self.min_errors)
            .set("max_blocks", self.max_blocks)
            .set("fading", self.fading.name())
            .set("codec", fec.codec.name())
            .set("codec_note", FEC_NOTE)
            .set("code_seed", fec.code_seed)
            .set("interleaver_seed", fec.interleaver_seed)
            .set("n", fec.n)
            .set("k", fec.k)
            .set("max_iters", fec.max_iters)
            .set("min_sum_scale", fec.min_sum_scale);
    }
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n_t: usize,
    #[command(flatten)]
    rate: RateArgs,
    #[arg(long, value_enum, default_value_t = Mode::CapacityAnchor)]
    mode: Mode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    particles: usize,
    #[arg(long, default_value_t = 150)]
    iterations: usize,
    #[arg(long, default_value_t = 0.72)]
    inertia: f64,
    #[arg(long, default_value_t = 1.49)]
    cognitive: f64,
    #[arg(long, default_value_t = 1.49)]
    social: f64,
    #[arg(long, default_value_t = 0.5)]
    velocity_clamp: f64,
    #[arg(long, default_value_t = 0.05)]
    init_sigma: f64,
    /// Outer-loop stop threshold in dB.
    #[arg(long, default_value_t = 0.1)]
    xi: f64,
    #[arg(long, default_value_t = 10)]
    max_outer: usize,
    /// Monte Carlo samples per objective evaluation.
    #[arg(long, default_value_t = DEFAULT_OPT_SAMPLES)]
    samples: usize,
    /// Monte Carlo samples per capacity-anchor evaluation.
    #[arg(long, default_value_t = DEFAULT_OPT_SAMPLES)]
    anchor_samples: usize,
    #[arg(long, default_value_t = 1e-2)]
    bler_target: f64,
    #[command(flatten)]
    coded: CodedArgs,
    /// Output directory for design.txt, trace.csv, pso_trace.csv and manifest.txt.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineKind {
    /// Square QAM, unit pre-scaling.
    Sm,
    /// Square QAM with equally spaced pre-scaling phases.
    SmpNofb,
    /// APSK start point with the initial pre-scaling.
    Initial,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    scheme: BaselineKind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n_t: usize,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BlerArgs {
    #[command(flatten)]
    rate: RateArgs,
    /// Required with --rate.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n_t: usize,
    /// sm, smp-nofb, smp-csi or NAME=DESIGN_FILE.
    #[arg(long)]
    scheme: String,
    /// SNRs in dB, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    snr: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    coded: CodedArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    rate: RateArgs,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n_t: usize,
    /// Comma separated; each sm, smp-nofb, smp-csi or NAME=DESIGN_FILE.
    #[arg(long, value_delimiter = ',', default_value = "sm,smp-nofb,smp-csi")]
    scheme: Vec<String>,
    /// Scheme the gains are measured against.
    #[arg(long, default_value = "sm")]
    reference: String,
    #[arg(long, default_value_t = 1e-2)]
    bler_target: f64,
    /// Lowest SNR of the threshold search, in dB.
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    low: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    high: f64,
    #[arg(long, default_value_t = 1.0)]
    coarse_step: f64,
    #[arg(long, default_value_t = 0.1)]
    grid: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    coded: CodedArgs,
    #[arg(long)]
    out: PathBuf,
}

fn parse_fading(s: &str) -> std::result::Result<FadingModel, String> {
    FadingModel::parse(s).ok_or_else(|| format!("unknown fading model `{s}`"))
}

fn load_design(path: &Path) -> Result<(Design, String)> {
    let text = fs::read_to_string(path)?;
    Ok((read_design(&text)?, text))
}

fn design_of(set: &SmSignalSet) -> Design {
    Design {
        constellation: set.constellation().clone(),
        pre_scaling: set.pre_scaling().clone(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Builds a scheme from `sm`, `smp-nofb`, `smp-csi` or `NAME=FILE`.
fn parse_scheme(spec: &str, m: usize, n_t: usize, manifest: &mut RunManifest) -> Result<Scheme> {
    match spec {
        "sm" => Scheme::conventional(m, n_t),
        "smp-nofb" => Scheme::smp(m, n_t, SmpMode::NoFeedback),
        "smp-csi" => Scheme::smp(m, n_t, SmpMode::PerfectCsi),
        _ => {
            let (name, path) = spec
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("unknown scheme `{spec}`")))?;
            let (d, text) = load_design(Path::new(path))?;
            manifest.add_artifact(name, text.as_bytes());
            if d.constellation.order() != m || d.pre_scaling.n_t() != n_t {
                return Err(Error::Dimension(format!(
                    "design {path} is M={} N_t={}, expected M={m} N_t={n_t}",
                    d.constellation.order(),
                    d.pre_scaling.n_t()
                )));
            }
            Ok(Scheme::fixed(
                name,
                build_signal_set(&d.constellation, &d.pre_scaling, n_t)?,
            ))
        }
    }
}

fn capacity(a: &CapacityArgs) -> Result<()> {
    let (d, _) = load_design(&a.design)?;
    let n_t = d.pre_scaling.n_t();
    if a.n_t.is_some_and(|n| n != n_t) {
        return Err(Error::Dimension(format!("design has N_t = {n_t}")));
    }
    let set = build_signal_set(&d.constellation, &d.pre_scaling, n_t)?;
    let mut csv = String::from("snr_db,ami,std_error,n_samples\n");
    for &db in &a.snr {
        let e = estimate_bicm_ami(&set, SnrPoint::db(db), a.samples, a.seed)?;
        csv.push_str(&format!(
            "{db},{},{},{}\n",
            e.value, e.std_error, e.n_samples
        ));
    }
    emit(a.out.as_deref(), &csv)
}

fn run_optimize(a: &OptimizeArgs, workers: usize) -> Result<()> {
    let entry = a.rate.entry(Some(a.m), a.n_t)?;
    let mut manifest = RunManifest::new("optimize");
    let anchor = match a.mode {
        Mode::CapacityAnchor => AnchorMode::CapacityAnchor {
            rate_sm: entry.rate_sm,
            n_samples: a.anchor_samples,
            range_db: (-20.0, 50.0),
            tol_db: 0.01,
        },
        Mode::Coded => {
            let fec = a.coded.fec_config(&entry)?;
            a.coded.record(&mut manifest, &fec);
            AnchorMode::Coded {
                fec,
                search: SearchConfig {
                    stop: a.coded.stop(),
                    fading: a.coded.fading,
                    seed: a.seed,
                    ..SearchConfig::default()
                },
                bler_target: a.bler_target,
            }
        }
    };
    let cfg = OptimizeConfig {
        pso: PsoHyperParams {
            particles: a.particles,
            inertia: a.inertia,
            cognitive: a.cognitive,
            social: a.social,
            velocity_clamp: a.velocity_clamp,
            iterations: a.iterations,
            init_sigma: a.init_sigma,
        },
        xi: a.xi,
        max_outer: a.max_outer,
        objective_samples: a.samples,
        seed: a.seed,
        anchor,
    };
    let initial = build_signal_set(
        &make_apsk_initial(a.m)?,
        &make_initial_prescaling(a.m, a.n_t)?,
        a.n_t,
    )?;
    let result = optimize(&initial, &cfg)?;

    let initial_ami = estimate_bicm_ami(
        &initial,
        SnrPoint::db(result.initial_snr_db()),
        a.samples,
        a.seed,
    )?;
    let mut trace = String::from("iteration,global_best_ami,snr_db,accepted\n");
    trace.push_str(&format!(
        "0,{},{},true\n",
        initial_ami.value,
        result.initial_snr_db()
    ));
    for o in &result.outer {
        trace.push_str(&format!(
            "{},{},{},{}\n",
            o.iteration, o.best_ami, o.snr_db, o.accepted
        ));
    }
    let mut pso = String::from("outer,iteration,global_best_ami\n");
    for (i, t) in result.pso_traces.iter().enumerate() {
        for (j, v) in t.iter().enumerate() {
            pso.push_str(&format!("{},{j},{v}\n", i + 1));
        }
    }
    let design = write_design(&design_of(&result.set));

    manifest
        .set("m", a.m)
        .set("n_t", a.n_t)
        .set("mcs", entry.id)
        .set("rate", entry.rate)
        .set("rate_sm", entry.rate_sm)
        .set("mode", cfg.anchor.name())
        .set("seed", a.seed)
        .set("workers", workers)
        .set("particles", a.particles)
        .set("iterations", a.iterations)
        .set("inertia", a.inertia)
        .set("cognitive", a.cognitive)
        .set("social", a.social)
        .set("velocity_clamp", a.velocity_clamp)
        .set("init_sigma", a.init_sigma)
        .set("xi", a.xi)
        .set("max_outer", a.max_outer)
        .set("objective_samples", a.samples)
        .set("anchor_samples", a.anchor_samples)
        .set("bler_target", a.bler_target)
        .set("stop_reason", format!("{:?}", result.stop_reason));
    manifest.add_artifact("design.txt", design.as_bytes());

    fs::create_dir_all(&a.out)?;
    fs::write(a.out.join("design.txt"), &design)?;
    fs::write(a.out.join("trace.csv"), trace)?;
    fs::write(a.out.join("pso_trace.csv"), pso)?;
    fs::write(a.out.join("manifest.txt"), manifest.to_text())?;
    eprintln!(
        "threshold {:.2} dB -> {:.2} dB ({:?})",
        result.initial_snr_db(),
        result.final_snr_db(),
        result.stop_reason
    );
    Ok(())
}

fn baseline(a: &BaselineArgs) -> Result<()> {
    let design = match a.scheme {
        BaselineKind::Sm => design_of(Scheme::conventional(a.m, a.n_t)?.set()),
        BaselineKind::SmpNofb => design_of(Scheme::smp(a.m, a.n_t, SmpMode::NoFeedback)?.set()),
        BaselineKind::Initial => Design {
            constellation: make_apsk_initial(a.m)?,
            pre_scaling: make_initial_prescaling(a.m, a.n_t)?,
        },
    };
    // validates N_t for the QAM baselines too
    build_signal_set(&design.constellation, &design.pre_scaling, a.n_t)?;
    emit(a.out.as_deref(), &write_design(&design))
}

fn coded_setup(
    rate: &RateArgs,
    m: Option<usize>,
    n_t: usize,
    coded: &CodedArgs,
    manifest: &mut RunManifest,
) -> Result<(McsEntry, Fec)> {
    let entry = rate.entry(m, n_t)?;
    let cfg = coded.fec_config(&entry)?;
    coded.record(manifest, &cfg);
    manifest
        .set("mcs", entry.id)
        .set("m", entry.order)
        .set("n_t", n_t)
        .set("rate", entry.rate)
        .set("rate_sm", entry.rate_sm);
    Ok((entry, cfg.build()?))
}

fn bler(a: &BlerArgs, workers: usize) -> Result<()> {
    let mut manifest = RunManifest::new("bler");
    let (entry, fec) = coded_setup(&a.rate, a.m, a.n_t, &a.coded, &mut manifest)?;
    let scheme = parse_scheme(&a.scheme, entry.order, a.n_t, &mut manifest)?;
    manifest
        .set("scheme", &scheme.id)
        .set("seed", a.seed)
        .set("workers", workers)
        .set("snr_db", join(&a.snr));
    let mcs = (a.rate.mcs.is_some()).then_some(entry.id);
    let rows = a
        .snr
        .iter()
        .map(|&db| {
            let mut r = simulate_bler(
                &scheme,
                &fec,
                SnrPoint::db(db),
                a.coded.fading,
                a.coded.stop(),
                a.seed,
            )?;
            r.mcs = mcs;
            Ok(r)
        })
        .collect::<Result<Vec<BlerRow>>>()?;
    export_results(&rows, &manifest, &a.out)?;
    print!("{}", write_bler_csv(&rows));
    Ok(())
}

fn compare(a: &CompareArgs, workers: usize) -> Result<()> {
    let mut manifest = RunManifest::new("compare");
    let (entry, fec) = coded_setup(&a.rate, a.m, a.n_t, &a.coded, &mut manifest)?;
    let schemes = a
        .scheme
        .iter()
        .map(|s| parse_scheme(s, entry.order, a.n_t, &mut manifest))
        .collect::<Result<Vec<_>>>()?;
    let grid = SearchConfig {
        low_db: a.low,
        high_db: a.high,
        coarse_step_db: a.coarse_step,
        grid_db: a.grid,
        stop: a.coded.stop(),
        fading: a.coded.fading,
        seed: a.seed,
    };
    manifest
        .set("schemes", a.scheme.join(" "))
        .set("reference", &a.reference)
        .set("bler_target", a.bler_target)
        .set("low_db", a.low)
        .set("high_db", a.high)
        .set("coarse_step_db", a.coarse_step)
        .set("grid_db", a.grid)
        .set("seed", a.seed)
        .set("workers", workers);
    let mcs = a.rate.mcs.map(|_| &entry);
    let table = compare_schemes(mcs, &schemes, &a.reference, &fec, a.bler_target, &grid)?;
    let mut summary = String::from("scheme,snr_db,gain_db\n");
    for r in &table.rows {
        summary.push_str(&format!("{},{},{}\n", r.scheme, r.snr_db, r.gain_db));
    }
    let probes: Vec<BlerRow> = table
        .rows
        .iter()
        .flat_map(|r| r.waterfall.probes.clone())
        .collect();
    export_results(&probes, &manifest, &a.out)?;
    fs::write(a.out.join("compare.csv"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<()> {
    let workers = configure_workers();
    match &cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Optimize(a) => run_optimize(a, workers),
        Command::Baseline(a) => baseline(a),
        Command::Bler(a) => bler(a, workers),
        Command::Compare(a) => compare(a, workers),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
