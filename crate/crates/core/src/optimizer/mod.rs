//! Joint constellation and pre-scaling optimization.
//!
//! The outer loop anchors the operating SNR at the waterfall threshold of
//! the current best design, maximizes BICM-AMI at that SNR with a particle
//! swarm, re-measures the threshold and repeats until it improves by no
//! more than `xi` dB. The threshold is either measured with the coded link
//! ([`AnchorMode::Coded`]) or taken as the SNR where BICM-AMI reaches the
//! code rate's information content ([`AnchorMode::CapacityAnchor`]).

mod position;
mod pso;
mod waterfall;

pub use position::{project_feasible, ParticleLayout};
pub use pso::{
    init_around, pso_step, run_pso, OptimizationState, Particle, Problem, PsoHyperParams,
};
pub use waterfall::{
    find_threshold, find_waterfall_snr, find_waterfall_snr_for, SearchConfig, WaterfallResult,
};

use crate::capacity::{estimate_bicm_ami, snr_for_ami, DEFAULT_OPT_SAMPLES};
use crate::channel::SnrPoint;
use crate::constellation::SmSignalSet;
use crate::fec::FecConfig;
use crate::rng::{derive_seed, stream_rng};
use crate::{Error, Result};

/// BICM-AMI of the decoded position at a fixed SNR and random stream.
pub struct AmiObjective {
    pub layout: ParticleLayout,
    pub snr: SnrPoint,
    pub n_samples: usize,
    pub seed: u64,
}

impl Problem for AmiObjective {
    fn dims(&self) -> usize {
        self.layout.dims()
    }

    fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        project_feasible(&self.layout, x).ok()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.layout
            .signal_set(x)
            .and_then(|set| estimate_bicm_ami(&set, self.snr, self.n_samples, self.seed))
            .map_or(f64::NEG_INFINITY, |e| e.value)
    }
}

/// How the outer loop measures the operating threshold.
#[derive(Debug, Clone, PartialEq)]
pub enum AnchorMode {
    /// Coded BLER waterfall at `bler_target`.
    Coded {
        fec: FecConfig,
        search: SearchConfig,
        bler_target: f64,
    },
    /// SNR where BICM-AMI equals `rate_sm * log2(M N_t)`.
    CapacityAnchor {
        rate_sm: f64,
        n_samples: usize,
        range_db: (f64, f64),
        tol_db: f64,
    },
}

impl AnchorMode {
    pub fn name(&self) -> &'static str {
        match self {
            AnchorMode::Coded { .. } => "coded",
            AnchorMode::CapacityAnchor { .. } => "capacity-anchor",
        }
    }

    pub fn capacity(rate_sm: f64) -> Self {
        AnchorMode::CapacityAnchor {
            rate_sm,
            n_samples: DEFAULT_OPT_SAMPLES,
            range_db: (-20.0, 50.0),
            tol_db: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    pub pso: PsoHyperParams,
    pub xi: f64,
    pub max_outer: usize,
    pub objective_samples: usize,
    pub seed: u64,
    pub anchor: AnchorMode,
}

impl OptimizeConfig {
    pub fn new(anchor: AnchorMode, seed: u64) -> Self {
        Self {
            pso: PsoHyperParams::default(),
            xi: 0.1,
            max_outer: 10,
            objective_samples: DEFAULT_OPT_SAMPLES,
            seed,
            anchor,
        }
    }
}

/// Why the outer loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `SNR_{i-1} - SNR_i <= xi` with an improving (or equal) iterate.
    Converged,
    /// The new threshold was worse than the anchor; the iterate was discarded.
    NoImprovement,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterRecord {
    pub iteration: usize,
    pub anchor_snr_db: f64,
    pub best_ami: f64,
    pub snr_db: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub set: SmSignalSet,
    /// Swarm of the last inner run; `snr_trace` holds every `SNR_i`.
    pub state: OptimizationState,
    pub outer: Vec<OuterRecord>,
    /// Global-best trace of each inner run.
    pub pso_traces: Vec<Vec<f64>>,
    pub stop_reason: StopReason,
}

impl OptimizationResult {
    pub fn initial_snr_db(&self) -> f64 {
        self.state.snr_trace[0]
    }

    /// Threshold of the returned design.
    pub fn final_snr_db(&self) -> f64 {
        self.state
            .snr_trace
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Measures the anchor SNR of `set` under `mode`.
pub fn anchor_snr(set: &SmSignalSet, mode: &AnchorMode, seed: u64) -> Result<f64> {
    match mode {
        AnchorMode::Coded {
            fec,
            search,
            bler_target,
        } => Ok(find_waterfall_snr(set, &fec.build()?, *bler_target, search)?.snr_db),
        AnchorMode::CapacityAnchor {
            rate_sm,
            n_samples,
            range_db,
            tol_db,
        } => {
            let target = rate_sm * set.bits_per_vector() as f64;
            snr_for_ami(
                set,
                target,
                *n_samples,
                derive_seed(seed, "anchor"),
                *range_db,
                *tol_db,
            )
        }
    }
}

/// Runs the full outer loop from `initial`, which must be quadrant symmetric.
pub fn optimize(initial: &SmSignalSet, cfg: &OptimizeConfig) -> Result<OptimizationResult> {
    let layout = ParticleLayout::new(initial.order(), initial.n_t())?;
    let params = initial
        .constellation()
        .quadrant_params()
        .ok_or_else(|| Error::Config("initial constellation is not quadrant symmetric".into()))?;
    let mut best_x = project_feasible(&layout, &layout.encode(&params, initial.pre_scaling())?)?;
    let mut best_set = layout.signal_set(&best_x)?;
    let mut anchor = anchor_snr(&best_set, &cfg.anchor, cfg.seed)?;
    let mut snr_trace = vec![anchor];
    let mut outer = Vec::new();
    let mut pso_traces = Vec::new();
    let mut rng = stream_rng(derive_seed(cfg.seed, "pso"), 0);
    let mut stop_reason = StopReason::IterationCap;
    let mut last_state = None;

    for iteration in 1..=cfg.max_outer {
        let objective = AmiObjective {
            layout,
            snr: SnrPoint::db(anchor),
            n_samples: cfg.objective_samples,
            seed: derive_seed(cfg.seed, "objective") ^ iteration as u64,
        };
        let starts = init_around(&best_x, cfg.pso.particles, cfg.pso.init_sigma, &mut rng);
        let mut state = OptimizationState::new(&objective, starts, cfg.xi);
        run_pso(&mut state, &objective, &cfg.pso, &mut rng);
        pso_traces.push(state.best_trace.clone());

        let candidate = layout.signal_set(&state.global_best)?;
        let snr = anchor_snr(&candidate, &cfg.anchor, cfg.seed)?;
        snr_trace.push(snr);
        let accepted = snr <= anchor;
        outer.push(OuterRecord {
            iteration,
            anchor_snr_db: anchor,
            best_ami: state.global_best_value,
            snr_db: snr,
            accepted,
        });
        if accepted {
            best_x.clone_from(&state.global_best);
            best_set = candidate;
        }
        last_state = Some(state);
        if !accepted {
            stop_reason = StopReason::NoImprovement;
            break;
        }
        if anchor - snr <= cfg.xi {
            stop_reason = StopReason::Converged;
            break;
        }
        anchor = snr;
    }
    let mut state =
        last_state.ok_or_else(|| Error::Config("max_outer must be at least 1".into()))?;
    state.snr_trace = snr_trace;
    Ok(OptimizationResult {
        set: best_set,
        state,
        outer,
        pso_traces,
        stop_reason,
    })
}
