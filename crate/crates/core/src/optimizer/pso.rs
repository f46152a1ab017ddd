//! Inertia-weight particle swarm over projected positions.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Search space seen by the swarm.
pub trait Problem: Sync {
    fn dims(&self) -> usize;

    /// Maps a raw position onto the feasible set; `None` if no projection exists.
    fn project(&self, x: &[f64]) -> Option<Vec<f64>>;

    /// Objective to maximize.
    fn evaluate(&self, x: &[f64]) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsoHyperParams {
    pub particles: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Per-coordinate velocity bound.
    pub velocity_clamp: f64,
    pub iterations: usize,
    /// Standard deviation of the Gaussian spread around the start position.
    pub init_sigma: f64,
}

impl Default for PsoHyperParams {
    fn default() -> Self {
        Self {
            particles: 40,
            inertia: 0.72,
            cognitive: 1.49,
            social: 1.49,
            velocity_clamp: 0.5,
            iterations: 150,
            init_sigma: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub value: f64,
    pub best_position: Vec<f64>,
    pub best_value: f64,
}

/// Swarm state plus the records kept across the outer loop.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationState {
    pub particles: Vec<Particle>,
    pub global_best: Vec<f64>,
    pub global_best_value: f64,
    pub iteration: usize,
    /// Global-best value after each step, starting with the initial swarm.
    pub best_trace: Vec<f64>,
    /// Anchor SNR of each outer iteration, `SNR_0` first.
    pub snr_trace: Vec<f64>,
    /// Outer-loop stopping threshold in dB.
    pub xi: f64,
}

impl OptimizationState {
    /// Evaluates `positions` (projected first) and records the best one.
    pub fn new<P: Problem>(problem: &P, positions: Vec<Vec<f64>>, xi: f64) -> Self {
        let particles: Vec<Particle> = positions
            .into_par_iter()
            .map(|x| {
                let (position, value) = match problem.project(&x) {
                    Some(p) => {
                        let v = problem.evaluate(&p);
                        (p, v)
                    }
                    None => (x, f64::NEG_INFINITY),
                };
                Particle {
                    velocity: vec![0.0; position.len()],
                    best_position: position.clone(),
                    best_value: value,
                    position,
                    value,
                }
            })
            .collect();
        let best =
            particles.iter().enumerate().fold(
                0,
                |b, (i, p)| if p.value > particles[b].value { i } else { b },
            );
        Self {
            global_best: particles[best].position.clone(),
            global_best_value: particles[best].value,
            best_trace: vec![particles[best].value],
            particles,
            iteration: 0,
            snr_trace: Vec::new(),
            xi,
        }
    }
}

/// `n` start positions: `center` itself, then Gaussian perturbations of it.
pub fn init_around<R: Rng + ?Sized>(
    center: &[f64],
    n: usize,
    sigma: f64,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            center
                .iter()
                .map(|&c| {
                    if i == 0 {
                        c
                    } else {
                        c + sigma * rng.sample::<f64, _>(StandardNormal)
                    }
                })
                .collect()
        })
        .collect()
}

/// One swarm update: velocity and position move, projection, evaluation,
/// then personal and global bests. The global best never gets worse.
pub fn pso_step<P: Problem, R: Rng + ?Sized>(
    state: &mut OptimizationState,
    problem: &P,
    hp: &PsoHyperParams,
    rng: &mut R,
) {
    let gbest = state.global_best.clone();
    for p in &mut state.particles {
        #[allow(clippy::needless_range_loop)]
        for d in 0..p.position.len() {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let v = hp.inertia * p.velocity[d]
                + hp.cognitive * r1 * (p.best_position[d] - p.position[d])
                + hp.social * r2 * (gbest[d] - p.position[d]);
            p.velocity[d] = v.clamp(-hp.velocity_clamp, hp.velocity_clamp);
            p.position[d] += p.velocity[d];
        }
    }
    state.particles.par_iter_mut().for_each(|p| {
        match problem.project(&p.position) {
            Some(x) => {
                p.position = x;
                p.value = problem.evaluate(&p.position);
            }
            None => p.value = f64::NEG_INFINITY,
        }
        if p.value > p.best_value {
            p.best_value = p.value;
            p.best_position.clone_from(&p.position);
        }
    });
    for p in &state.particles {
        if p.best_value > state.global_best_value {
            state.global_best_value = p.best_value;
            state.global_best.clone_from(&p.best_position);
        }
    }
    state.iteration += 1;
    state.best_trace.push(state.global_best_value);
}

/// Runs `hp.iterations` steps.
pub fn run_pso<P: Problem, R: Rng + ?Sized>(
    state: &mut OptimizationState,
    problem: &P,
    hp: &PsoHyperParams,
    rng: &mut R,
) {
    for _ in 0..hp.iterations {
        pso_step(state, problem, hp, rng);
    }
}
