//! Single-bit-flip Metropolis annealing with a geometric temperature
//! schedule and independent restarts.
//!
//! Every restart derives its RNG from `(seed, restart index)`, so the result
//! is fully deterministic no matter how many worker threads execute the
//! restarts. Restart results are merged by minimum energy with ties broken
//! by the lowest restart index.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qubo::{Assignment, QuboInstance};

/// Annealing schedule and budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    pub sweeps: usize,
    pub restarts: usize,
    pub t_hi: f64,
    pub t_lo: f64,
    pub seed: u64,
}

impl SaParams {
    pub fn new(sweeps: usize, restarts: usize, t_hi: f64, t_lo: f64, seed: u64) -> Result<Self> {
        if sweeps == 0 || restarts == 0 {
            return Err(Error::InvalidSaParams(
                "sweeps and restarts must be >= 1".into(),
            ));
        }
        if !(t_lo > 0.0 && t_hi >= t_lo) {
            return Err(Error::InvalidSaParams(
                "temperatures must satisfy t_hi >= t_lo > 0".into(),
            ));
        }
        Ok(Self {
            sweeps,
            restarts,
            t_hi,
            t_lo,
            seed,
        })
    }

    /// Default schedule for an instance: the high temperature is scaled to
    /// the largest coefficient magnitude (the penalty weight dominates the
    /// range, and the schedule has to cross it), the low end is 0.1.
    pub fn auto(qubo: &QuboInstance, sweeps: usize, restarts: usize, seed: u64) -> Result<Self> {
        let t_hi = (qubo.max_abs_coeff() as f64).max(1.0);
        Self::new(sweeps, restarts, t_hi, 0.1, seed)
    }
}

/// Summary of one restart, including the best assignment it reached so a
/// caller can fall back to runner-up states when the global best fails
/// downstream verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartTrace {
    pub restart: usize,
    pub init_energy: i64,
    pub best_energy: i64,
    pub best: Assignment,
    pub best_sweep: usize,
    pub accepted: u64,
}

#[derive(Debug, Clone)]
pub struct SaResult {
    pub best_energy: i64,
    pub best: Assignment,
    pub best_restart: usize,
    pub traces: Vec<RestartTrace>,
}

impl SaResult {
    /// Restart results ordered by (energy, restart index).
    pub fn ranked_candidates(&self) -> Vec<&RestartTrace> {
        let mut refs: Vec<&RestartTrace> = self.traces.iter().collect();
        refs.sort_by_key(|t| (t.best_energy, t.restart));
        refs
    }
}

fn run_restart(qubo: &QuboInstance, params: &SaParams, restart: usize) -> RestartTrace {
    let n = qubo.num_vars();
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    rng.set_stream(restart as u64);

    let adj = qubo.adjacency();
    let mut current = Assignment::new((0..n).map(|_| rng.gen_range(0..=1u8)).collect());
    let mut energy = qubo.energy(&current).expect("length matches by construction");
    let init_energy = energy;
    let mut best = current.clone();
    let mut best_energy = energy;
    let mut best_sweep = 0usize;
    let mut accepted = 0u64;

    let mut order: Vec<usize> = (0..n).collect();
    let cooling = if params.sweeps > 1 {
        (params.t_lo / params.t_hi).powf(1.0 / (params.sweeps - 1) as f64)
    } else {
        1.0
    };
    let mut temperature = params.t_hi;

    for sweep in 0..params.sweeps {
        order.shuffle(&mut rng);
        for &i in &order {
            let delta = qubo.flip_delta(&current, &adj, i);
            let accept = if delta <= 0 {
                true
            } else {
                rng.gen::<f64>() < (-(delta as f64) / temperature).exp()
            };
            if accept {
                current.flip(i);
                energy += delta;
                accepted += 1;
                if energy < best_energy {
                    best_energy = energy;
                    best = current.clone();
                    best_sweep = sweep;
                }
            }
        }
        temperature *= cooling;
    }

    RestartTrace {
        restart,
        init_energy,
        best_energy,
        best,
        best_sweep,
        accepted,
    }
}

/// Runs `restarts` independent annealing chains (in parallel) and returns
/// the best assignment found, never worse than the best initial state.
pub fn solve_sa(qubo: &QuboInstance, params: &SaParams) -> Result<SaResult> {
    if qubo.num_vars() == 0 {
        return Err(Error::InvalidSaParams("instance has no variables".into()));
    }
    SaParams::new(params.sweeps, params.restarts, params.t_hi, params.t_lo, params.seed)?;

    let mut traces: Vec<RestartTrace> = (0..params.restarts)
        .into_par_iter()
        .map(|r| run_restart(qubo, params, r))
        .collect();
    traces.sort_by_key(|t| t.restart);

    let winner = traces
        .iter()
        .min_by_key(|t| (t.best_energy, t.restart))
        .expect("restarts >= 1");
    let (best_energy, best, best_restart) =
        (winner.best_energy, winner.best.clone(), winner.restart);

    Ok(SaResult {
        best_energy,
        best,
        best_restart,
        traces,
    })
}
