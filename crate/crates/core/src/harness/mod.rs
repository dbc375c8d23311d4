//! Seeded multi-run experiments, regret accounting and artifacts.

mod config;
mod output;
mod plot;

pub use config::{builtin_matrix, Algorithm, ExperimentConfig, GammaSpec, MatrixSource, Setup};
pub use output::{emit_csv, format_sig, parse_trace_csv, trace_csv, CsvRow};
pub use plot::{emit_plot, render_svg, PlotOptions};

use rayon::prelude::*;

use crate::env::{analyze, GapProfile};
use crate::multiplayer::{FylSystem, GroupSystem, MpRucbSystem, SoloSystem};
use crate::policies::{BasePolicy, Rmed2fhConfig, Rmed2fhPolicy, RucbPolicy};
use crate::Result;

/// Group regret of one round: `sum_m (Δ_{i_m} + Δ_{j_m}) / 2`.
pub fn regret_increment(gaps: &GapProfile, draws: &[(usize, usize)]) -> f64 {
    draws.iter().map(|&(i, j)| gaps.pair_regret(i, j)).sum()
}

/// Up to `points` log-spaced rounds in `[1, horizon]`, strictly increasing
/// and ending at `horizon`.
pub fn log_grid(horizon: u64, points: usize) -> Vec<u64> {
    let horizon = horizon.max(1);
    if points <= 1 {
        return vec![horizon];
    }
    let top = (horizon as f64).ln();
    let mut grid: Vec<u64> = (0..points)
        .map(|i| ((top * i as f64 / (points - 1) as f64).exp().round() as u64).clamp(1, horizon))
        .collect();
    grid.dedup();
    if *grid.last().unwrap() != horizon {
        grid.push(horizon);
    }
    grid
}

/// Cumulative regret of one run at each grid point, plus the optional
/// per-round draws.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub regret: Vec<f64>,
    pub draws: Option<Vec<Vec<(usize, usize)>>>,
    /// `(i, i)` draws made while some `u_ji > 1/2`; message-passing RUCB
    /// only, zero otherwise.
    pub guard_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub grid: Vec<u64>,
    /// `runs[r][g]`: cumulative group regret of run `r` at `grid[g]`.
    pub runs: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Population standard deviation across runs.
    pub std: Vec<f64>,
}

impl RegretTrace {
    pub fn from_runs(grid: Vec<u64>, runs: Vec<Vec<f64>>) -> Self {
        let n = runs.len() as f64;
        let (mut mean, mut std) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for g in 0..grid.len() {
            let m = runs.iter().map(|r| r[g]).sum::<f64>() / n;
            let v = runs.iter().map(|r| (r[g] - m).powi(2)).sum::<f64>() / n;
            mean.push(m);
            std.push(v.sqrt());
        }
        Self { grid, runs, mean, std }
    }

    pub fn final_mean(&self) -> f64 {
        *self.mean.last().unwrap()
    }

    /// Final cumulative regret of every run.
    pub fn finals(&self) -> Vec<f64> {
        self.runs.iter().map(|r| *r.last().unwrap()).collect()
    }
}

fn base_policy(cfg: &ExperimentConfig, k: usize, rmed: bool) -> Box<dyn BasePolicy> {
    if rmed {
        let rc = Rmed2fhConfig {
            alpha: 3.0,
            f_coeff: cfg.rmed_f_coeff,
            f_exponent: cfg.rmed_f_exp,
            horizon: cfg.horizon,
        };
        Box::new(Rmed2fhPolicy::new(k, rc))
    } else {
        Box::new(RucbPolicy::new(k, cfg.alpha))
    }
}

enum System {
    Solo(SoloSystem),
    Fyl(FylSystem),
    Mp(MpRucbSystem),
}

impl System {
    fn as_dyn(&mut self) -> &mut dyn GroupSystem {
        match self {
            System::Solo(s) => s,
            System::Fyl(s) => s,
            System::Mp(s) => s,
        }
    }
}

fn build_system(cfg: &ExperimentConfig, setup: &Setup, seed: u64) -> Result<System> {
    let k = setup.q.k();
    Ok(match cfg.algorithm {
        Algorithm::SpRucb => System::Solo(SoloSystem::new(base_policy(cfg, k, false), seed)),
        Algorithm::SpRmed2fh => System::Solo(SoloSystem::new(base_policy(cfg, k, true), seed)),
        Algorithm::FylRucb | Algorithm::FylRmed2fh => {
            let rmed = cfg.algorithm == Algorithm::FylRmed2fh;
            let policies = (0..setup.graph.m()).map(|_| base_policy(cfg, k, rmed)).collect();
            System::Fyl(FylSystem::new(&setup.graph, policies, seed, cfg.delivery_rule)?)
        }
        Algorithm::MpRucb | Algorithm::MpRucbNoRec => System::Mp(MpRucbSystem::new(
            k,
            cfg.alpha,
            &setup.dist,
            setup.gamma,
            cfg.delivery_rule,
            cfg.algorithm == Algorithm::MpRucb,
            seed,
        )),
    })
}

/// One run with seed `seed`.
pub fn run_single(cfg: &ExperimentConfig, setup: &Setup, seed: u64) -> Result<RunOutput> {
    let gaps = analyze(&setup.q).require_gaps()?.clone();
    let grid = log_grid(cfg.horizon, cfg.grid_points);
    let mut system = build_system(cfg, setup, seed)?;
    let m = setup.graph.m();
    let mut draws = vec![(0, 0); m];
    let mut log = cfg.record_draws.then(|| Vec::with_capacity(cfg.horizon as usize));
    let mut regret = Vec::with_capacity(grid.len());
    let mut total = 0.0;
    let mut next = 0;
    for t in 1..=cfg.horizon {
        system.as_dyn().play_round(t, &setup.q, &mut draws)?;
        total += regret_increment(&gaps, &draws);
        if let Some(log) = log.as_mut() {
            log.push(draws.clone());
        }
        if grid[next] == t {
            regret.push(total);
            next += 1;
        }
    }
    let guard_violations = match &system {
        System::Mp(s) => s.guard_violations(),
        _ => 0,
    };
    Ok(RunOutput {
        regret,
        draws: log,
        guard_violations,
    })
}

/// All runs with their outputs, indexed by run.
pub fn run_all(cfg: &ExperimentConfig) -> Result<(Vec<u64>, Vec<RunOutput>)> {
    let setup = cfg.resolve()?;
    analyze(&setup.q).require_gaps()?;
    let outputs = (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_single(cfg, &setup, cfg.seed.wrapping_add(r as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok((log_grid(cfg.horizon, cfg.grid_points), outputs))
}

/// Runs `cfg.runs` independent seeds (in parallel) and aggregates them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RegretTrace> {
    let (grid, outputs) = run_all(cfg)?;
    Ok(RegretTrace::from_runs(grid, outputs.into_iter().map(|o| o.regret).collect()))
}
