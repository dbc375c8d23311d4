//! RMED2FH: relative minimum empirical divergence, fixed-horizon variant.
//!
//! Phases:
//!
//! 1. Initial exploration: every pair `i < j` is drawn
//!    `max(1, ceil(alpha * lnln T))` times, round-robin.
//! 2. The comparison target `ĵ_l` of each arm is fixed from the initial
//!    estimates: the empirical superior `j` of `l` minimising
//!    `(Δ̂_l + Δ̂_j) / KL(q̂_lj, 1/2)`, where gaps are measured against the
//!    empirical-divergence minimiser.
//! 3. Loops: arms of the current loop list are played in index order as the
//!    first arm `l`. The partner is `l` itself when `l` is the current
//!    divergence minimiser `i*`, otherwise `i*` when
//!    `N_{l,i*} < N_{l,ĵ_l} / lnln T`, otherwise `ĵ_l`. After each duel every
//!    arm with `I_j - I_{i*} <= ln t + f(K)` joins the next loop list.
//!
//! `lnln T` is floored at 1 so short horizons stay well defined.

use std::collections::VecDeque;

use crate::rng::PlayerRng;
use crate::theory::kl_bernoulli;

use super::{BasePolicy, DuelStats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rmed2fhConfig {
    pub alpha: f64,
    pub f_coeff: f64,
    pub f_exponent: f64,
    pub horizon: u64,
}

impl Rmed2fhConfig {
    pub fn new(horizon: u64) -> Self {
        Self {
            alpha: 3.0,
            f_coeff: 0.3,
            f_exponent: 1.01,
            horizon,
        }
    }

    /// Exploration budget `f(K) = c K^e`.
    pub fn budget(&self, k: usize) -> f64 {
        self.f_coeff * (k as f64).powf(self.f_exponent)
    }
}

#[derive(Debug, Clone)]
pub struct Rmed2fhPolicy {
    stats: DuelStats,
    cfg: Rmed2fhConfig,
    loglog: f64,
    pairs: Vec<(usize, usize)>,
    init_draws: usize,
    init_done: usize,
    comparison: Option<Vec<usize>>,
    current: VecDeque<usize>,
    next: Vec<bool>,
    loop_round: Option<u64>,
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v < values[best] { i } else { best })
}

impl Rmed2fhPolicy {
    pub fn new(k: usize, cfg: Rmed2fhConfig) -> Self {
        let loglog = (cfg.horizon.max(1) as f64).ln().ln().max(1.0);
        let per_pair = ((cfg.alpha * loglog).ceil() as usize).max(1);
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        Self {
            stats: DuelStats::new(k),
            cfg,
            loglog,
            init_draws: per_pair * pairs.len(),
            pairs,
            init_done: 0,
            comparison: None,
            current: VecDeque::new(),
            next: vec![false; k],
            loop_round: None,
        }
    }

    pub fn config(&self) -> &Rmed2fhConfig {
        &self.cfg
    }

    /// Length of the initial exploration phase in rounds.
    pub fn initial_phase_len(&self) -> usize {
        self.init_draws
    }

    pub fn divergences(&self) -> Vec<f64> {
        (0..self.stats.k()).map(|i| self.stats.empirical_divergence(i)).collect()
    }

    fn comparison_targets(&self) -> Vec<usize> {
        let k = self.stats.k();
        let leader = argmin(&self.divergences());
        let gap = |i: usize| (self.stats.mean(leader, i) - 0.5).max(0.0);
        (0..k)
            .map(|l| {
                let superiors: Vec<usize> = (0..k).filter(|&j| j != l && self.stats.mean(l, j) < 0.5).collect();
                if superiors.is_empty() {
                    return if l != leader {
                        leader
                    } else {
                        (0..k)
                            .filter(|&j| j != l)
                            .min_by(|&a, &b| self.stats.mean(l, a).total_cmp(&self.stats.mean(l, b)))
                            .unwrap_or(l)
                    };
                }
                let cost = |j: usize| (gap(l) + gap(j)) / kl_bernoulli(self.stats.mean(l, j), 0.5);
                superiors
                    .iter()
                    .copied()
                    .fold(superiors[0], |best, j| if cost(j) < cost(best) { j } else { best })
            })
            .collect()
    }
}

impl BasePolicy for Rmed2fhPolicy {
    fn num_arms(&self) -> usize {
        self.stats.k()
    }

    fn select_pair(&mut self, t: u64, _rng: &mut PlayerRng) -> (usize, usize) {
        if self.init_done < self.init_draws {
            let pair = self.pairs[self.init_done % self.pairs.len()];
            self.init_done += 1;
            return pair;
        }
        if self.comparison.is_none() {
            self.comparison = Some(self.comparison_targets());
            self.current = (0..self.stats.k()).collect();
        }
        let divergences = self.divergences();
        let leader = argmin(&divergences);
        if self.current.is_empty() {
            self.current = (0..self.stats.k()).filter(|&j| self.next[j]).collect();
            self.next.iter_mut().for_each(|n| *n = false);
            if self.current.is_empty() {
                self.current.push_back(leader);
            }
        }
        let l = self.current.pop_front().unwrap();
        self.loop_round = Some(t);
        if l == leader {
            return (l, l);
        }
        let target = self.comparison.as_ref().unwrap()[l];
        let m = if (self.stats.visits(l, leader) as f64) < self.stats.visits(l, target) as f64 / self.loglog {
            leader
        } else {
            target
        };
        (l, m)
    }

    fn cw_candidate(&self, _rng: &mut PlayerRng) -> usize {
        argmin(&self.divergences())
    }

    fn observe(&mut self, i: usize, j: usize, first_won: bool) {
        self.stats.record(i, j, first_won);
        if let Some(t) = self.loop_round.take() {
            let divergences = self.divergences();
            let floor = divergences[argmin(&divergences)];
            let threshold = (t as f64).ln() + self.cfg.budget(self.stats.k());
            for (arm, &d) in divergences.iter().enumerate() {
                if d - floor <= threshold {
                    self.next[arm] = true;
                }
            }
        }
    }

    fn stats(&self) -> &DuelStats {
        &self.stats
    }
}
