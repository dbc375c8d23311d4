//! Message-passing RUCB with Condorcet-winner recommendations.
//!
//! Each round has two phases. In the decision phase every player builds its
//! optimistic matrix from its shared win matrix `W̃` (as of the end of the
//! previous round plus nothing else), runs the RUCB rule with its received
//! recommendations, duels, folds its own sample into `W̃` and broadcasts
//! it. In the communication phase every player folds the samples due for it
//! into `W̃` and replaces its recommendation set with the arms some peer
//! exploited, i.e. drew as `(i, i)`.

use crate::env::{sample_duel, PreferenceMatrix};
use crate::graph::DistanceTable;
use crate::netsim::{DeliveryRule, DuelSample, MessageBus, Payload};
use crate::policies::{rucb_decide, DuelStats};
use crate::rng::{keyed_stream, PlayerRng, StreamRole};
use crate::Result;

use super::GroupSystem;

#[derive(Debug, Clone)]
pub struct MpPlayerState {
    shared: DuelStats,
    best: Option<usize>,
    recommended: Vec<usize>,
}

impl MpPlayerState {
    fn new(k: usize) -> Self {
        Self {
            shared: DuelStats::new(k),
            best: None,
            recommended: Vec::new(),
        }
    }

    /// Shared win matrix `W̃`; `visits` gives `Ñ = W̃ + W̃ᵀ`.
    pub fn shared(&self) -> &DuelStats {
        &self.shared
    }

    pub fn best(&self) -> Option<usize> {
        self.best
    }

    /// Arms recommended to this player for the next round, ascending.
    pub fn recommended(&self) -> &[usize] {
        &self.recommended
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrawRecord {
    pub round: u64,
    pub player: usize,
    pub sample: DuelSample,
}

pub struct MpRucbSystem {
    k: usize,
    alpha: f64,
    recommendations: bool,
    states: Vec<MpPlayerState>,
    rngs: Vec<PlayerRng>,
    bus: MessageBus,
    scratch: Vec<f64>,
    guard_violations: u64,
    log: Option<Vec<DrawRecord>>,
}

impl MpRucbSystem {
    pub fn new(
        k: usize,
        alpha: f64,
        dist: &DistanceTable,
        gamma: usize,
        rule: DeliveryRule,
        recommendations: bool,
        seed: u64,
    ) -> Self {
        let m = dist.m();
        Self {
            k,
            alpha,
            recommendations,
            states: (0..m).map(|_| MpPlayerState::new(k)).collect(),
            rngs: (0..m).map(|p| keyed_stream(seed, p, StreamRole::Decision)).collect(),
            bus: MessageBus::with_rule(dist, gamma, rule),
            scratch: vec![0.0; k * k],
            guard_violations: 0,
            log: None,
        }
    }

    /// Keeps a global log of every duel.
    pub fn with_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn state(&self, m: usize) -> &MpPlayerState {
        &self.states[m]
    }

    pub fn log(&self) -> Option<&[DrawRecord]> {
        self.log.as_deref()
    }

    pub fn recommendations_enabled(&self) -> bool {
        self.recommendations
    }

    /// Number of `(i, i)` draws made while some `u_ji` exceeded 1/2.
    /// Always zero for a correct implementation.
    pub fn guard_violations(&self) -> u64 {
        self.guard_violations
    }

    pub fn bus(&self) -> &MessageBus {
        &self.bus
    }
}

impl GroupSystem for MpRucbSystem {
    fn players(&self) -> usize {
        self.states.len()
    }

    fn play_round(&mut self, t: u64, q: &PreferenceMatrix, draws: &mut [(usize, usize)]) -> Result<()> {
        let k = self.k;
        for (p, state) in self.states.iter_mut().enumerate() {
            let rng = &mut self.rngs[p];
            state.shared.ucb_matrix_into(t, self.alpha, &mut self.scratch);
            let d = rucb_decide(&self.scratch, k, &mut state.best, &state.recommended, rng);
            let (i, j) = (d.first, d.second);
            if i == j && (0..k).any(|r| r != i && self.scratch[r * k + i] > 0.5) {
                self.guard_violations += 1;
            }
            let first_won = sample_duel(q, i, j, rng);
            state.shared.record(i, j, first_won);
            let sample = DuelSample {
                first: i,
                second: j,
                first_won,
            };
            self.bus.broadcast(p, Payload::Sample(sample), t);
            if let Some(log) = self.log.as_mut() {
                log.push(DrawRecord {
                    round: t,
                    player: p,
                    sample,
                });
            }
            draws[p] = (i, j);
        }

        for (p, state) in self.states.iter_mut().enumerate() {
            let mut recommended = Vec::new();
            for env in self.bus.collect(p, t)? {
                if let Payload::Sample(s) = env.payload {
                    state.shared.record(s.first, s.second, s.first_won);
                    if self.recommendations && s.first == s.second {
                        recommended.push(s.first);
                    }
                }
            }
            recommended.sort_unstable();
            recommended.dedup();
            state.recommended = recommended;
        }
        Ok(())
    }
}
