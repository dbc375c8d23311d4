//! Follow-Your-Leader black box.
//!
//! Until the election completes (`t <= t_le`) every player runs its own base
//! policy. Afterwards only the leader learns; it announces its Condorcet
//! candidate whenever the candidate changes (and once unconditionally at
//! `t_le + 1`) over a bus whose radius is the graph diameter. Followers
//! exploit the newest announcement they have received, drawing `(i, i)` and
//! discarding the reward.

use crate::env::{sample_duel, PreferenceMatrix};
use crate::graph::{all_pairs_distances, CommGraph};
use crate::netsim::{DeliveryRule, MessageBus, Payload};
use crate::policies::BasePolicy;
use crate::rng::PlayerStreams;
use crate::Result;

use super::{elect_leader, GroupSystem};

/// One leader round after the election: draw, outcome and candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeaderStep {
    pub round: u64,
    pub first: usize,
    pub second: usize,
    pub first_won: bool,
}

pub struct FylSystem {
    policies: Vec<Option<Box<dyn BasePolicy>>>,
    streams: Vec<PlayerStreams>,
    leader: usize,
    t_le: u64,
    exploit: Vec<usize>,
    newest: Vec<u64>,
    announced: Option<usize>,
    bus: MessageBus,
    trace: Option<Vec<LeaderStep>>,
}

impl FylSystem {
    /// `policies[m]` is player `m`'s base policy; player ids are the
    /// identity so player 0 becomes the leader.
    pub fn new(g: &CommGraph, policies: Vec<Box<dyn BasePolicy>>, seed: u64, rule: DeliveryRule) -> Result<Self> {
        let m = g.m();
        assert_eq!(policies.len(), m, "one base policy per player");
        let dist = all_pairs_distances(g)?;
        let ids: Vec<usize> = (0..m).collect();
        let (leader, t_le) = elect_leader(g, &ids)?;
        Ok(Self {
            policies: policies.into_iter().map(Some).collect(),
            streams: (0..m).map(|p| PlayerStreams::new(seed, p)).collect(),
            leader,
            t_le,
            exploit: vec![0; m],
            newest: vec![0; m],
            announced: None,
            bus: MessageBus::with_rule(&dist, dist.diameter(), rule),
            trace: None,
        })
    }

    /// Records every leader draw (all rounds) for inspection.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn leader(&self) -> usize {
        self.leader
    }

    pub fn t_le(&self) -> u64 {
        self.t_le
    }

    pub fn exploit_arm(&self, m: usize) -> usize {
        self.exploit[m]
    }

    pub fn last_announced(&self) -> Option<usize> {
        self.announced
    }

    pub fn leader_policy(&self) -> &dyn BasePolicy {
        self.policies[self.leader].as_deref().expect("leader policy is kept")
    }

    /// Base policy of player `m`, or `None` for a follower after the
    /// election.
    pub fn policy(&self, m: usize) -> Option<&dyn BasePolicy> {
        self.policies[m].as_deref()
    }

    pub fn trace(&self) -> Option<&[LeaderStep]> {
        self.trace.as_deref()
    }

    fn learn(&mut self, m: usize, t: u64, q: &PreferenceMatrix) -> (usize, usize) {
        let policy = self.policies[m].as_mut().expect("learning player keeps its policy");
        let rng = &mut self.streams[m].decision;
        let (i, j) = policy.select_pair(t, rng);
        let won = sample_duel(q, i, j, rng);
        policy.observe(i, j, won);
        if m == self.leader {
            if let Some(trace) = self.trace.as_mut() {
                trace.push(LeaderStep {
                    round: t,
                    first: i,
                    second: j,
                    first_won: won,
                });
            }
        }
        (i, j)
    }
}

impl GroupSystem for FylSystem {
    fn players(&self) -> usize {
        self.policies.len()
    }

    fn play_round(&mut self, t: u64, q: &PreferenceMatrix, draws: &mut [(usize, usize)]) -> Result<()> {
        let m = self.players();
        if t <= self.t_le {
            for p in 0..m {
                draws[p] = self.learn(p, t, q);
            }
            return Ok(());
        }
        if t == self.t_le + 1 {
            for (p, slot) in self.policies.iter_mut().enumerate() {
                if p != self.leader {
                    *slot = None;
                }
            }
        }

        draws[self.leader] = self.learn(self.leader, t, q);
        let cw = {
            let leader = self.leader;
            let policy = self.policies[leader].as_ref().unwrap();
            policy.cw_candidate(&mut self.streams[leader].candidate)
        };
        if t == self.t_le + 1 || self.announced != Some(cw) {
            self.bus.broadcast(self.leader, Payload::Announce(cw), t);
            self.announced = Some(cw);
        }

        for p in (0..m).filter(|&p| p != self.leader) {
            let arm = self.exploit[p];
            // reward is observed but carries no information for a follower
            let _ = sample_duel(q, arm, arm, &mut self.streams[p].decision);
            draws[p] = (arm, arm);
        }

        for p in (0..m).filter(|&p| p != self.leader) {
            for env in self.bus.collect(p, t)? {
                if let Payload::Announce(arm) = env.payload {
                    if env.created_round >= self.newest[p] {
                        self.newest[p] = env.created_round;
                        self.exploit[p] = arm;
                    }
                }
            }
        }
        Ok(())
    }
}
