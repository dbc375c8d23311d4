//! Round-synchronous message transport with hop delays.
//!
//! A broadcast created by `origin` at round `t` reaches every player `m` with
//! `1 <= d(origin, m) <= gamma`, and is collected by `m` during the
//! communication phase of round `t + d(origin, m) - 1`; it first influences
//! decisions at round `t + d(origin, m)`. The origin never receives its own
//! envelope.
//!
//! Delivery is scheduled directly from the distance table instead of
//! forwarding hop by hop; under synchronous rounds the two are equivalent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::DistanceTable;

/// One duel observation `<origin, round, first, second, reward>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DuelSample {
    pub first: usize,
    pub second: usize,
    /// `true` when `first` won.
    pub first_won: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Payload {
    Sample(DuelSample),
    /// Condorcet-winner announcement.
    Announce(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Envelope {
    pub origin: usize,
    pub created_round: u64,
    pub payload: Payload,
}

/// Which arrival/reach rule the bus applies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DeliveryRule {
    /// Reach `d <= gamma`, collected at `created + d - 1`.
    #[default]
    Standard,
    /// Reach `d <= gamma - 1`, collected at `created + d`. Provided only to
    /// compare against the alternative batch reading of the protocol.
    Batch,
}

impl DeliveryRule {
    /// Collection delay in rounds for hop distance `d`, or `None` when the
    /// message never arrives.
    #[inline]
    pub fn delay(self, d: usize, gamma: usize) -> Option<u64> {
        match self {
            DeliveryRule::Standard if d >= 1 && d <= gamma => Some(d as u64 - 1),
            DeliveryRule::Batch if d >= 1 && d < gamma => Some(d as u64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MessageBus {
    gamma: usize,
    rule: DeliveryRule,
    /// Per origin: `(recipient, delay)` for every reachable recipient.
    routes: Vec<Vec<(usize, u64)>>,
    timetable: Vec<BTreeMap<u64, Vec<Envelope>>>,
    last_collected: Vec<Option<u64>>,
    delivered: Vec<u64>,
}

impl MessageBus {
    pub fn new(dist: &DistanceTable, gamma: usize) -> Self {
        Self::with_rule(dist, gamma, DeliveryRule::Standard)
    }

    pub fn with_rule(dist: &DistanceTable, gamma: usize, rule: DeliveryRule) -> Self {
        let m = dist.m();
        let routes = (0..m)
            .map(|o| {
                (0..m)
                    .filter_map(|r| rule.delay(dist.get(o, r), gamma).map(|delay| (r, delay)))
                    .collect()
            })
            .collect();
        Self {
            gamma,
            rule,
            routes,
            timetable: vec![BTreeMap::new(); m],
            last_collected: vec![None; m],
            delivered: vec![0; m],
        }
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn rule(&self) -> DeliveryRule {
        self.rule
    }

    pub fn players(&self) -> usize {
        self.routes.len()
    }

    /// Recipients of `origin` with their collection delay.
    pub fn routes(&self, origin: usize) -> &[(usize, u64)] {
        &self.routes[origin]
    }

    pub fn broadcast(&mut self, origin: usize, payload: Payload, t: u64) {
        debug_assert!(t >= 1);
        let envelope = Envelope {
            origin,
            created_round: t,
            payload,
        };
        for &(recipient, delay) in &self.routes[origin] {
            self.timetable[recipient]
                .entry(t + delay)
                .or_default()
                .push(envelope);
        }
    }

    /// Removes and returns everything due for `recipient` at round `t`,
    /// ordered by origin then creation round.
    pub fn collect(&mut self, recipient: usize, t: u64) -> Result<Vec<Envelope>> {
        if self.last_collected[recipient].is_some_and(|last| t <= last) {
            return Err(Error::DoubleCollect { recipient, round: t });
        }
        self.last_collected[recipient] = Some(t);
        let mut due = self.timetable[recipient].remove(&t).unwrap_or_default();
        due.sort_by_key(|e| (e.origin, e.created_round));
        self.delivered[recipient] += due.len() as u64;
        Ok(due)
    }

    /// Number of envelopes collected so far by `recipient`.
    pub fn delivered_count(&self, recipient: usize) -> u64 {
        self.delivered[recipient]
    }

    /// Envelopes still scheduled for `recipient`.
    pub fn pending(&self, recipient: usize) -> usize {
        self.timetable[recipient].values().map(Vec::len).sum()
    }
}
