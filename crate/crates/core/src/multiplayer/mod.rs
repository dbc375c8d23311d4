//! Multiplayer orchestrators stepped by a synchronous round loop.
//!
//! Every system owns its players' keyed random streams, so a run is fully
//! determined by the seed it was built with.

mod election;
mod fyl;
mod mprucb;

pub use election::{elect_leader, ElectionState};
pub use fyl::{FylSystem, LeaderStep};
pub use mprucb::{DrawRecord, MpPlayerState, MpRucbSystem};

use crate::env::{sample_duel, PreferenceMatrix};
use crate::policies::BasePolicy;
use crate::rng::PlayerStreams;
use crate::Result;

/// A group of players that can be advanced one round at a time.
pub trait GroupSystem: Send {
    fn players(&self) -> usize;

    /// Plays round `t` (starting at 1) against `q` and writes each player's
    /// drawn pair into `draws`.
    fn play_round(&mut self, t: u64, q: &PreferenceMatrix, draws: &mut [(usize, usize)]) -> Result<()>;
}

/// A lone player running a base policy.
pub struct SoloSystem {
    policy: Box<dyn BasePolicy>,
    streams: PlayerStreams,
}

impl SoloSystem {
    pub fn new(policy: Box<dyn BasePolicy>, seed: u64) -> Self {
        Self {
            policy,
            streams: PlayerStreams::new(seed, 0),
        }
    }

    pub fn policy(&self) -> &dyn BasePolicy {
        self.policy.as_ref()
    }
}

impl GroupSystem for SoloSystem {
    fn players(&self) -> usize {
        1
    }

    fn play_round(&mut self, t: u64, q: &PreferenceMatrix, draws: &mut [(usize, usize)]) -> Result<()> {
        let (i, j) = self.policy.select_pair(t, &mut self.streams.decision);
        let won = sample_duel(q, i, j, &mut self.streams.decision);
        self.policy.observe(i, j, won);
        draws[0] = (i, j);
        Ok(())
    }
}
