use crate::graph::{all_pairs_distances, CommGraph};
use crate::Result;

/// Synchronous min-id flooding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionState {
    pub original_id: Vec<usize>,
    pub current_id: Vec<usize>,
    pub rounds_elapsed: u64,
    pub t_le: u64,
}

impl ElectionState {
    pub fn new(g: &CommGraph, ids: &[usize]) -> Result<Self> {
        let diameter = all_pairs_distances(g)?.diameter();
        Ok(Self {
            original_id: ids.to_vec(),
            current_id: ids.to_vec(),
            rounds_elapsed: 0,
            t_le: diameter as u64 + 1,
        })
    }

    /// One round: every player adopts the smallest id among itself and its
    /// neighbours.
    pub fn step(&mut self, g: &CommGraph) {
        self.current_id = (0..g.m())
            .map(|m| {
                g.neighbors(m)
                    .iter()
                    .map(|&n| self.current_id[n])
                    .fold(self.current_id[m], usize::min)
            })
            .collect();
        self.rounds_elapsed += 1;
    }

    pub fn finished(&self) -> bool {
        self.rounds_elapsed >= self.t_le
    }

    /// The player whose original id every player currently holds, if they
    /// agree.
    pub fn leader(&self) -> Option<usize> {
        let first = *self.current_id.first()?;
        if self.current_id.iter().all(|&c| c == first) {
            self.original_id.iter().position(|&o| o == first)
        } else {
            None
        }
    }
}

/// Runs `D + 1` flooding rounds and returns `(leader, t_le)`.
///
/// `ids` must be distinct.
pub fn elect_leader(g: &CommGraph, ids: &[usize]) -> Result<(usize, u64)> {
    let mut state = ElectionState::new(g, ids)?;
    while !state.finished() {
        state.step(g);
    }
    let leader = state.leader().expect("flooding over a connected graph converges within D rounds");
    Ok((leader, state.t_le))
}
