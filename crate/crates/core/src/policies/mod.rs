//! Single-player dueling-bandit base algorithms.
//!
//! Every base algorithm exposes a pair to draw, a Condorcet-winner candidate
//! and an update hook through [`BasePolicy`]; multiplayer wrappers never look
//! past that interface.

mod rmed;
mod rucb;

use crate::rng::PlayerRng;
use crate::theory::kl_bernoulli;

pub use rmed::{Rmed2fhConfig, Rmed2fhPolicy};
pub use rucb::{rucb_decide, RucbDecision, RucbPolicy};

/// A single-player dueling bandit algorithm.
pub trait BasePolicy: Send {
    fn num_arms(&self) -> usize;

    /// Pair to draw at round `t` (1-based).
    fn select_pair(&mut self, t: u64, rng: &mut PlayerRng) -> (usize, usize);

    /// Current Condorcet-winner estimate; always a valid arm.
    fn cw_candidate(&self, rng: &mut PlayerRng) -> usize;

    /// Feeds back the outcome of the duel `(i, j)`; `first_won` is `true`
    /// when `i` won.
    fn observe(&mut self, i: usize, j: usize, first_won: bool);

    fn stats(&self) -> &DuelStats;
}

/// `x / 0 = 1` quotient.
#[inline]
fn ratio(x: f64, n: f64) -> f64 {
    if n == 0.0 {
        1.0
    } else {
        x / n
    }
}

/// Optimistic index `w/n + sqrt(alpha ln t / n)` with every `x/0` read as 1
/// (so an unvisited pair scores 2).
#[inline]
pub fn ucb_index(wins: u64, visits: u64, t: u64, alpha: f64) -> f64 {
    ucb_from_log(wins, visits, alpha * (t as f64).ln())
}

#[inline]
fn ucb_from_log(wins: u64, visits: u64, alpha_log_t: f64) -> f64 {
    let n = visits as f64;
    ratio(wins as f64, n) + ratio(alpha_log_t, n).sqrt()
}

/// Pairwise win counts; `wins[i][j]` is the number of duels `i` won
/// against `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuelStats {
    k: usize,
    wins: Vec<u64>,
}

impl DuelStats {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            wins: vec![0; k * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn wins(&self, i: usize, j: usize) -> u64 {
        self.wins[i * self.k + j]
    }

    #[inline]
    pub fn visits(&self, i: usize, j: usize) -> u64 {
        self.wins(i, j) + self.wins(j, i)
    }

    /// Empirical `q_ij` with the `x/0 = 1` convention.
    #[inline]
    pub fn mean(&self, i: usize, j: usize) -> f64 {
        ratio(self.wins(i, j) as f64, self.visits(i, j) as f64)
    }

    #[inline]
    pub fn record(&mut self, i: usize, j: usize, first_won: bool) {
        let (w, l) = if first_won { (i, j) } else { (j, i) };
        self.wins[w * self.k + l] += 1;
    }

    pub fn total(&self) -> u64 {
        self.wins.iter().sum()
    }

    /// Row-major win matrix.
    pub fn as_slice(&self) -> &[u64] {
        &self.wins
    }

    /// Optimistic matrix `U` at round `t` with `u_ii = 1/2`, row-major.
    pub fn ucb_matrix(&self, t: u64, alpha: f64) -> Vec<f64> {
        let mut u = vec![0.0; self.k * self.k];
        self.ucb_matrix_into(t, alpha, &mut u);
        u
    }

    pub fn ucb_matrix_into(&self, t: u64, alpha: f64, u: &mut [f64]) {
        let k = self.k;
        let alpha_log_t = alpha * (t as f64).ln();
        for i in 0..k {
            for j in 0..k {
                u[i * k + j] = if i == j {
                    0.5
                } else {
                    ucb_from_log(self.wins(i, j), self.visits(i, j), alpha_log_t)
                };
            }
        }
    }

    /// Empirical divergence `I_i = sum_{j != i, q̂_ij <= 1/2} n_ij KL(q̂_ij, 1/2)`.
    pub fn empirical_divergence(&self, i: usize) -> f64 {
        (0..self.k)
            .filter(|&j| j != i)
            .filter_map(|j| {
                let n = self.visits(i, j);
                let q = self.mean(i, j);
                (n > 0 && q <= 0.5).then(|| n as f64 * kl_bernoulli(q, 0.5))
            })
            .sum()
    }
}
