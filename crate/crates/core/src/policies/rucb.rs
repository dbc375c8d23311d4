use rand::Rng;

use crate::rng::PlayerRng;

use super::{BasePolicy, DuelStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RucbDecision {
    pub first: usize,
    pub second: usize,
}

#[inline]
fn pick(items: &[usize], rng: &mut PlayerRng) -> usize {
    match items.len() {
        1 => items[0],
        n => items[rng.gen_range(0..n)],
    }
}

/// One RUCB decision on the optimistic matrix `u` (row-major, `u_ii = 1/2`).
///
/// `best` is the hypothesized-best set (at most one arm) and is updated in
/// place; `recommended` holds arms announced by peers (empty for a single
/// player). Random draws happen in this order and only when a choice has
/// more than one option: recommendation pick, first arm (uniform over all
/// arms when no champion exists, else uniform over champions), tie-break of
/// the second arm.
pub fn rucb_decide(
    u: &[f64],
    k: usize,
    best: &mut Option<usize>,
    recommended: &[usize],
    rng: &mut PlayerRng,
) -> RucbDecision {
    let champions: Vec<usize> = (0..k)
        .filter(|&i| u[i * k..(i + 1) * k].iter().all(|&x| x >= 0.5))
        .collect();
    if best.is_some_and(|b| !champions.contains(&b)) {
        *best = None;
    }
    if champions.len() == 1 {
        *best = Some(champions[0]);
    }
    let endorsed: Vec<usize> = recommended
        .iter()
        .copied()
        .filter(|r| champions.contains(r))
        .collect();
    if !endorsed.is_empty() {
        *best = Some(pick(&endorsed, rng));
    }

    let first = if champions.is_empty() {
        rng.gen_range(0..k)
    } else if let Some(b) = *best {
        b
    } else {
        pick(&champions, rng)
    };

    let column = |j: usize| u[j * k + first];
    let top = (0..k).map(column).fold(f64::NEG_INFINITY, f64::max);
    let rivals: Vec<usize> = (0..k).filter(|&j| j != first && column(j) == top).collect();
    let second = if rivals.is_empty() { first } else { pick(&rivals, rng) };
    RucbDecision { first, second }
}

/// Relative Upper Confidence Bound.
#[derive(Debug, Clone)]
pub struct RucbPolicy {
    stats: DuelStats,
    alpha: f64,
    best: Option<usize>,
    scratch: Vec<f64>,
}

impl RucbPolicy {
    pub fn new(k: usize, alpha: f64) -> Self {
        Self {
            stats: DuelStats::new(k),
            alpha,
            best: None,
            scratch: vec![0.0; k * k],
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Hypothesized best arm.
    pub fn best(&self) -> Option<usize> {
        self.best
    }

    pub fn ucb_matrix(&self, t: u64) -> Vec<f64> {
        self.stats.ucb_matrix(t, self.alpha)
    }
}

impl BasePolicy for RucbPolicy {
    fn num_arms(&self) -> usize {
        self.stats.k()
    }

    fn select_pair(&mut self, t: u64, rng: &mut PlayerRng) -> (usize, usize) {
        let k = self.stats.k();
        self.stats.ucb_matrix_into(t, self.alpha, &mut self.scratch);
        let d = rucb_decide(&self.scratch, k, &mut self.best, &[], rng);
        (d.first, d.second)
    }

    fn cw_candidate(&self, rng: &mut PlayerRng) -> usize {
        match self.best {
            Some(b) => b,
            None => rng.gen_range(0..self.stats.k()),
        }
    }

    fn observe(&mut self, i: usize, j: usize, first_won: bool) {
        self.stats.record(i, j, first_won);
    }

    fn stats(&self) -> &DuelStats {
        &self.stats
    }
}
