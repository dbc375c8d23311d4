//! Preference-matrix environments.
//!
//! A [`PreferenceMatrix`] stores only its strict upper triangle; the lower
//! triangle is derived as `1 - q_ij` on access, so `q_ij + q_ji = 1` and
//! `q_ii = 1/2` hold structurally.

mod ballots;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

pub use ballots::{ballots_to_matrix, Ballot, BallotSet};

/// Tolerance applied to antisymmetry and diagonal checks on input data.
pub const INPUT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    k: usize,
    upper: Vec<f64>,
}

impl PreferenceMatrix {
    /// Builds a matrix from its strict upper triangle, row-major
    /// (`(0,1), (0,2), ..., (1,2), ...`).
    pub fn from_upper(k: usize, upper: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSize(format!("need at least 2 arms, got {k}")));
        }
        if upper.len() != k * (k - 1) / 2 {
            return Err(Error::InvalidSize(format!(
                "upper triangle of a {k}x{k} matrix has {} entries, got {}",
                k * (k - 1) / 2,
                upper.len()
            )));
        }
        let m = Self { k, upper };
        for i in 0..k {
            for j in i + 1..k {
                let v = m.get(i, j);
                if !(0.0..=1.0).contains(&v) || v.is_nan() {
                    return Err(Error::Range { i, j, value: v });
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix by evaluating `f(i, j)` for every `i < j`.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut upper = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                upper.push(f(i, j));
            }
        }
        Self::from_upper(k, upper)
    }

    /// Validates a full square matrix and keeps its upper triangle.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::parse(
                    i + 1,
                    format!("expected {k} fields, found {}", row.len()),
                ));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) || v.is_nan() {
                    return Err(Error::Range { i, j, value: v });
                }
            }
        }
        for i in 0..k {
            for j in i..k {
                let deviation = rows[i][j] + rows[j][i] - 1.0;
                if deviation.abs() > INPUT_TOLERANCE {
                    return Err(Error::Asymmetry { i, j, deviation });
                }
            }
        }
        Self::from_fn(k, |i, j| rows[i][j])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * (2 * self.k - i - 1) / 2 + (j - i - 1)
    }

    /// Probability that arm `i` beats arm `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => 0.5,
            Less => self.upper[self.upper_index(i, j)],
            Greater => 1.0 - self.upper[self.upper_index(j, i)],
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|field| {
                    field.trim().parse::<f64>().map_err(|e| {
                        Error::parse(n + 1, format!("bad decimal {:?}: {e}", field.trim()))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(None, "matrix file is empty"));
        }
        Self::from_rows(&rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text)
    }

    /// Renders the full matrix; values use the shortest representation that
    /// parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.k {
            for j in 0..self.k {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.get(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Condorcet winner and per-arm superior sets `O_i = { j : q_ij < 1/2 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondorcetInfo {
    pub cw: Option<usize>,
    pub superiors: Vec<Vec<usize>>,
}

/// Gaps `delta[i] = q_{cw,i} - 1/2` relative to the Condorcet winner.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub cw: usize,
    pub delta: Vec<f64>,
    pub delta_min: f64,
    pub delta_max: f64,
}

impl GapProfile {
    /// Instantaneous regret of drawing the pair `(i, j)`.
    #[inline]
    pub fn pair_regret(&self, i: usize, j: usize) -> f64 {
        0.5 * (self.delta[i] + self.delta[j])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub condorcet: CondorcetInfo,
    pub gaps: Option<GapProfile>,
}

impl Analysis {
    pub fn require_gaps(&self) -> Result<&GapProfile> {
        self.gaps.as_ref().ok_or(Error::NoCondorcetWinner)
    }
}

pub fn analyze(q: &PreferenceMatrix) -> Analysis {
    let k = q.k();
    let superiors: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..k).filter(|&j| q.get(i, j) < 0.5).collect())
        .collect();
    let cw = (0..k).find(|&i| (0..k).all(|j| j == i || q.get(i, j) > 0.5));
    let gaps = cw.map(|cw| {
        let delta: Vec<f64> = (0..k).map(|i| q.get(cw, i) - 0.5).collect();
        let others = || (0..k).filter(move |&i| i != cw).map(|i| delta[i]);
        let delta_min = others().fold(f64::INFINITY, f64::min);
        let delta_max = others().fold(0.0, f64::max);
        GapProfile {
            cw,
            delta,
            delta_min,
            delta_max,
        }
    });
    Analysis {
        condorcet: CondorcetInfo { cw, superiors },
        gaps,
    }
}

/// Draws one duel between `i` and `j`; returns `true` when `i` wins.
///
/// One uniform variate is consumed. The coin is shared between orientations:
/// for the same variate, `sample_duel(q, i, j)` and `sample_duel(q, j, i)`
/// always disagree when `i != j`.
#[inline]
pub fn sample_duel<R: Rng + ?Sized>(q: &PreferenceMatrix, i: usize, j: usize, rng: &mut R) -> bool {
    let u: f64 = rng.gen();
    duel_outcome(q, i, j, u)
}

#[inline]
pub(crate) fn duel_outcome(q: &PreferenceMatrix, i: usize, j: usize, u: f64) -> bool {
    if i <= j {
        u < q.get(i, j)
    } else {
        !(u < q.get(j, i))
    }
}
