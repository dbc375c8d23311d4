//! Ranked-ballot ingestion and pairwise preference construction.
//!
//! Ballot file format:
//!
//! ```text
//! candidates: alice,bob,carol
//! 120: alice>bob>carol
//! 7: carol
//! ```
//!
//! Rankings are strict and may cover any subset of the candidates. Blank
//! lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::PreferenceMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub count: u64,
    /// Candidate indices, most preferred first.
    pub ranking: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallotSet {
    pub candidates: Vec<String>,
    pub ballots: Vec<Ballot>,
}

impl BallotSet {
    pub fn new(candidates: Vec<String>, ballots: Vec<Ballot>) -> Result<Self> {
        let n = candidates.len();
        for (b, ballot) in ballots.iter().enumerate() {
            if ballot.count == 0 {
                return Err(Error::parse(None, format!("ballot {b} has multiplicity 0")));
            }
            let mut seen = vec![false; n];
            for &c in &ballot.ranking {
                if c >= n {
                    return Err(Error::parse(None, format!("ballot {b} ranks unknown candidate {c}")));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::parse(
                        None,
                        format!("ballot {b} ranks {} twice", candidates[c]),
                    ));
                }
            }
        }
        Ok(Self { candidates, ballots })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut candidates: Option<Vec<String>> = None;
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut ballots = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(names) = &candidates else {
                let rest = line
                    .strip_prefix("candidates:")
                    .ok_or_else(|| Error::parse(line_no, "expected \"candidates:\" header"))?;
                let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                for (i, name) in names.iter().enumerate() {
                    if name.is_empty() {
                        return Err(Error::parse(line_no, "empty candidate name"));
                    }
                    if index.insert(name.clone(), i).is_some() {
                        return Err(Error::parse(line_no, format!("duplicate candidate {name}")));
                    }
                }
                candidates = Some(names);
                continue;
            };
            let (count, order) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, "expected \"count: a>b>...\""))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|e| Error::parse(line_no, format!("bad count: {e}")))?;
            if count == 0 {
                return Err(Error::parse(line_no, "multiplicity must be at least 1"));
            }
            let mut ranking = Vec::new();
            let order = order.trim();
            if !order.is_empty() {
                for name in order.split('>') {
                    let name = name.trim();
                    let &c = index
                        .get(name)
                        .ok_or_else(|| Error::parse(line_no, format!("unknown candidate {name:?}")))?;
                    if ranking.contains(&c) {
                        return Err(Error::parse(line_no, format!("{name} ranked twice")));
                    }
                    ranking.push(c);
                }
            }
            debug_assert!(names.len() == index.len());
            ballots.push(Ballot { count, ranking });
        }
        let candidates = candidates.ok_or_else(|| Error::parse(None, "missing candidates header"))?;
        Self::new(candidates, ballots)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("candidates: {}\n", self.candidates.join(","));
        for b in &self.ballots {
            let names: Vec<&str> = b.ranking.iter().map(|&c| self.candidates[c].as_str()).collect();
            writeln!(out, "{}: {}", b.count, names.join(">")).unwrap();
        }
        out
    }

    /// Converts a PrefLib strict-order file (`.soc` / `.soi`).
    ///
    /// Both the current layout (`# ALTERNATIVE NAME i: name` headers followed
    /// by `count: a,b,c` rows) and the legacy layout (candidate count, `i,name`
    /// rows, a `voters,sum,unique` row, then `count,a,b,c` rows) are accepted.
    /// Alternatives are numbered from 1 in both.
    pub fn from_preflib(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let modern = lines.iter().any(|(_, l)| l.starts_with('#'));
        let mut names: Vec<(usize, String)> = Vec::new();
        let mut rows: Vec<(usize, u64, &str)> = Vec::new();
        if modern {
            for &(n, line) in &lines {
                if let Some(meta) = line.strip_prefix('#') {
                    if let Some(rest) = meta.trim().strip_prefix("ALTERNATIVE NAME") {
                        let (id, name) = rest
                            .split_once(':')
                            .ok_or_else(|| Error::parse(n, "malformed ALTERNATIVE NAME"))?;
                        let id: usize = id
                            .trim()
                            .parse()
                            .map_err(|e| Error::parse(n, format!("bad alternative id: {e}")))?;
                        names.push((id, name.trim().to_string()));
                    }
                    continue;
                }
                let (count, order) = line
                    .split_once(':')
                    .ok_or_else(|| Error::parse(n, "expected \"count: order\""))?;
                let count = count
                    .trim()
                    .parse()
                    .map_err(|e| Error::parse(n, format!("bad count: {e}")))?;
                rows.push((n, count, order));
            }
        } else {
            let mut it = lines.iter();
            let &(n, first) = it.next().ok_or_else(|| Error::parse(None, "empty PrefLib file"))?;
            let k: usize = first
                .parse()
                .map_err(|e| Error::parse(n, format!("bad candidate count: {e}")))?;
            for _ in 0..k {
                let &(n, line) = it.next().ok_or_else(|| Error::parse(None, "truncated candidate list"))?;
                let (id, name) = line
                    .split_once(',')
                    .ok_or_else(|| Error::parse(n, "expected \"id,name\""))?;
                let id = id
                    .trim()
                    .parse()
                    .map_err(|e| Error::parse(n, format!("bad alternative id: {e}")))?;
                names.push((id, name.trim().to_string()));
            }
            it.next().ok_or_else(|| Error::parse(None, "missing voter summary row"))?;
            for &(n, line) in it {
                let (count, order) = line
                    .split_once(',')
                    .ok_or_else(|| Error::parse(n, "expected \"count,order\""))?;
                let count = count
                    .trim()
                    .parse()
                    .map_err(|e| Error::parse(n, format!("bad count: {e}")))?;
                rows.push((n, count, order));
            }
        }
        names.sort_by_key(|(id, _)| *id);
        let id_to_index: HashMap<usize, usize> =
            names.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let mut ballots = Vec::with_capacity(rows.len());
        for (n, count, order) in rows {
            if order.contains('{') {
                return Err(Error::parse(n, "ties are not supported in strict-order input"));
            }
            let mut ranking = Vec::new();
            for field in order.split(',').map(str::trim).filter(|f| !f.is_empty()) {
                let id: usize = field
                    .parse()
                    .map_err(|e| Error::parse(n, format!("bad alternative {field:?}: {e}")))?;
                let &c = id_to_index
                    .get(&id)
                    .ok_or_else(|| Error::parse(n, format!("unknown alternative {id}")))?;
                ranking.push(c);
            }
            if count > 0 {
                ballots.push(Ballot { count, ranking });
            }
        }
        Self::new(names.into_iter().map(|(_, name)| name).collect(), ballots)
    }
}

/// Weighted pairwise tallies: `wins[i][j]` counts ballots ranking `i` above
/// `j` (a ranked candidate beats an unranked one).
fn pairwise_wins(set: &BallotSet) -> Vec<Vec<u64>> {
    let n = set.candidates.len();
    let mut wins = vec![vec![0u64; n]; n];
    let mut ranked = vec![false; n];
    for ballot in &set.ballots {
        ranked.iter_mut().for_each(|r| *r = false);
        for (pos, &a) in ballot.ranking.iter().enumerate() {
            for &b in &ballot.ranking[pos + 1..] {
                wins[a][b] += ballot.count;
            }
            ranked[a] = true;
        }
        for &a in &ballot.ranking {
            for b in 0..n {
                if !ranked[b] {
                    wins[a][b] += ballot.count;
                }
            }
        }
    }
    wins
}

/// Builds `q_ij = wins_ij / (wins_ij + wins_ji)` from ranked ballots.
///
/// Every ballot that ranks at least one of `i`, `j` decides that pair, so the
/// denominator is exactly the eligible weight. Pairs no ballot decides get
/// `1/2`. With `top_n`, only the `top_n` candidates with the largest total
/// pairwise win count are kept (lower index wins ties), in their original
/// order. Returns the matrix and the retained candidate names.
pub fn ballots_to_matrix(set: &BallotSet, top_n: Option<usize>) -> Result<(PreferenceMatrix, Vec<String>)> {
    if set.ballots.is_empty() {
        return Err(Error::EmptyBallots);
    }
    let n = set.candidates.len();
    let wins = pairwise_wins(set);
    let keep: Vec<usize> = match top_n {
        None => (0..n).collect(),
        Some(top) => {
            if top > n {
                return Err(Error::InvalidSize(format!(
                    "top {top} requested from {n} candidates"
                )));
            }
            let mut order: Vec<usize> = (0..n).collect();
            let totals: Vec<u64> = wins.iter().map(|row| row.iter().sum()).collect();
            order.sort_by(|&a, &b| totals[b].cmp(&totals[a]).then(a.cmp(&b)));
            order.truncate(top);
            order.sort_unstable();
            order
        }
    };
    let matrix = PreferenceMatrix::from_fn(keep.len(), |a, b| {
        let (i, j) = (keep[a], keep[b]);
        let decided = wins[i][j] + wins[j][i];
        if decided == 0 {
            0.5
        } else {
            wins[i][j] as f64 / decided as f64
        }
    })?;
    let names = keep.iter().map(|&c| set.candidates[c].clone()).collect();
    Ok((matrix, names))
}
