//! Communication graphs, hop distances, power graphs and clique analytics.
//!
//! Player indices are 0-based everywhere, including graph files:
//!
//! ```text
//! m=4
//! 0 1
//! 1 2
//! 2 3
//! ```

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest player count handled by exhaustive clique search.
pub const EXACT_CLIQUE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Complete,
    Cycle,
    Path,
    Star,
}

impl Topology {
    pub const ALL: [Topology; 4] = [Topology::Complete, Topology::Cycle, Topology::Path, Topology::Star];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Complete => "complete",
            Topology::Cycle => "cycle",
            Topology::Path => "path",
            Topology::Star => "star",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Topology::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown graph kind {s:?} (complete|cycle|path|star)")))
    }
}

/// Undirected simple graph on players `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommGraph {
    m: usize,
    adj: Vec<Vec<usize>>,
    kind: Option<Topology>,
}

impl CommGraph {
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSize("graph needs at least one player".into()));
        }
        let mut adj = vec![Vec::new(); m];
        for &(u, v) in edges {
            if u >= m || v >= m {
                return Err(Error::InvalidSize(format!("edge ({u},{v}) outside 0..{m}")));
            }
            if u == v {
                return Err(Error::InvalidSize(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        Ok(Self { m, adj, kind: None })
    }

    pub fn canonical(kind: Topology, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSize("graph needs at least one player".into()));
        }
        let edges: Vec<(usize, usize)> = match kind {
            Topology::Complete => (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect(),
            Topology::Path => (1..m).map(|v| (v - 1, v)).collect(),
            Topology::Cycle => {
                let mut e: Vec<_> = (1..m).map(|v| (v - 1, v)).collect();
                if m > 2 {
                    e.push((m - 1, 0));
                }
                e
            }
            Topology::Star => {
                if m < 2 {
                    return Err(Error::InvalidSize("star graph needs at least 2 players".into()));
                }
                (1..m).map(|v| (0, v)).collect()
            }
        };
        let mut g = Self::from_edges(m, &edges)?;
        g.kind = Some(kind);
        Ok(g)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, header) = lines.next().ok_or_else(|| Error::parse(None, "empty graph file"))?;
        let m: usize = header
            .strip_prefix("m=")
            .ok_or_else(|| Error::parse(n, "expected \"m=<int>\""))?
            .trim()
            .parse()
            .map_err(|e| Error::parse(n, format!("bad player count: {e}")))?;
        let mut edges = Vec::new();
        for (n, line) in lines {
            let mut it = line.split_whitespace().map(|f| {
                f.parse::<usize>()
                    .map_err(|e| Error::parse(n, format!("bad vertex {f:?}: {e}")))
            });
            match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => edges.push((u?, v?)),
                _ => return Err(Error::parse(n, "expected \"u v\"")),
            }
        }
        Self::from_edges(m, &edges).map_err(|e| match e {
            Error::InvalidSize(msg) => Error::parse(None, msg),
            other => other,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> Option<Topology> {
        self.kind
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|n| n.len() == self.m - 1)
    }

    fn bitmask_adjacency(&self) -> Vec<u32> {
        debug_assert!(self.m <= 32);
        self.adj
            .iter()
            .map(|n| n.iter().fold(0u32, |acc, &v| acc | (1 << v)))
            .collect()
    }
}

/// All-pairs hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    m: usize,
    dist: Vec<usize>,
    diameter: usize,
}

impl DistanceTable {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.dist[u * self.m + v]
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }
}

pub fn all_pairs_distances(g: &CommGraph) -> Result<DistanceTable> {
    let m = g.m();
    let mut dist = vec![usize::MAX; m * m];
    let mut queue = VecDeque::new();
    for s in 0..m {
        let row = &mut dist[s * m..(s + 1) * m];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if row[v] == usize::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(Error::Disconnected);
    }
    let diameter = dist.iter().copied().max().unwrap_or(0);
    Ok(DistanceTable { m, dist, diameter })
}

/// The `gamma`-power graph: `u ~ v` iff `1 <= d(u, v) <= gamma`.
/// `gamma = 0` yields the edgeless graph.
pub fn power_graph(g: &CommGraph, dist: &DistanceTable, gamma: usize) -> CommGraph {
    let m = g.m();
    let mut edges = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            let d = dist.get(u, v);
            if d >= 1 && d <= gamma {
                edges.push((u, v));
            }
        }
    }
    let mut p = CommGraph::from_edges(m, &edges).expect("power graph of a valid graph");
    if gamma == 1 {
        p.kind = g.kind;
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueAnalytics {
    pub gamma: usize,
    /// Clique covering number of the `gamma`-power graph.
    pub chi: usize,
    /// `false` when `chi` is a greedy upper bound and `largest_clique`
    /// entries are greedy lower bounds.
    pub exact: bool,
    /// `largest_clique[m][g]` is the size of the largest clique containing
    /// player `m` in the `g`-power graph, for `g` in `0..=gamma`.
    pub largest_clique: Vec<Vec<usize>>,
    /// Maximum degree of the `gamma`-power graph.
    pub d_max_gamma: usize,
}

/// Clique analytics of the `gamma`-power graph: exhaustive search for up to
/// [`EXACT_CLIQUE_LIMIT`] players, closed forms for canonical topologies
/// beyond that.
pub fn clique_analytics(g: &CommGraph, gamma: usize) -> Result<CliqueAnalytics> {
    let dist = all_pairs_distances(g)?;
    if g.m() <= EXACT_CLIQUE_LIMIT {
        return Ok(exact_analytics(g, &dist, gamma));
    }
    match g.kind() {
        Some(kind) => Ok(closed_form_analytics(kind, g.m(), gamma)),
        None => Err(Error::TooLargeForExact {
            m: g.m(),
            limit: EXACT_CLIQUE_LIMIT,
        }),
    }
}

/// Greedy variant usable at any size; `chi` is an upper bound and the
/// clique sizes are lower bounds (`exact = false`).
pub fn clique_analytics_greedy(g: &CommGraph, gamma: usize) -> Result<CliqueAnalytics> {
    let dist = all_pairs_distances(g)?;
    let m = g.m();
    let mut largest_clique = vec![vec![1; gamma + 1]; m];
    for gp in 1..=gamma {
        let p = power_graph(g, &dist, gp);
        for (v, row) in largest_clique.iter_mut().enumerate() {
            row[gp] = greedy_clique_containing(&p, v).len().max(row[gp - 1]);
        }
    }
    let p = power_graph(g, &dist, gamma);
    Ok(CliqueAnalytics {
        gamma,
        chi: greedy_clique_cover(&p).len(),
        exact: false,
        largest_clique,
        d_max_gamma: p.max_degree(),
    })
}

/// Grows a clique from `v` by repeatedly adding the lowest-index vertex
/// adjacent to every member, preferring vertices with most candidate
/// neighbours.
fn greedy_clique_containing(g: &CommGraph, v: usize) -> Vec<usize> {
    let mut clique = vec![v];
    let mut candidates: Vec<usize> = g.neighbors(v).to_vec();
    while !candidates.is_empty() {
        let &best = candidates
            .iter()
            .max_by_key(|&&c| {
                let deg = candidates.iter().filter(|&&o| g.has_edge(c, o)).count();
                (deg, std::cmp::Reverse(c))
            })
            .unwrap();
        clique.push(best);
        candidates.retain(|&c| c != best && g.has_edge(best, c));
    }
    clique.sort_unstable();
    clique
}

/// Greedy clique cover: repeatedly take the lowest uncovered vertex and grow
/// a clique among uncovered vertices.
pub fn greedy_clique_cover(g: &CommGraph) -> Vec<Vec<usize>> {
    let m = g.m();
    let mut covered = vec![false; m];
    let mut cover = Vec::new();
    while let Some(v) = covered.iter().position(|c| !c) {
        let mut clique = vec![v];
        covered[v] = true;
        for u in 0..m {
            if !covered[u] && clique.iter().all(|&w| g.has_edge(u, w)) {
                clique.push(u);
                covered[u] = true;
            }
        }
        cover.push(clique);
    }
    cover
}

fn exact_analytics(g: &CommGraph, dist: &DistanceTable, gamma: usize) -> CliqueAnalytics {
    let m = g.m();
    let mut largest_clique = vec![vec![1; gamma + 1]; m];
    for gp in 1..=gamma {
        let adj = power_graph(g, dist, gp).bitmask_adjacency();
        for (v, row) in largest_clique.iter_mut().enumerate() {
            row[gp] = 1 + max_clique_size(&adj, adj[v]);
        }
    }
    let p = power_graph(g, dist, gamma);
    let adj = p.bitmask_adjacency();
    CliqueAnalytics {
        gamma,
        chi: min_clique_cover(&adj),
        exact: true,
        largest_clique,
        d_max_gamma: p.max_degree(),
    }
}

/// Size of the largest clique inside the vertex set `candidates`.
fn max_clique_size(adj: &[u32], candidates: u32) -> usize {
    fn expand(adj: &[u32], size: usize, mut cand: u32, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            expand(adj, size + 1, cand & adj[v], best);
        }
    }
    let mut best = 0;
    expand(adj, 0, candidates, &mut best);
    best
}

fn maximal_cliques(adj: &[u32]) -> Vec<u32> {
    fn bron_kerbosch(adj: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut todo = p & !adj[pivot];
        while todo != 0 {
            let v = todo.trailing_zeros() as usize;
            todo &= !(1 << v);
            bron_kerbosch(adj, r | (1 << v), p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let all = if adj.len() == 32 { u32::MAX } else { (1u32 << adj.len()) - 1 };
    let mut out = Vec::new();
    bron_kerbosch(adj, 0, all, 0, &mut out);
    out
}

/// Minimum number of cliques covering every vertex, by subset DP over
/// maximal cliques.
fn min_clique_cover(adj: &[u32]) -> usize {
    let m = adj.len();
    let cliques = maximal_cliques(adj);
    let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); m];
    for &c in &cliques {
        let mut bits = c;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            by_vertex[v].push(c);
        }
    }
    let full = (1usize << m) - 1;
    let mut best = vec![u8::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let v = mask.trailing_zeros() as usize;
        best[mask] = by_vertex[v]
            .iter()
            .map(|&c| best[mask & !(c as usize)])
            .min()
            .unwrap()
            + 1;
    }
    best[full] as usize
}

fn closed_form_analytics(kind: Topology, m: usize, gamma: usize) -> CliqueAnalytics {
    // (chi, largest clique containing any player, max degree) of the
    // g-power graph; every canonical topology here is vertex-transitive
    // except the star, whose clique sizes coincide for hub and leaves.
    let stats = |g: usize| -> (usize, usize, usize) {
        if g == 0 {
            return (m, 1, 0);
        }
        match kind {
            Topology::Complete => (1, m, m - 1),
            Topology::Star if g >= 2 => (1, m, m - 1),
            Topology::Star => (m - 1, 2.min(m), m - 1),
            Topology::Path => ((m + g) / (g + 1), (g + 1).min(m), (2 * g).min(m - 1)),
            Topology::Cycle if 2 * g + 1 >= m => (1, m, m - 1),
            Topology::Cycle => ((m + g) / (g + 1), g + 1, 2 * g),
        }
    };
    let (chi, _, d_max_gamma) = stats(gamma);
    CliqueAnalytics {
        gamma,
        chi,
        exact: true,
        largest_clique: vec![(0..=gamma).map(|g| stats(g).1).collect(); m],
        d_max_gamma,
    }
}
