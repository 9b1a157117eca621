//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! The edge-list text format is `n m` on the first line followed by exactly
//! `m` lines `u v`. Lines starting with `#` and blank lines are skipped.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Rejection budget for [`random_connected`].
pub const MAX_SAMPLING_ATTEMPTS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// A subset of the vertices of some graph, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Members of a bitmask over vertices `0..64`.
    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|&v| mask >> v & 1 == 1).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Graph {
    /// Builds a graph from an edge list. Edges may be given in either
    /// orientation; self-loops and repeated edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v).map_err(Error::InvalidArgument)?;
        }
        g.finish();
        Ok(g)
    }

    fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one vertex".into(),
            ));
        }
        Ok(Self {
            adj: vec![Vec::new(); n],
        })
    }

    fn add_edge(&mut self, u: usize, v: usize) -> std::result::Result<(), String> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(format!("edge ({u},{v}) out of range for n={n}"));
        }
        if u == v {
            return Err(format!("self-loop at vertex {u}"));
        }
        if self.adj[u].contains(&v) {
            return Err(format!("duplicate edge ({u},{v})"));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    fn finish(&mut self) {
        for nbrs in &mut self.adj {
            nbrs.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Neighborhood as a bitmask. Only meaningful for `n <= 64`.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v].iter().fold(0u64, |m, &w| m | 1 << w)
    }

    /// True iff every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// `N(W)`: all vertices adjacent to some member of `w`. May intersect `w`.
    pub fn neighborhood(&self, w: &VertexSet) -> VertexSet {
        w.iter().flat_map(|v| self.adj[v].iter().copied()).collect()
    }

    /// Canonical edge-list text: header then sorted `(min, max)` edges.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parses the edge-list format. Errors carry the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_err = |line: usize, msg: String| Error::Parse { line, msg };

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing header \"n m\"".into()))?;
    let (n, m) = parse_pair(header).map_err(|msg| parse_err(hline, format!("header: {msg}")))?;
    if n == 0 {
        return Err(parse_err(hline, "n must be at least 1".into()));
    }

    let mut g = Graph::empty(n)?;
    let mut seen = 0usize;
    for (line, body) in lines {
        if seen == m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let (u, v) = parse_pair(body).map_err(|msg| parse_err(line, msg))?;
        g.add_edge(u, v).map_err(|msg| parse_err(line, msg))?;
        seen += 1;
    }
    if seen < m {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {m} edges, found {seen}"),
        ));
    }
    g.finish();
    Ok(g)
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let mut it = s.split_whitespace();
    let mut next = || -> std::result::Result<usize, String> {
        let tok = it
            .next()
            .ok_or_else(|| format!("expected two integers in {s:?}"))?;
        tok.parse()
            .map_err(|_| format!("not a non-negative integer: {tok:?}"))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(format!("trailing tokens in {s:?}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Path,
    Star,
    Complete,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "star" => Ok(Family::Star),
            "complete" => Ok(Family::Complete),
            _ => Err(Error::InvalidArgument(format!(
                "unknown graph family {s:?}"
            ))),
        }
    }
}

/// Standard graph families. `Star` with size `k` has a center 0 and `k` leaves.
pub fn generate(family: Family, size: usize) -> Result<Graph> {
    let min = if family == Family::Cycle { 3 } else { 1 };
    if size < min {
        return Err(Error::InvalidArgument(format!(
            "{family:?} needs size >= {min}, got {size}"
        )));
    }
    let (n, edges): (usize, Vec<(usize, usize)>) = match family {
        Family::Cycle => (size, (0..size).map(|i| (i, (i + 1) % size)).collect()),
        Family::Path => (size, (1..size).map(|i| (i - 1, i)).collect()),
        Family::Star => (size + 1, (1..=size).map(|i| (0, i)).collect()),
        Family::Complete => (
            size,
            (0..size)
                .flat_map(|u| (u + 1..size).map(move |v| (u, v)))
                .collect(),
        ),
    };
    Graph::from_edges(n, &edges)
}

/// Seeded Erdős–Rényi `G(n, p)`, resampled until connected.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`; candidate
/// edges `(u, v)` with `u < v` are visited in lexicographic order and kept
/// when a uniform `f64` draw is below `p`.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "random graph needs n >= 2, got {n}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "p must lie in (0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::SamplingGaveUp {
        n,
        p,
        attempts: MAX_SAMPLING_ATTEMPTS,
    })
}
