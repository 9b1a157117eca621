//! Graph derangements: existence, construction, Q-factors, Hall witnesses
//! and exact counting.
//!
//! A derangement of `G` is a bijection `f` on the vertices with `f(v) != v`
//! and `{v, f(v)}` an edge for every `v`. Viewing each vertex once on the
//! left and once on the right of a bipartite graph (left `v` joined to right
//! `w` iff `{v, w}` is an edge), derangements are exactly the perfect
//! matchings, so Hall's condition `|N(W)| >= |W|` decides existence.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::permanent::{self, permanent_01};

/// Largest vertex count [`hall_witness`] will scan exhaustively.
pub const HALL_SCAN_MAX: usize = 24;
/// Largest vertex count [`count_derangements`] accepts.
pub const COUNT_MAX: usize = permanent::MAX_DIM;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Derangement {
    map: Vec<usize>,
}

impl Derangement {
    /// Validates `map` as a derangement of `g`.
    pub fn new(g: &Graph, map: Vec<usize>) -> Result<Self> {
        let n = g.n();
        if map.len() != n {
            return Err(Error::NotDerangement(format!(
                "map has {} entries for {n} vertices",
                map.len()
            )));
        }
        let mut hit = vec![false; n];
        for (v, &w) in map.iter().enumerate() {
            if w == v {
                return Err(Error::NotDerangement(format!("fixed point at {v}")));
            }
            if !g.has_edge(v, w) {
                return Err(Error::NotDerangement(format!("{v}->{w} is not an edge")));
            }
            if std::mem::replace(&mut hit[w], true) {
                return Err(Error::NotDerangement(format!("vertex {w} hit twice")));
            }
        }
        Ok(Self { map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    pub fn image(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }
}

/// Finds a derangement by augmenting-path bipartite matching.
///
/// Left vertices are matched in ascending order and each augmenting search
/// tries neighbors in ascending order, so the result is deterministic.
pub fn find_derangement(g: &Graph) -> Option<Derangement> {
    let owner = maximum_matching(g);
    let mut map = vec![0; g.n()];
    for (w, o) in owner.iter().enumerate() {
        map[(*o)?] = w;
    }
    Some(Derangement { map })
}

/// Size of a maximum matching between the left and right copies of the
/// vertices. Equals `n` exactly when a derangement exists.
pub fn max_matching_size(g: &Graph) -> usize {
    maximum_matching(g).iter().flatten().count()
}

// owner[w] = left vertex matched to right copy w
fn maximum_matching(g: &Graph) -> Vec<Option<usize>> {
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    for v in 0..n {
        visited.fill(false);
        augment(g, v, &mut owner, &mut visited);
    }
    owner
}

fn augment(g: &Graph, v: usize, owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &w in g.neighbors(v) {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        let free = match owner[w] {
            None => true,
            Some(u) => augment(g, u, owner, visited),
        };
        if free {
            owner[w] = Some(v);
            return true;
        }
    }
    false
}

/// A vertex set violating Hall's condition: `|N(W)| < |W|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallWitness {
    pub set: VertexSet,
    pub neighborhood: VertexSet,
}

impl HallWitness {
    /// `|W| - |N(W)|`, always positive.
    pub fn deficiency(&self) -> usize {
        self.set.len() - self.neighborhood.len()
    }
}

/// Exhaustive search for a Hall violator, independent of the matching code.
///
/// Returns the violator of largest deficiency `|W| - |N(W)|`; ties go to the
/// smaller set, then to the smaller bitmask. The largest deficiency equals
/// the number of vertices a maximum matching leaves unmatched.
pub fn hall_witness(g: &Graph) -> Result<Option<HallWitness>> {
    let n = g.n();
    if n > HALL_SCAN_MAX {
        return Err(Error::GuardExceeded {
            what: "Hall scan vertex count",
            got: n as u128,
            limit: HALL_SCAN_MAX as u128,
        });
    }
    let nbr: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    // (deficiency, size, mask, neighborhood)
    let mut best: Option<(u32, u32, u64, u64)> = None;
    for set in 1u64..1 << n {
        let mut covered = 0u64;
        let mut rest = set;
        while rest != 0 {
            covered |= nbr[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let size = set.count_ones();
        let seen = covered.count_ones();
        if seen >= size {
            continue;
        }
        let deficiency = size - seen;
        let better = match best {
            None => true,
            Some((d, s, _, _)) => deficiency > d || (deficiency == d && size < s),
        };
        if better {
            best = Some((deficiency, size, set, covered));
        }
    }
    Ok(best.map(|(_, _, set, covered)| HallWitness {
        set: VertexSet::from_mask(set),
        neighborhood: VertexSet::from_mask(covered),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    /// A single edge `{u, w}` with `u < w`.
    Pair(usize, usize),
    /// A cycle of length at least 3, listed from its smallest vertex.
    Cycle(Vec<usize>),
}

impl Component {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Component::Pair(u, w) => vec![*u, *w],
            Component::Cycle(vs) => vs.clone(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Pair(u, w) => write!(f, "Pair({u},{w})"),
            Component::Cycle(vs) => {
                let body: Vec<String> = vs.iter().map(usize::to_string).collect();
                write!(f, "Cycle({})", body.join(","))
            }
        }
    }
}

/// Spanning subgraph made of vertex pairs and cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QFactor {
    pub components: Vec<Component>,
}

impl QFactor {
    /// Checks that the components partition the vertices of `g` and that
    /// every claimed edge exists.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = vec![false; g.n()];
        for c in &self.components {
            let vs = c.vertices();
            if let Component::Cycle(_) = c {
                if vs.len() < 3 {
                    return Err(Error::InvalidArgument(format!("{c}: cycle shorter than 3")));
                }
            }
            for &v in &vs {
                if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidArgument(format!(
                        "{c}: vertex {v} repeated or out of range"
                    )));
                }
            }
            let edges: Vec<(usize, usize)> = match c {
                Component::Pair(u, w) => vec![(*u, *w)],
                Component::Cycle(vs) => (0..vs.len())
                    .map(|i| (vs[i], vs[(i + 1) % vs.len()]))
                    .collect(),
            };
            if let Some(&(u, w)) = edges.iter().find(|&&(u, w)| !g.has_edge(u, w)) {
                return Err(Error::InvalidArgument(format!(
                    "{c}: {{{u},{w}}} is not an edge"
                )));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidArgument(format!("vertex {v} not covered")));
        }
        Ok(())
    }
}

impl fmt::Display for QFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Splits the permutation `d` into its cycles: 2-cycles become pairs,
/// longer cycles stay cycles.
pub fn q_factor(g: &Graph, d: &Derangement) -> Result<QFactor> {
    let d = Derangement::new(g, d.map.clone())?;
    let n = d.n();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(v);
            v = d.image(v);
        }
        components.push(match cycle.as_slice() {
            [u, w] => Component::Pair(*u.min(w), *u.max(w)),
            _ => Component::Cycle(cycle),
        });
    }
    Ok(QFactor { components })
}

/// Number of derangements of `g`: the permanent of its adjacency matrix.
pub fn count_derangements(g: &Graph) -> Result<BigUint> {
    let n = g.n();
    if n > COUNT_MAX {
        return Err(Error::GuardExceeded {
            what: "derangement count vertex count",
            got: n as u128,
            limit: COUNT_MAX as u128,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    Ok(permanent_01(&rows))
}

/// Nearest integer to `n!/e`, i.e. the number of derangements of an
/// `n`-element set, from `D(n) = (n-1)(D(n-1) + D(n-2))`.
pub fn derangement_upper_bound(n: usize) -> Result<BigUint> {
    if !(1..=COUNT_MAX).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "bound defined for 1 <= n <= {COUNT_MAX}, got {n}"
        )));
    }
    let (mut prev, mut cur) = (BigUint::from(1u8), BigUint::from(0u8));
    for k in 2..=n {
        let next = BigUint::from(k - 1) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn fam(f: Family, k: usize) -> Graph {
        generate(f, k).unwrap()
    }

    #[test]
    fn finds_on_cycles_and_edges() {
        let c4 = fam(Family::Cycle, 4);
        let d = find_derangement(&c4).unwrap();
        assert!(Derangement::new(&c4, d.map().to_vec()).is_ok());
        assert_eq!(d.map(), &[3, 2, 1, 0]);
        assert_eq!(
            find_derangement(&fam(Family::Complete, 2)).unwrap().map(),
            &[1, 0]
        );
        assert!(find_derangement(&fam(Family::Star, 3)).is_none());
        assert!(find_derangement(&fam(Family::Complete, 1)).is_none());
        assert_eq!(max_matching_size(&fam(Family::Star, 3)), 2);
        assert_eq!(max_matching_size(&fam(Family::Cycle, 5)), 5);
    }

    #[test]
    fn derangement_validation() {
        let p3 = fam(Family::Path, 3);
        assert!(Derangement::new(&p3, vec![1, 1, 1]).is_err());
        assert!(Derangement::new(&p3, vec![1, 0, 1]).is_err());
        assert!(Derangement::new(&p3, vec![2, 0, 1]).is_err());
        assert!(Derangement::new(&p3, vec![1, 0]).is_err());
    }

    #[test]
    fn hall_witnesses() {
        let w = hall_witness(&fam(Family::Star, 3)).unwrap().unwrap();
        assert_eq!(w.set, [1, 2, 3].into_iter().collect());
        assert_eq!(w.neighborhood, [0].into_iter().collect());
        assert!(hall_witness(&fam(Family::Cycle, 4)).unwrap().is_none());
        assert!(hall_witness(&fam(Family::Complete, 2)).unwrap().is_none());
        // K1: the lone vertex has no neighbors
        let w = hall_witness(&fam(Family::Complete, 1)).unwrap().unwrap();
        assert_eq!(w.set, [0].into_iter().collect());
        // P3: {0,2} sees only {1}
        let w = hall_witness(&fam(Family::Path, 3)).unwrap().unwrap();
        assert_eq!(w.set, [0, 2].into_iter().collect());
        assert_eq!(w.deficiency(), 1);
        // two stars joined through a leaf: {1,2,3,5,6} only sees {0,4}
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (4, 5), (4, 6)]).unwrap();
        let w = hall_witness(&g).unwrap().unwrap();
        assert_eq!(w.deficiency(), 3);
        assert_eq!(w.set, [1, 2, 3, 5, 6].into_iter().collect());
        assert_eq!(max_matching_size(&g), 4);
        assert!(hall_witness(&fam(Family::Path, 25)).is_err());
    }

    #[test]
    fn q_factors() {
        let k2 = fam(Family::Complete, 2);
        let d = Derangement::new(&k2, vec![1, 0]).unwrap();
        assert_eq!(
            q_factor(&k2, &d).unwrap().components,
            vec![Component::Pair(0, 1)]
        );

        let c4 = fam(Family::Cycle, 4);
        let d = Derangement::new(&c4, vec![1, 2, 3, 0]).unwrap();
        assert_eq!(
            q_factor(&c4, &d).unwrap().components,
            vec![Component::Cycle(vec![0, 1, 2, 3])]
        );

        let c6 = fam(Family::Cycle, 6);
        let d = Derangement::new(&c6, vec![1, 0, 3, 2, 5, 4]).unwrap();
        let q = q_factor(&c6, &d).unwrap();
        assert_eq!(
            q.components,
            vec![
                Component::Pair(0, 1),
                Component::Pair(2, 3),
                Component::Pair(4, 5)
            ]
        );
        q.validate(&c6).unwrap();
        assert_eq!(q.to_string(), "[Pair(0,1), Pair(2,3), Pair(4,5)]");

        // a derangement of another graph is rejected
        let bad = Derangement::new(&fam(Family::Complete, 4), vec![2, 3, 0, 1]).unwrap();
        assert!(q_factor(&c4, &bad).is_err());
    }

    #[test]
    fn qfactor_validation_catches_bad_components() {
        let c4 = fam(Family::Cycle, 4);
        let q = QFactor {
            components: vec![Component::Pair(0, 2), Component::Pair(1, 3)],
        };
        assert!(q.validate(&c4).is_err());
        let q = QFactor {
            components: vec![Component::Pair(0, 1)],
        };
        assert!(q.validate(&c4).is_err());
        let q = QFactor {
            components: vec![Component::Pair(0, 1), Component::Pair(1, 2)],
        };
        assert!(q.validate(&c4).is_err());
    }

    #[test]
    fn counts() {
        let count = |g: &Graph| count_derangements(g).unwrap();
        assert_eq!(count(&fam(Family::Cycle, 4)), BigUint::from(4u8));
        assert_eq!(count(&fam(Family::Complete, 4)), BigUint::from(9u8));
        assert_eq!(count(&fam(Family::Path, 3)), BigUint::from(0u8));
        assert_eq!(count(&fam(Family::Cycle, 3)), BigUint::from(2u8));
        assert!(count_derangements(&fam(Family::Path, 21)).is_err());
    }

    #[test]
    fn upper_bounds() {
        let b = |n| derangement_upper_bound(n).unwrap();
        assert_eq!(b(1), BigUint::from(0u8));
        assert_eq!(b(2), BigUint::from(1u8));
        assert_eq!(b(4), BigUint::from(9u8));
        assert_eq!(b(20), BigUint::from(895_014_631_192_902_121u64));
        assert!(derangement_upper_bound(0).is_err());
        assert!(derangement_upper_bound(21).is_err());
    }
}
