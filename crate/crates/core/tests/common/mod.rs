//! Brute-force oracles. Nothing here calls the matching, permanent, rank
//! table or incremental-deviation code it is used to check.
#![allow(dead_code)]

use num_rational::Ratio;
use raider_core::{Graph, Rational};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every derangement of `g`, by filtering all `n!` permutations.
pub fn brute_derangements(g: &Graph) -> Vec<Vec<usize>> {
    assert!(g.n() <= 8, "brute force limited to n <= 8");
    permutations(g.n())
        .into_iter()
        .filter(|p| {
            p.iter()
                .enumerate()
                .all(|(v, &w)| w != v && g.has_edge(v, w))
        })
        .collect()
}

/// Every labeled simple graph on `n` vertices.
pub fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// Every admissible profile, in lexicographic order of the map.
pub fn all_profiles(g: &Graph) -> Vec<Vec<usize>> {
    let options: Vec<Vec<usize>> = (0..g.n())
        .map(|v| {
            let mut s: Vec<usize> = (0..g.n()).filter(|&w| w == v || g.has_edge(v, w)).collect();
            s.sort();
            s
        })
        .collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                opts.iter().map(move |&w| {
                    let mut p = prefix.clone();
                    p.push(w);
                    p
                })
            })
            .collect();
    }
    out
}

/// Payoff straight from the case analysis, with preimages found by scanning.
pub fn naive_payoff(map: &[usize], h: Rational, v: usize) -> Rational {
    let preimage = |x: usize| map.iter().filter(|&&y| y == x).count() as i128;
    let one = Ratio::from_integer(1);
    let target = map[v];
    if target == v {
        return h + (one - h) / preimage(v);
    }
    let home_unraided = preimage(v) == 0;
    let target_defended = map[target] == target;
    let share = if target_defended { one - h } else { one };
    let base = if home_unraided {
        one
    } else {
        Ratio::from_integer(0)
    };
    base + share / preimage(target)
}

/// Strict equilibrium test by recomputing every deviated profile in full.
pub fn naive_is_strict(g: &Graph, map: &[usize], h: Rational) -> bool {
    (0..g.n()).all(|v| {
        let old = naive_payoff(map, h, v);
        (0..g.n())
            .filter(|&b| b != map[v] && (b == v || g.has_edge(v, b)))
            .all(|b| {
                let mut moved = map.to_vec();
                moved[v] = b;
                naive_payoff(&moved, h, v) < old
            })
    })
}

/// The `h` grid used throughout the property checks.
pub fn h_grid() -> Vec<Rational> {
    vec![
        Ratio::from_integer(0),
        Ratio::new(1, 4),
        Ratio::new(1, 2),
        Ratio::new(3, 4),
        Ratio::new(99, 100),
    ]
}
