use proptest::prelude::*;
use raider_core::{generate, parse_edge_list, random_connected, Family, Graph, VertexSet};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..10).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let k = pairs.len();
        proptest::collection::vec(any::<(bool, bool)>(), k).prop_map(move |bits| {
            // random orientation exercises the parser's symmetric handling
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&bits)
                .filter(|(_, (keep, _))| *keep)
                .map(|(&(u, v), (_, flip))| if *flip { (v, u) } else { (u, v) })
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn canonical_text_round_trips(g in arb_graph()) {
        let text = g.to_edge_list();
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn adjacency_is_simple_and_symmetric(g in arb_graph()) {
        for v in 0..g.n() {
            let nbrs = g.neighbors(v);
            prop_assert!(!nbrs.contains(&v));
            prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
            for &w in nbrs {
                prop_assert!(g.neighbors(w).contains(&v));
            }
        }
    }

    #[test]
    fn neighborhood_laws(g in arb_graph(), mask in any::<u16>()) {
        for v in 0..g.n() {
            let single: VertexSet = [v].into_iter().collect();
            let expect: VertexSet = g.neighbors(v).iter().copied().collect();
            prop_assert_eq!(g.neighborhood(&single), expect);
        }
        let w: VertexSet = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let degree_sum: usize = w.iter().map(|v| g.degree(v)).sum();
        prop_assert!(g.neighborhood(&w).len() <= degree_sum);
    }

    #[test]
    fn random_graphs_are_connected(n in 2usize..12, p in 0.2f64..=1.0, seed in any::<u64>()) {
        let g = random_connected(n, p, seed).unwrap();
        prop_assert!(g.is_connected());
        prop_assert_eq!(g.n(), n);
        prop_assert_eq!(random_connected(n, p, seed).unwrap(), g);
    }
}

#[test]
fn random_graph_golden() {
    let golden = include_str!("golden/random_6_0.5_42.edges");
    let g = random_connected(6, 0.5, 42).unwrap();
    assert_eq!(g.to_edge_list(), golden);
}

#[test]
fn families_are_connected() {
    for k in 3..12 {
        assert!(generate(Family::Cycle, k).unwrap().is_connected());
        assert!(generate(Family::Path, k).unwrap().is_connected());
        assert!(generate(Family::Star, k).unwrap().is_connected());
        assert!(generate(Family::Complete, k).unwrap().is_connected());
    }
}
