mod common;

use common::*;
use hopcolor::reduction::{
    build_tree_t, expected_m, reduce, reduce_even, reduce_odd, verify_equivalence, verify_lemmas,
    NodeRole, Verdict,
};
use hopcolor::Graph;

/// Triangle 0-1-2 with a pendant node 3 on node 2.
fn paw() -> Graph {
    Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
}

#[test]
fn odd_construction_link_counts() {
    let g = paw();
    let r = reduce_odd(&g, 5).unwrap();
    // v-U1 links, U1-U2 links, copies of the 4 edges in U2, U2-u0 links.
    assert_eq!(r.gprime.node_count(), 4 + 2 * 4 + 1);
    assert_eq!(r.gprime.edge_count(), 4 + 4 + 4 + 4);
    assert_eq!(
        r.roles.iter().filter(|x| **x == NodeRole::Layer(2)).count(),
        4
    );
    assert_eq!(r.roles[12], NodeRole::Conjunction);
    for (a, b) in g.edges() {
        assert!(r.gprime.has_edge(r.layers[1][a], r.layers[1][b]));
        assert!(!r.gprime.has_edge(a, b));
    }
}

#[test]
fn even_construction_link_counts() {
    let g = paw();
    let r = reduce_even(&g, 6).unwrap();
    let p = g.edge_count();
    assert_eq!(r.gprime.node_count(), 4 + 2 * 4 + p + 1);
    // v-U1, U1-U2, two endpoint links per edge node, clique on edge nodes,
    // edge nodes to u0.
    assert_eq!(r.gprime.edge_count(), 4 + 4 + 2 * p + p * (p - 1) / 2 + p);
    assert_eq!(r.added_nodes().len(), expected_m(4, p, 6).unwrap());
}

#[test]
fn trees_span_and_root_at_u0() {
    for h in [3, 4, 5, 6] {
        let r = reduce(&paw(), h).unwrap();
        let t = build_tree_t(&r).unwrap();
        assert_eq!(t.root(), r.conjunction);
        assert!(t.is_subgraph_of(&r.gprime));
        for v in 0..4 {
            assert_eq!(t.depth(v), r.half() + 1, "h={h} v={v}");
            assert!(t.children(v).is_empty());
        }
    }
}

#[test]
fn lemmas_hold_on_random_graphs() {
    let mut rng = rng(31);
    let mut checked = 0;
    while checked < 40 {
        let g = random_graph(&mut rng, 7, 40);
        for h in 3..=7 {
            let Ok(r) = reduce(&g, h) else {
                // Even h rejects graphs with isolated nodes.
                assert!(h % 2 == 0);
                continue;
            };
            let report = verify_lemmas(&r).unwrap();
            assert!(report.passed(), "{g:?} h={h}\n{report}");
        }
        checked += 1;
    }
}

#[test]
fn equivalence_on_small_graphs() {
    let graphs = [
        Graph::from_edges(2, [(0, 1)]).unwrap(),
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(),
        paw(),
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(),
    ];
    for g in &graphs {
        for h in [3, 4, 5, 6] {
            let e = verify_equivalence(g, h, 5_000_000).unwrap();
            assert_eq!(e.verdict, Verdict::Pass, "{g:?} h={h}: {e}");
            assert_eq!(e.k_prime, e.k + e.m);
        }
    }
}

#[test]
fn rejected_inputs() {
    let g = paw();
    assert!(reduce(&g, 2).is_err());
    assert!(reduce(&g, 1).is_err());
    assert!(reduce(&Graph::empty(0), 3).is_err());
    let with_isolated = Graph::from_edges(3, [(0, 1)]).unwrap();
    assert!(reduce(&with_isolated, 4).is_err());
    assert!(reduce(&with_isolated, 3).is_ok());
}
