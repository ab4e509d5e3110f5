mod common;

use hfree_core::admissibility::{
    admissibility_of_order, chain_decomposition, exact_admissibility, greedy_admissibility_order, is_admissible_path,
    is_chain, max_path_packing, target_set, Path,
};
use hfree_core::graph::{OrderedGraph, VertexOrder};
use proptest::prelude::*;

fn ordered_graph(max_n: usize) -> impl Strategy<Value = OrderedGraph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                any::<u64>().prop_map(move |m| if pairs == 0 { 0 } else { m & (u64::MAX >> (64 - pairs)) }),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, mask, seq)| {
            OrderedGraph::new(common::graph_from_mask(n, mask), VertexOrder::from_sequence(seq).unwrap()).unwrap()
        })
}

fn target_bound(p: usize, h: usize) -> usize {
    match p {
        0 => 0,
        1 => 1,
        _ => p * (p - 1).pow(h as u32 - 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn target_set_matches_enumeration(g in ordered_graph(7), r in 1usize..=4) {
        for v in g.graph.vertices() {
            let got: Vec<_> = target_set(&g, v, r);
            let want: Vec<_> = common::target(&g, v, r).into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn packing_matches_enumeration(g in ordered_graph(6), r in 1usize..=4) {
        for v in g.graph.vertices() {
            let pk = max_path_packing(&g, v, r).unwrap();
            prop_assert_eq!(pk.size(), common::packing_size(&g, v, r));
            let mut seen = std::collections::BTreeSet::new();
            for p in &pk.paths {
                prop_assert_eq!(p.start(), v);
                prop_assert!(common::admissible(&g, p.vertices(), r));
                for &x in &p.vertices()[1..] {
                    prop_assert!(seen.insert(x));
                }
            }
        }
    }

    #[test]
    fn target_sets_respect_the_admissibility_bound(g in ordered_graph(8), r in 1usize..=4) {
        let p = admissibility_of_order(&g, r).unwrap();
        for v in g.graph.vertices() {
            for h in 1..=r {
                prop_assert!(target_set(&g, v, h).len() <= target_bound(p, h));
            }
        }
    }

    #[test]
    fn admissibility_grows_with_radius(g in ordered_graph(7), r in 1usize..=3) {
        prop_assert!(admissibility_of_order(&g, r).unwrap() <= admissibility_of_order(&g, r + 1).unwrap());
        let e1 = exact_admissibility(&g.graph, r).unwrap().value;
        let e2 = exact_admissibility(&g.graph, r + 1).unwrap().value;
        prop_assert!(e1 <= e2);
    }

    #[test]
    fn exact_is_a_minimum_and_greedy_never_beats_it(g in ordered_graph(7), r in 1usize..=3) {
        let exact = exact_admissibility(&g.graph, r).unwrap();
        let reorder = OrderedGraph::new(g.graph.clone(), exact.order.clone()).unwrap();
        prop_assert_eq!(admissibility_of_order(&reorder, r).unwrap(), exact.value);
        prop_assert!(exact.value <= admissibility_of_order(&g, r).unwrap());
        let greedy = greedy_admissibility_order(&g.graph, r).unwrap();
        let regreedy = OrderedGraph::new(g.graph.clone(), greedy.order.clone()).unwrap();
        prop_assert_eq!(admissibility_of_order(&regreedy, r).unwrap(), greedy.value);
        prop_assert!(greedy.value >= exact.value);
        if r == 1 {
            prop_assert_eq!(greedy.value, exact.value);
        }
    }

    #[test]
    fn radius_one_is_degeneracy(g in ordered_graph(8)) {
        prop_assert_eq!(exact_admissibility(&g.graph, 1).unwrap().value, common::degeneracy(&g.graph));
    }

    #[test]
    fn chains_agree_with_definition_and_decompose_uniquely(g in ordered_graph(7), r in 2usize..=3) {
        for v in g.graph.vertices() {
            for p in common::simple_paths_from(&g, v, 6) {
                let path = Path::new(p.clone()).unwrap();
                let chain = common::is_chain(&g, &p, r);
                prop_assert_eq!(is_chain(&g, &path, r).unwrap(), chain);
                prop_assert_eq!(is_admissible_path(&g, &path, r).unwrap(), common::admissible(&g, &p, r));
                if !chain {
                    prop_assert!(chain_decomposition(&g, &path, r).is_err());
                    continue;
                }
                let d = chain_decomposition(&g, &path, r).unwrap();
                prop_assert_eq!(d.concatenate(), p.clone());
                let all = common::admissible_segmentations(&g, &p, r);
                prop_assert_eq!(all.len(), 1);
                let segs: Vec<Vec<usize>> = d.segments.iter().map(|s| s.vertices().to_vec()).collect();
                prop_assert_eq!(&all[0], &segs);
                // every suffix of a chain is a chain
                for i in 0..p.len() - 1 {
                    prop_assert!(common::is_chain(&g, &p[i..], r));
                    prop_assert!(is_chain(&g, &path.slice(i, p.len() - 1), r).unwrap());
                }
            }
        }
    }

    #[test]
    fn reversed_prefixes_of_admissible_paths_are_chains(g in ordered_graph(7), r in 2usize..=4) {
        for v in g.graph.vertices() {
            for p in common::admissible_paths(&g, v, r) {
                let path = Path::new(p.clone()).unwrap();
                for i in 1..p.len() - 1 {
                    let back = path.slice(i, 0);
                    prop_assert_eq!(back.end(), v);
                    prop_assert!(is_chain(&g, &back, r).unwrap());
                }
            }
        }
    }
}

#[test]
fn documented_small_cases() {
    let k3 = OrderedGraph::with_identity_order(hfree_core::generators::complete(3));
    assert_eq!(target_set(&k3, 2, 1), vec![0, 1]);
    assert_eq!(target_set(&k3, 1, 2), vec![0]);
    assert_eq!(max_path_packing(&k3, 2, 1).unwrap().size(), 2);
    assert_eq!(max_path_packing(&k3, 1, 2).unwrap().size(), 1);
    for seq in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let g = OrderedGraph::new(k3.graph.clone(), VertexOrder::from_sequence(seq.to_vec()).unwrap()).unwrap();
        for r in 1..=4 {
            assert_eq!(admissibility_of_order(&g, r).unwrap(), 2);
        }
    }
    let star = hfree_core::generators::star(4);
    assert_eq!(exact_admissibility(&star, 3).unwrap().value, 1);
    let p = OrderedGraph::with_identity_order(hfree_core::generators::path(6));
    for r in 1..=5 {
        assert_eq!(admissibility_of_order(&p, r).unwrap(), 1);
    }
    let tri = hfree_core::generators::disjoint_copies(&hfree_core::generators::complete(3), 4, 0, 3)
        .unwrap()
        .0;
    assert_eq!(greedy_admissibility_order(&tri, 3).unwrap().value, 2);
}

/// Bound on endpoints of chains with at most `len` edges leaving one vertex.
/// For `p ≥ 2` this is `p^(r·len)`; for `p = 1` a target set has at most one
/// vertex and each descent adds at most one new endpoint, giving `len`.
fn chain_endpoint_bound(p: usize, r: usize, len: usize) -> u128 {
    match p {
        0 => 0,
        1 => len as u128,
        _ => (p as u128).saturating_pow((r * len) as u32),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn chain_endpoints_are_few(g in ordered_graph(7), r in 2usize..=4) {
        let p = admissibility_of_order(&g, r).unwrap();
        for x in g.graph.vertices() {
            for len in 1..g.n() {
                let ends = common::chain_endpoints(&g, x, len, r);
                prop_assert!(ends.len() as u128 <= chain_endpoint_bound(p, r, len));
            }
        }
    }
}

#[test]
fn unit_admissibility_chain_endpoints_exceed_one() {
    // 0 - 1 - 2 in identity order: every packing has one path, yet chains
    // from 2 end at both 1 and 0
    let g = OrderedGraph::with_identity_order(hfree_core::generators::path(3));
    assert_eq!(admissibility_of_order(&g, 2).unwrap(), 1);
    let ends = common::chain_endpoints(&g, 2, 2, 2);
    assert_eq!(ends.into_iter().collect::<Vec<_>>(), vec![0, 1]);
    assert_eq!(chain_endpoint_bound(1, 2, 2), 2);
}
