//! Cross-module property tests for the pipeline and its stages.

use proptest::prelude::*;

use vcew_core::cut::{local_search_cut, repair_cut_connectivity, Cut};
use vcew_core::flow::{build_network, cancel_opposite_arcs, decompose_paths, max_flow, OrientedDemand};
use vcew_core::graph::{
    find_non_articulation_vertex, induced_subgraph, is_connected, validate, Edge, Graph,
};
use vcew_core::io::{format_canonical, parse_graph};
use vcew_core::star::{compute_h, verify_h_conditions, StarInstance};
use vcew_core::weighting::{
    greedy_targets, initial_parity_weighting, splice_star_colorizer, weight_graph, PipelineOptions,
};

/// Arbitrary graph from an edge mask over n vertices.
fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let bits = n * (n - 1) / 2;
        (Just(n), 0u64..(1u64 << bits)).prop_map(|(n, mask)| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weight_graph_end_to_end(g in graph_strategy(10)) {
        prop_assume!(validate(&g).is_ok());
        let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
        prop_assert!(cert.verdict.ok);
        for (_, w) in cert.weights.iter() {
            prop_assert!((1..=4).contains(&w));
        }
        // The designated colors are realized exactly.
        for v in 0..g.vertex_count() {
            prop_assert_eq!(cert.degrees[v], cert.colors[v]);
        }
        prop_assert!(cert.parity_ok());
    }

    #[test]
    fn splice_keeps_side_edges_in_23(g in graph_strategy(10)) {
        prop_assume!(is_connected(&g) && g.vertex_count() >= 3);
        let v0 = find_non_articulation_vertex(&g);
        let rest: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != v0).collect();
        let hsub = induced_subgraph(&g, &rest);
        let cut = repair_cut_connectivity(&hsub.graph, &local_search_cut(&hsub.graph, 0));
        let r = g.neighbors(v0)[0];
        let mu = initial_parity_weighting(&g, v0, &hsub, &cut, r).unwrap();
        let mut targets = greedy_targets(&g, v0, &mu);
        let omega = splice_star_colorizer(&g, v0, &mu, &mut targets).unwrap();
        for (e, w) in omega.iter() {
            if e.touches(v0) {
                prop_assert!((1..=4).contains(&w), "omega({}) = {}", e, w);
            } else {
                prop_assert!((2..=3).contains(&w), "omega({}) = {}", e, w);
            }
        }
    }

    #[test]
    fn star_instances_satisfy_all_conditions(
        n in 3usize..=10,
        edge_bits in proptest::collection::vec(any::<bool>(), 45),
        prefs in proptest::collection::vec(0i32..=10, 10),
    ) {
        // Star-closed graph on n vertices with random outer edges and
        // repaired-to-admissible pre-colors.
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        let mut bit = 0;
        let mut outer = Vec::new();
        for u in 1..n {
            for v in u + 1..n {
                if edge_bits[bit] {
                    outer.push((u, v));
                }
                bit += 1;
            }
        }
        edges.extend_from_slice(&outer);
        let graph = Graph::new(n, edges).unwrap();
        let mut g: Vec<i32> = (0..n).map(|v| prefs[v]).collect();
        for v in 1..n {
            while outer
                .iter()
                .any(|&(a, b)| (a == v && b < v && g[b] == g[v]) || (b == v && a < v && g[a] == g[v]))
            {
                g[v] += 1;
            }
        }
        // Repair once more in index order so later bumps cannot recreate
        // earlier conflicts.
        for v in 1..n {
            while outer.iter().any(|&(a, b)| a != b && ((a == v && g[b] == g[v]) || (b == v && g[a] == g[v]))) {
                g[v] += 1;
            }
        }
        let inst = match StarInstance::new(graph, 0, g) {
            Ok(inst) => inst,
            Err(e) => return Err(TestCaseError::fail(format!("inadmissible after repair: {e}"))),
        };
        let h = compute_h(&inst);
        prop_assert_eq!(verify_h_conditions(&inst, &h), Ok(()));
    }

    #[test]
    fn canonical_format_roundtrips(g in graph_strategy(9)) {
        let text = format_canonical(&g, None);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges(), g.edges());
    }
}

/// Paths from the decomposition are arc-disjoint walks through the cut:
/// internal vertices alternate sides and every hop uses a real arc at most
/// as often as it exists.
#[test]
fn decomposed_paths_alternate_and_stay_arc_disjoint() {
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for round in 0..300u64 {
        let n = 4 + (round % 5) as usize;
        let g = vcew_core::generate::gnp(n, 0.5, round + 1);
        let in_s: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let cut = Cut::new(&g, in_s);
        let mut demand = OrientedDemand::new();
        for e in g.edges() {
            if !cut.is_cut_edge(*e) && rng.random_bool(0.5) {
                let (u, v) = e.endpoints();
                if rng.random_bool(0.5) {
                    demand.insert(u, v);
                } else {
                    demand.insert(v, u);
                }
            }
        }
        let net = build_network(&g, &cut, &demand).unwrap();
        let flow = cancel_opposite_arcs(&max_flow(&net), &net);
        let paths = decompose_paths(&flow, &net).unwrap();
        assert_eq!(paths.len(), flow.value);
        let mut used: std::collections::HashMap<(usize, usize), usize> = Default::default();
        for path in &paths {
            assert_eq!(path[0], net.source);
            assert_eq!(*path.last().unwrap(), net.sink);
            let inner = &path[1..path.len() - 1];
            assert!(!inner.is_empty());
            for w in inner.windows(2) {
                assert!(cut.is_s(w[0]) != cut.is_s(w[1]), "sides must alternate");
                *used.entry((w[0], w[1])).or_default() += 1;
            }
            for &v in inner {
                assert!(v < g.vertex_count(), "internal nodes lie in the graph");
            }
        }
        for (&(a, b), &count) in &used {
            let available = net.arcs.iter().filter(|x| x.tail == a && x.head == b).count();
            assert!(count <= available, "hop {a}->{b} used {count} times, {available} arcs");
        }
    }
}

/// The identity certificate run: weighting the same graph twice yields
/// byte-identical certificates.
#[test]
fn repeated_runs_are_identical() {
    for seed in 0..20u64 {
        let g = vcew_core::generate::gnp(9, 0.4, seed);
        if validate(&g).is_err() {
            continue;
        }
        let a = weight_graph(&g, &PipelineOptions::default()).unwrap().render(true);
        let b = weight_graph(&g, &PipelineOptions::default()).unwrap().render(true);
        assert_eq!(a, b);
    }
}

/// Exactness of the greedy color separation: adjacent vertices always end
/// with different weighted degrees even across component boundaries glued
/// by relabeling.
#[test]
fn no_adjacent_degree_collisions_on_structured_graphs() {
    let graphs = vec![
        vcew_core::generate::path(7),
        vcew_core::generate::cycle(8),
        vcew_core::generate::complete(6),
        vcew_core::generate::star(9),
        vcew_core::generate::grid(3, 4),
        vcew_core::generate::random_regularish(10, 3, 3).unwrap(),
    ];
    for g in graphs {
        let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
        assert!(cert.verdict.ok);
        let degrees = &cert.degrees;
        for e in g.edges() {
            let (u, v) = e.endpoints();
            assert_ne!(degrees[u], degrees[v], "conflict on {e} of {g:?}");
        }
    }
}

/// A weighting must fail verification when tampered with; guards against
/// a verifier that always says ok.
#[test]
fn verifier_rejects_tampered_weightings() {
    let g = vcew_core::generate::complete(5);
    let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
    let mut bad = cert.weights.clone();
    // Force every weight to the same value: K5 degrees all collide.
    for e in g.edges() {
        bad.set(*e, 2);
    }
    let verdict = vcew_core::verify_weighting(&g, &bad).unwrap();
    assert!(!verdict.ok);
    assert_eq!(verdict.conflicts.len(), g.edge_count());
}

/// Determinism of the non-articulation choice and the whole front end on
/// a graph with many symmetric choices.
#[test]
fn deterministic_choices_on_symmetric_input() {
    let g = vcew_core::generate::cycle(6);
    assert_eq!(find_non_articulation_vertex(&g), 0);
    let e = Edge::new(0, 1);
    let cert = weight_graph(&g, &PipelineOptions::default()).unwrap();
    let w1 = cert.weights.weight(e);
    let cert2 = weight_graph(&g, &PipelineOptions::default()).unwrap();
    assert_eq!(w1, cert2.weights.weight(e));
}
