//! Property tests for the cross-module invariants: density vs degeneracy,
//! contraction sanity, refinement monotonicity, model transitivity, oracle
//! consistency, and the structural facts behind the wall pipeline.

use proptest::prelude::*;
use sparsetw::bramble::bramble_order;
use sparsetw::constructions::{complete, grid, subdivide, wall, SubdivisionLengths};
use sparsetw::expansion::nabla_r;
use sparsetw::fixtures::{gnp, planted_clique_decomposed, random_decomposed_instance};
use sparsetw::graph::Graph;
use sparsetw::minor::{
    compose_models, find_minor, refine_to_minimal, validate_model, Budget, MinorModel,
    SearchOutcome,
};
use sparsetw::rational::Rational;
use sparsetw::structure::{build_gx, project_minor_model_to_torso};
use sparsetw::treewidth::{exact_treewidth, tw_lower_bound_from_witness, WitnessKind};

/// Random simple graph strategy: `n` vertices, each candidate edge flipped
/// by a bit of the mask.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, mask)| {
        let mut edges = Vec::new();
        let mut bit = 0usize;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> (bit % 64) & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    })
}

/// Inflates each pattern vertex into a path blob and joins blob endpoints
/// for each pattern edge, producing a host with a valid induced minor model.
fn inflate(pattern: &Graph, sizes: &[usize]) -> (Graph, MinorModel) {
    let mut start = Vec::with_capacity(pattern.vertex_count());
    let mut next = 0usize;
    let mut edges = Vec::new();
    for (v, &sz) in sizes.iter().enumerate() {
        start.push(next);
        for i in 1..sz {
            edges.push((next + i - 1, next + i));
        }
        next += sz;
        let _ = v;
    }
    for &(a, b) in pattern.edges() {
        // Last vertex of blob a to first vertex of blob b.
        edges.push((start[a] + sizes[a] - 1, start[b]));
    }
    let host = Graph::from_edges(next, &edges).unwrap();
    let branch_sets: Vec<Vec<usize>> =
        (0..pattern.vertex_count()).map(|v| (start[v]..start[v] + sizes[v]).collect()).collect();
    let model = MinorModel { pattern: pattern.clone(), branch_sets, induced: true };
    (host, model)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Induced subgraphs never exceed the host's degeneracy in density.
    #[test]
    fn density_at_most_degeneracy(g in arb_graph(9), pick in any::<u64>()) {
        let n = g.vertex_count();
        let subset: Vec<usize> = (0..n).filter(|&v| pick >> v & 1 == 1).collect();
        prop_assume!(!subset.is_empty());
        let (sub, _) = g.induced_subgraph(&subset).unwrap();
        let (d, _) = g.degeneracy();
        prop_assert!(sub.edge_density().unwrap() <= Rational::from_integer(d as i64));
    }

    /// Contraction drops exactly one vertex and never creates loops or
    /// parallel edges (the Graph type would reject them).
    #[test]
    fn contraction_is_sane(g in arb_graph(9), idx in any::<usize>()) {
        prop_assume!(g.edge_count() > 0);
        let &(u, v) = &g.edges()[idx % g.edge_count()];
        let (h, map) = g.contract_edge(u, v).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count() - 1);
        prop_assert_eq!(map[u], map[v]);
        for &(a, b) in h.edges() {
            prop_assert_ne!(a, b);
        }
    }

    /// 2-connected graphs have minimum degree at least 2.
    #[test]
    fn two_connected_implies_min_degree_two(g in arb_graph(9)) {
        if g.is_two_connected() {
            for v in g.vertices() {
                prop_assert!(g.degree(v) >= 2);
            }
        }
    }

    /// Replaying the degeneracy order never exposes more than d later
    /// neighbors.
    #[test]
    fn degeneracy_order_replays(g in arb_graph(10)) {
        let (d, order) = g.degeneracy();
        let mut pos = vec![0usize; g.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for v in g.vertices() {
            let later = g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count();
            prop_assert!(later <= d);
        }
    }

    /// Refinement of a valid model stays valid and never grows any set.
    #[test]
    fn refinement_shrinks_and_validates(
        pattern in arb_graph(4),
        sizes in proptest::collection::vec(1usize..4, 4),
    ) {
        let sizes = &sizes[..pattern.vertex_count()];
        let (host, model) = inflate(&pattern, sizes);
        validate_model(&host, &model).unwrap();
        let refined = refine_to_minimal(&host, &model).unwrap();
        validate_model(&host, &refined).unwrap();
        let before: usize = model.branch_sets.iter().map(|s| s.len()).sum();
        let after: usize = refined.branch_sets.iter().map(|s| s.len()).sum();
        prop_assert!(after <= before);
        for (old, new) in model.branch_sets.iter().zip(&refined.branch_sets) {
            prop_assert!(new.iter().all(|v| old.contains(v)));
        }
    }

    /// Transitivity: composing A-in-B with B-in-C yields a valid A-in-C.
    #[test]
    fn model_composition_is_transitive(
        pattern in arb_graph(3),
        sizes1 in proptest::collection::vec(1usize..3, 3),
        sizes2 in proptest::collection::vec(1usize..3, 12),
    ) {
        let sizes1 = &sizes1[..pattern.vertex_count()];
        let (mid, inner) = inflate(&pattern, sizes1);
        let sizes2 = &sizes2[..mid.vertex_count()];
        let (host, outer) = inflate(&mid, sizes2);
        let composed = compose_models(&inner, &outer).unwrap();
        validate_model(&host, &composed).unwrap();
        prop_assert_eq!(composed.pattern, pattern);
    }

    /// nabla_r is monotone non-decreasing in r.
    #[test]
    fn nabla_monotone(g in arb_graph(7)) {
        let d0 = nabla_r(&g, 0).unwrap();
        let d1 = nabla_r(&g, 1).unwrap();
        let d2 = nabla_r(&g, 2).unwrap();
        prop_assert!(d0 <= d1);
        prop_assert!(d1 <= d2);
    }

    /// Branch vertices of a (>=2)-subdivision form an independent set, and
    /// the subdivision density bound holds.
    #[test]
    fn subdivision_invariants(pattern in arb_graph(5), floor in 2usize..4, seed in any::<u64>()) {
        let (g, spec) = subdivide(
            &pattern,
            &SubdivisionLengths::AtLeast { floor, spread: 2, seed },
        ).unwrap();
        for u in 0..spec.branch_count() {
            for v in u + 1..spec.branch_count() {
                prop_assert!(!g.has_edge(u, v));
            }
        }
        let l = spec.min_length();
        prop_assert!((g.edge_count() as i64) * (l as i64 - 1) <= (l as i64) * (g.vertex_count() as i64));
    }
}

/// Duality direction: tw(g) + 1 is at least the order of any validated
/// bramble; equality on the curated maximum brambles.
#[test]
fn treewidth_bramble_duality_direction() {
    for seed in 0..10u64 {
        let q = 3 + (seed % 3) as usize;
        let (g, _, b) = planted_clique_decomposed(4, q, 2, 0.5, seed);
        if g.vertex_count() > 20 {
            continue;
        }
        let (order, _) = bramble_order(&g, &b).unwrap();
        let (tw, _) = exact_treewidth(&g).unwrap();
        assert!(tw + 1 >= order, "seed {seed}: tw {tw} + 1 < order {order}");
    }
    // Equality cases: K_5 singletons and the grid crosses bramble.
    let k5 = complete(5);
    let singles = sparsetw::bramble::Bramble::new((0..5).map(|v| vec![v]).collect());
    let (order, _) = bramble_order(&k5, &singles).unwrap();
    assert_eq!(order, exact_treewidth(&k5).unwrap().0 + 1);
    let g3 = grid(3).unwrap();
    let (order, _) = bramble_order(&g3.graph, &sparsetw::fixtures::crosses_bramble(&g3)).unwrap();
    assert_eq!(order, exact_treewidth(&g3.graph).unwrap().0 + 1);
}

/// Witness lower bounds never exceed the exact treewidth where both run.
#[test]
fn witness_bounds_respect_exact_treewidth() {
    // Identity models of the pattern in itself.
    for k in [2usize, 3] {
        let g = grid(k).unwrap().graph;
        let model = MinorModel::identity(&g, true);
        let bound = tw_lower_bound_from_witness(&g, WitnessKind::Grid { k }, &model).unwrap();
        assert!(bound <= exact_treewidth(&g).unwrap().0);
    }
    let w = wall(3).unwrap().graph;
    let model = MinorModel::identity(&w, true);
    let bound = tw_lower_bound_from_witness(&w, WitnessKind::Wall { k: 3 }, &model).unwrap();
    let (tw, _) = exact_treewidth(&w).unwrap();
    assert!(bound <= tw);
    assert_eq!(bound, 3);

    for s in [2usize, 3] {
        let g = sparsetw::constructions::biclique(s, s);
        let model = MinorModel::identity(&g, true);
        let bound = tw_lower_bound_from_witness(&g, WitnessKind::Biclique { s }, &model).unwrap();
        assert_eq!(bound, exact_treewidth(&g).unwrap().0);
    }
    for s in [2usize, 4] {
        let g = complete(s);
        let model = MinorModel::identity(&g, true);
        let bound = tw_lower_bound_from_witness(&g, WitnessKind::Clique { s }, &model).unwrap();
        assert_eq!(bound, exact_treewidth(&g).unwrap().0);
    }
    // A planted K_{3,3} subdivision certifies bound 3 through its model.
    let (host, spec) = subdivide(
        &sparsetw::constructions::biclique(3, 3),
        &SubdivisionLengths::ExactUniform(2),
    )
    .unwrap();
    let mut branch_sets: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
    for (&(a, _), p) in &spec.paths {
        branch_sets[a].extend_from_slice(&p[1..p.len() - 1]);
    }
    let model = MinorModel {
        pattern: sparsetw::constructions::biclique(3, 3),
        branch_sets,
        induced: true,
    };
    let bound = tw_lower_bound_from_witness(&host, WitnessKind::Biclique { s: 3 }, &model).unwrap();
    assert_eq!(bound, 3);
}

/// Lemma about degree transfer, as a property: whenever a K_{h+1} plain
/// minor is found in G_x, stripping the independent set leaves a valid K_h
/// model in the torso.
#[test]
fn gx_clique_projection_property() {
    let budget = Budget { max_host: 40, max_pattern: 6, max_nodes: 1_000_000 };
    let mut hits = 0usize;
    for seed in 0..60u64 {
        let h = 1 + (seed % 3) as usize;
        let (g, td) = random_decomposed_instance(4, 4 + h, h, 0.7, seed);
        if g.vertex_count() > 20 {
            continue;
        }
        for x in 0..td.node_count() {
            let gx = build_gx(&g, &td, x).unwrap();
            match find_minor(&gx.graph, &complete(h + 1), &budget) {
                SearchOutcome::Found(model) => {
                    let projected = project_minor_model_to_torso(&gx, &model).unwrap();
                    validate_model(&gx.torso, &projected).unwrap();
                    assert_eq!(projected.branch_sets.len(), h);
                    hits += 1;
                }
                SearchOutcome::Absent => {}
                SearchOutcome::BudgetExhausted => {}
            }
        }
    }
    assert!(hits >= 10, "property exercised only {hits} times");
}

/// The structural accounting behind the thinning lemma: in an extracted
/// quasi-subdivision, removing one triangle edge per triangle and then one
/// edge per remaining degree-3 vertex leaves a graph with maximum degree 2
/// and no cycle through any former junction (a disjoint union of paths when
/// the wall index is at least 3).
#[test]
fn quasi_subdivision_path_decomposition_accounting() {
    let (host, model) = sparsetw::fixtures::wall_quasi_host(9, 2, 1, 11);
    let (witness, _) = sparsetw::wall::extract_wall_quasi_subdivision(&host, &model).unwrap();
    let set = witness.vertex_set();
    let (sub, map) = host.induced_subgraph(&set).unwrap();
    let local = |h: usize| map.old_to_new(h).unwrap();

    let mut removed: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    let mut removals = 0usize;
    for f in &witness.forms {
        if let sparsetw::wall::QuasiFormRepr::Triangle { corners } = f {
            let (a, b) = (local(corners[0].1), local(corners[1].1));
            removed.insert((a.min(b), a.max(b)));
            removals += 1;
        }
    }
    // Then one edge per remaining degree-3 vertex.
    let degree = |v: usize, removed: &std::collections::BTreeSet<(usize, usize)>| {
        sub.neighbors(v)
            .iter()
            .filter(|&&w| !removed.contains(&(v.min(w), v.max(w))))
            .count()
    };
    for v in sub.vertices() {
        while degree(v, &removed) > 2 {
            let w = *sub
                .neighbors(v)
                .iter()
                .find(|&&w| !removed.contains(&(v.min(w), v.max(w))))
                .unwrap();
            removed.insert((v.min(w), v.max(w)));
            removals += 1;
        }
    }
    let q = wall(witness.m)
        .unwrap()
        .graph
        .vertices()
        .filter(|&v| wall(witness.m).unwrap().graph.degree(v) == 3)
        .count();
    assert!(removals <= 2 * q, "{removals} removals for q = {q}");
    // What remains is a disjoint union of paths: max degree <= 2, acyclic.
    let rest: Vec<(usize, usize)> = sub
        .edges()
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .collect();
    let rest_graph = Graph::from_edges(sub.vertex_count(), &rest).unwrap();
    assert!(rest_graph.max_degree() <= 2);
    let components = rest_graph.components().len();
    assert_eq!(
        rest_graph.edge_count() + components,
        rest_graph.vertex_count(),
        "a cycle survived the removals"
    );
    // And the counted bound: |E| <= |V| - 1 + 2q.
    assert!(sub.edge_count() <= sub.vertex_count() - 1 + 2 * q);
}

/// Every gnp graph within caps keeps nabla_0 equal to its densest-subgraph
/// density and at least its overall density.
#[test]
fn nabla_zero_bounds_density() {
    for seed in 0..10u64 {
        let g = gnp(7, 0.4, seed);
        if g.vertex_count() == 0 {
            continue;
        }
        let d0 = nabla_r(&g, 0).unwrap();
        assert!(d0 >= g.edge_density().unwrap());
    }
}
