//! Seeded instance generators for tests, examples, and experiments. These
//! are scaffolding, not constructions from the underlying theory: they exist
//! to produce valid inputs (hosts with planted structure, decomposed random
//! graphs, brambles with known order) whose ground truth is known by
//! construction.

use crate::bramble::Bramble;
use crate::constructions::{subdivide, wall, GridGraph, SubdivisionLengths};
use crate::decomposition::TreeDecomposition;
use crate::graph::Graph;
use crate::minor::MinorModel;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Erdos-Renyi `G(n, p)` with a fixed seed.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("gnp edges are simple")
}

/// The crosses bramble of the `k x k` grid, of order exactly `k + 1`:
/// crosses confined to the first `k-1` rows and columns, plus the last row,
/// plus the last column without its corner. (Unrestricted crosses only reach
/// order `k`: a diagonal hits them all.)
pub fn crosses_bramble(g: &GridGraph) -> Bramble {
    let k = g.k;
    assert!(k >= 2);
    let mut sets = Vec::new();
    for r in 0..k - 1 {
        for c in 0..k - 1 {
            let mut cross: Vec<usize> = (0..k - 1).map(|j| g.index(r, j)).collect();
            cross.extend((0..k - 1).map(|i| g.index(i, c)));
            sets.push(cross);
        }
    }
    sets.push((0..k).map(|j| g.index(k - 1, j)).collect());
    sets.push((0..k - 1).map(|i| g.index(i, k - 1)).collect());
    Bramble::new(sets)
}

/// A random graph together with a valid tree-decomposition of adhesion at
/// most `h`: the decomposition is grown first (each child bag keeps at most
/// `h` parent vertices and adds fresh ones), then the graph is a random
/// subgraph of the union of bag cliques, so both axioms hold by
/// construction.
pub fn random_decomposed_instance(
    nodes: usize,
    bag_size: usize,
    h: usize,
    edge_prob: f64,
    seed: u64,
) -> (Graph, TreeDecomposition) {
    assert!(nodes >= 1 && bag_size >= 1 && h <= bag_size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bags: Vec<BTreeSet<usize>> = Vec::with_capacity(nodes);
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    let mut next_vertex = 0usize;
    for node in 0..nodes {
        let mut bag: BTreeSet<usize> = BTreeSet::new();
        if node > 0 {
            let parent = rng.gen_range(0..node);
            tree_edges.push((parent, node));
            let parent_bag: Vec<usize> = bags[parent].iter().copied().collect();
            let take = rng.gen_range(0..=h.min(parent_bag.len()));
            let mut shuffled = parent_bag;
            shuffled.shuffle(&mut rng);
            bag.extend(shuffled.into_iter().take(take));
        }
        while bag.len() < bag_size {
            bag.insert(next_vertex);
            next_vertex += 1;
        }
        bags.push(bag);
    }
    let tree = Graph::from_edges(nodes, &tree_edges).expect("tree edges");
    let mut candidate_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for bag in &bags {
        let vs: Vec<usize> = bag.iter().copied().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in vs.iter().skip(i + 1) {
                candidate_edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    let edges: Vec<(usize, usize)> = candidate_edges
        .into_iter()
        .filter(|_| rng.gen_bool(edge_prob))
        .collect();
    let g = Graph::from_edges(next_vertex, &edges).expect("bag-clique edges");
    (g, TreeDecomposition { tree, bags })
}

/// Like [`random_decomposed_instance`], but bag 0 is completed into a clique
/// `K_q` (with `q = bag_size`), so the singletons of that bag form a bramble
/// of order exactly `q`. Returns the bramble too.
pub fn planted_clique_decomposed(
    nodes: usize,
    q: usize,
    h: usize,
    edge_prob: f64,
    seed: u64,
) -> (Graph, TreeDecomposition, Bramble) {
    let (g0, td) = random_decomposed_instance(nodes, q, h, edge_prob, seed);
    let clique_bag: Vec<usize> = td.bags[0].iter().copied().collect();
    let mut edges: Vec<(usize, usize)> = g0.edges().to_vec();
    for (i, &u) in clique_bag.iter().enumerate() {
        for &v in clique_bag.iter().skip(i + 1) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    let g = Graph::from_edges(g0.vertex_count(), &edges).expect("still simple");
    let bramble = Bramble::new(clique_bag.iter().map(|&v| vec![v]).collect());
    (g, td, bramble)
}

/// A `(>=floor)`-subdivision of `wall(k)` together with its ground-truth
/// induced minor model of the wall (each wall vertex absorbs the interiors
/// of its incident direct paths with the smaller endpoint id).
pub fn wall_subdivision_host(
    k: usize,
    floor: usize,
    spread: usize,
    seed: u64,
) -> (Graph, MinorModel) {
    let w = wall(k).expect("k >= 2");
    let (host, spec) =
        subdivide(&w.graph, &SubdivisionLengths::AtLeast { floor, spread, seed }).expect("floor >= 1");
    let mut branch_sets: Vec<Vec<usize>> = (0..w.graph.vertex_count()).map(|v| vec![v]).collect();
    for (&(a, _), p) in &spec.paths {
        branch_sets[a].extend_from_slice(&p[1..p.len() - 1]);
    }
    let model = MinorModel { pattern: w.graph, branch_sets, induced: true };
    debug_assert!(crate::minor::validate_model(&host, &model).is_ok());
    (host, model)
}

/// Like [`wall_subdivision_host`], but one pattern junction owns the
/// interiors of all three of its incident direct paths, so its minimal
/// branch set is a tripod.
pub fn wall_subdivision_host_with_tripod(
    k: usize,
    floor: usize,
    spread: usize,
    seed: u64,
) -> (Graph, MinorModel) {
    assert!(k >= 9, "needs a degree-3 junction in wall(k/3)");
    let w = wall(k).expect("k >= 9");
    let m = k / 3;
    let pattern = crate::wall::subwall_pattern(&w, m, 3).expect("k >= 3m");
    let wm = wall(m).expect("m >= 3");
    let vm = wm
        .graph
        .vertices()
        .find(|&v| wm.graph.degree(v) == 3)
        .expect("m >= 3 walls have degree-3 vertices");
    let xi = pattern.junction[vm];
    let (host, spec) =
        subdivide(&w.graph, &SubdivisionLengths::AtLeast { floor, spread, seed }).expect("floor >= 1");
    let owner = |e: (usize, usize)| -> usize {
        if e.0 == xi || e.1 == xi {
            xi
        } else {
            e.0
        }
    };
    let mut branch_sets: Vec<Vec<usize>> = (0..w.graph.vertex_count()).map(|v| vec![v]).collect();
    for (&e, p) in &spec.paths {
        branch_sets[owner(e)].extend_from_slice(&p[1..p.len() - 1]);
    }
    let model = MinorModel { pattern: w.graph, branch_sets, induced: true };
    debug_assert!(crate::minor::validate_model(&host, &model).is_ok());
    (host, model)
}

/// A quasi-subdivision of `wall(k)` with triangles at every degree-3 vertex,
/// together with an induced minor model whose degree-3 branch sets induce
/// line graphs of tripods (triangle plus owned path interiors).
pub fn wall_quasi_host(k: usize, floor: usize, spread: usize, seed: u64) -> (Graph, MinorModel) {
    let w = wall(k).expect("k >= 2");
    let deg3: Vec<usize> = w.graph.vertices().filter(|&v| w.graph.degree(v) == 3).collect();
    let (host, spec) = crate::constructions::quasi_subdivide(
        &w.graph,
        &deg3,
        &SubdivisionLengths::AtLeast { floor, spread, seed },
    )
    .expect("walls are subcubic");
    let mut branch_sets: Vec<Vec<usize>> = spec
        .vertex_form
        .iter()
        .map(|f| f.host_vertices())
        .collect();
    for (&(a, _), p) in &spec.paths {
        branch_sets[a].extend_from_slice(&p[1..p.len() - 1]);
    }
    let model = MinorModel { pattern: w.graph, branch_sets, induced: true };
    debug_assert!(crate::minor::validate_model(&host, &model).is_ok());
    (host, model)
}

/// An adversarial wall-subdivision host: at one pattern junction the branch
/// set is a path whose third neighbor also touches it mid-path, exercising
/// the surgery branch of the extraction. With `triangle_case` the two touch
/// points are adjacent (the extraction must emit a triangle); otherwise a
/// segment is removed and the attach vertex becomes the junction.
///
/// Returns the host, the wall model, and the host vertex expected to appear
/// as the third corner / junction.
pub fn adversarial_wall_host(
    k: usize,
    triangle_case: bool,
    seed: u64,
) -> (Graph, MinorModel, usize) {
    assert!(k >= 9, "needs a degree-3 junction in wall(k/3)");
    let w = wall(k).expect("k >= 9");
    let m = k / 3;
    let pattern = crate::wall::subwall_pattern(&w, m, 3).expect("k >= 3m");
    let wm = wall(m).expect("m >= 3");
    // Pick the first wall(m) vertex of degree 3 and its wall(k) junction.
    let vm = wm
        .graph
        .vertices()
        .find(|&v| wm.graph.degree(v) == 3)
        .expect("m >= 3 walls have degree-3 vertices");
    let xi = pattern.junction[vm];
    let (xc, xr) = w.coords[xi];
    // Split xi's wall edges into horizontal and vertical.
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for &nb in w.graph.neighbors(xi) {
        let (c, r) = w.coords[nb];
        let e = (xi.min(nb), xi.max(nb));
        if r == xr {
            horizontal.push(e);
        } else {
            debug_assert_eq!(c, xc);
            vertical.push(e);
        }
    }
    assert_eq!(horizontal.len(), 2);
    assert_eq!(vertical.len(), 1);

    // Per-edge exact lengths: 2 everywhere, 3 on the owned edge we touch in
    // the non-triangle case (so the touch point sits one step away from xi).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lengths: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in w.graph.edges() {
        lengths.insert((a, b), 2 + rng.gen_range(0..=1usize));
    }
    let touched = horizontal[0];
    lengths.insert(touched, if triangle_case { 2 } else { 3 });
    lengths.insert(vertical[0], 2);
    let (sub, spec) =
        subdivide(&w.graph, &SubdivisionLengths::ExactPerEdge(lengths)).expect("valid lengths");

    // Ownership: min endpoint by default; xi owns both horizontal edges, and
    // the vertical edge goes to its other endpoint.
    let owner = |e: (usize, usize)| -> usize {
        if e == horizontal[0] || e == horizontal[1] {
            xi
        } else if e == vertical[0] {
            if e.0 == xi {
                e.1
            } else {
                e.0
            }
        } else {
            e.0
        }
    };
    let mut branch_sets: Vec<Vec<usize>> = (0..w.graph.vertex_count()).map(|v| vec![v]).collect();
    for (&e, p) in &spec.paths {
        branch_sets[owner(e)].extend_from_slice(&p[1..p.len() - 1]);
    }

    // The adversarial touch: q on the touched path (adjacent to xi in the
    // triangle case, one further in the other), f = the vertical interior
    // adjacent to xi.
    let path_of = |e: (usize, usize)| spec.paths[&e].clone();
    let from_xi = |e: (usize, usize)| -> Vec<usize> {
        let p = path_of(e);
        if p[0] == xi {
            p
        } else {
            p.into_iter().rev().collect()
        }
    };
    let tp = from_xi(touched);
    let q = if triangle_case { tp[1] } else { tp[2] };
    let vp = from_xi(vertical[0]);
    let f = vp[1];
    let mut edges: Vec<(usize, usize)> = sub.edges().to_vec();
    edges.push((q.min(f), q.max(f)));
    let host = Graph::from_edges(sub.vertex_count(), &edges).expect("simple");

    let model = MinorModel { pattern: w.graph, branch_sets, induced: true };
    debug_assert!(crate::minor::validate_model(&host, &model).is_ok());
    (host, model, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bramble::bramble_order;
    use crate::decomposition::validate_tree_decomposition;
    use crate::minor::validate_model;

    #[test]
    fn decomposed_instances_validate() {
        for seed in 0..20 {
            let (g, td) = random_decomposed_instance(6, 4, 3, 0.6, seed);
            let rep = validate_tree_decomposition(&g, &td).unwrap();
            assert!(rep.adhesion_size <= 3);
        }
    }

    #[test]
    fn planted_clique_bramble_has_known_order() {
        let (g, td, b) = planted_clique_decomposed(5, 5, 2, 0.5, 3);
        validate_tree_decomposition(&g, &td).unwrap();
        let (order, _) = bramble_order(&g, &b).unwrap();
        assert_eq!(order, 5);
    }

    #[test]
    fn crosses_order_is_k_plus_one() {
        let g2 = crate::constructions::grid(2).unwrap();
        let (order, _) = bramble_order(&g2.graph, &crosses_bramble(&g2)).unwrap();
        assert_eq!(order, 3);
    }

    #[test]
    fn hosts_validate() {
        let (host, model) = wall_subdivision_host(6, 2, 2, 5);
        validate_model(&host, &model).unwrap();
        let (host, model, _) = adversarial_wall_host(9, true, 1);
        validate_model(&host, &model).unwrap();
        let (host, model, _) = adversarial_wall_host(9, false, 2);
        validate_model(&host, &model).unwrap();
    }
}
