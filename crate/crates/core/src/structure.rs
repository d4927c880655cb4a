//! Tree-decomposition structure tools: torsos, the contracted variant `G_x`
//! (an induced minor of the host, unlike the torso), degree-transfer checks,
//! and the constructive bramble projection with hitting-set lifting.

use crate::bramble::{bramble_order_with_cap, validate_bramble, Bramble, BrambleViolation};
use crate::decomposition::{validate_tree_decomposition, TdViolation, TreeDecomposition};
use crate::graph::Graph;
use crate::minor::{validate_model, MinorModel, ModelViolation};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("node {0} is not a node of the decomposition")]
    BadNode(usize),
    #[error("decomposition invalid: {0}")]
    Td(#[from] TdViolation),
    #[error("bramble invalid: {0}")]
    Bramble(#[from] BrambleViolation),
    #[error("model invalid: {0}")]
    Model(#[from] ModelViolation),
    #[error("input bramble order {order} is below the required {required}")]
    OrderTooLow { order: usize, required: usize },
    #[error("projected bramble order {order} fell below {required}; this contradicts the projection lemma")]
    ProjectionFailed { order: usize, required: usize },
    #[error("hitting set does not hit projected set {0}")]
    NotAHittingSet(usize),
    #[error("{0}")]
    Other(String),
}

/// The torso of node `x`: the bag subgraph with every adhesion of `x`
/// completed into a clique. Vertices are the bag in sorted order; the map
/// ties them back to the host.
pub fn build_torso(
    g: &Graph,
    td: &TreeDecomposition,
    x: usize,
) -> Result<(Graph, crate::graph::VertexMap), StructureError> {
    validate_tree_decomposition(g, td)?;
    if x >= td.node_count() {
        return Err(StructureError::BadNode(x));
    }
    let bag: Vec<usize> = td.bags[x].iter().copied().collect();
    let (mut torso, map) = g
        .induced_subgraph(&bag)
        .map_err(|e| StructureError::Other(e.to_string()))?;
    let mut edges: Vec<(usize, usize)> = torso.edges().to_vec();
    for adhesion in td.adhesions_of(x) {
        let local: Vec<usize> = adhesion.iter().map(|&v| map.old_to_new(v).unwrap()).collect();
        for (i, &u) in local.iter().enumerate() {
            for &v in local.iter().skip(i + 1) {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    torso = Graph::from_edges(bag.len(), &edges).map_err(|e| StructureError::Other(e.to_string()))?;
    Ok((torso, map))
}

/// One equivalence class of false twins among the contracted components.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwinClass {
    /// Neighborhood in `G_x`, as `G_x` ids (all inside the bag).
    pub attachment: Vec<usize>,
    /// The components of `G - bag(x)` in this class (host ids); the first is
    /// the representative realizing the `G_x` vertex.
    pub components: Vec<Vec<usize>>,
}

/// The graph `G_x`: the bag `beta(x)` plus one independent vertex per
/// false-twin class of contracted components of `G - beta(x)`. `G_x` is an
/// induced minor of the host, certified by `model`.
#[derive(Clone, Debug)]
pub struct GxResult {
    pub graph: Graph,
    pub torso: Graph,
    /// Host ids of the bag, sorted; `G_x` vertex `i < bag.len()` is
    /// `bag[i]`, and vertex `bag.len() + c` represents twin class `c`.
    pub bag: Vec<usize>,
    pub classes: Vec<TwinClass>,
    /// Induced minor model of `G_x` in the host: singletons on the bag, the
    /// representative component per class.
    pub model: MinorModel,
}

impl GxResult {
    pub fn bag_len(&self) -> usize {
        self.bag.len()
    }

    pub fn independent_set(&self) -> Vec<usize> {
        (self.bag.len()..self.graph.vertex_count()).collect()
    }

    pub fn is_independent_vertex(&self, gx_id: usize) -> bool {
        gx_id >= self.bag.len()
    }
}

/// Builds `G_x` by contracting each component of `G - bag(x)` and keeping
/// one representative per false-twin class, with full provenance.
pub fn build_gx(g: &Graph, td: &TreeDecomposition, x: usize) -> Result<GxResult, StructureError> {
    validate_tree_decomposition(g, td)?;
    if x >= td.node_count() {
        return Err(StructureError::BadNode(x));
    }
    let bag: Vec<usize> = td.bags[x].iter().copied().collect();
    let bag_set: BTreeSet<usize> = bag.iter().copied().collect();
    let local = |v: usize| bag.binary_search(&v).expect("bag vertex");

    // Components of G - bag and their attachments.
    let outside: Vec<usize> = g.vertices().filter(|v| !bag_set.contains(v)).collect();
    let (out_graph, out_map) =
        g.induced_subgraph(&outside).map_err(|e| StructureError::Other(e.to_string()))?;
    let mut by_attachment: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for comp in out_graph.components() {
        let host_comp: Vec<usize> = comp.iter().map(|&v| out_map.to_old(v)).collect();
        let mut attach: BTreeSet<usize> = BTreeSet::new();
        for &v in &host_comp {
            for &w in g.neighbors(v) {
                if bag_set.contains(&w) {
                    attach.insert(local(w));
                }
            }
        }
        by_attachment.entry(attach.into_iter().collect()).or_default().push(host_comp);
    }

    let classes: Vec<TwinClass> = by_attachment
        .into_iter()
        .map(|(attachment, components)| TwinClass { attachment, components })
        .collect();

    let b = bag.len();
    let mut edges = Vec::new();
    for (i, &u) in bag.iter().enumerate() {
        for &w in g.neighbors(u) {
            if w > u && bag_set.contains(&w) {
                edges.push((i, local(w)));
            }
        }
    }
    for (c, class) in classes.iter().enumerate() {
        for &a in &class.attachment {
            edges.push((a, b + c));
        }
    }
    let graph = Graph::from_edges(b + classes.len(), &edges)
        .map_err(|e| StructureError::Other(e.to_string()))?;

    let mut branch_sets: Vec<Vec<usize>> = bag.iter().map(|&v| vec![v]).collect();
    for class in &classes {
        branch_sets.push(class.components[0].clone());
    }
    let model = MinorModel { pattern: graph.clone(), branch_sets, induced: true };
    validate_model(g, &model)?;

    let (torso, _) = build_torso(g, td, x)?;
    Ok(GxResult { graph, torso, bag, classes, model })
}

/// Report of the degree-transfer check: with adhesion size at most `h` and
/// at most `h` torso vertices of degree above `h`, every other `G_x` vertex
/// has degree at most `h + 2^(h+1)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeTransferReport {
    pub h: usize,
    pub adhesion_size: usize,
    pub adhesion_ok: bool,
    /// Torso vertices (as `G_x` ids) of torso-degree above `h`.
    pub heavy: Vec<usize>,
    pub heavy_ok: bool,
    pub bound: usize,
    pub max_degree_outside_heavy: usize,
    pub bound_holds: bool,
}

pub fn check_gx_degree_transfer(
    g: &Graph,
    td: &TreeDecomposition,
    x: usize,
    h: usize,
) -> Result<DegreeTransferReport, StructureError> {
    let rep = validate_tree_decomposition(g, td)?;
    let gx = build_gx(g, td, x)?;
    let heavy: Vec<usize> =
        (0..gx.bag_len()).filter(|&v| gx.torso.degree(v) > h).collect();
    let bound = h + (1usize << (h + 1));
    let max_deg = gx
        .graph
        .vertices()
        .filter(|v| !heavy.contains(v))
        .map(|v| gx.graph.degree(v))
        .max()
        .unwrap_or(0);
    Ok(DegreeTransferReport {
        h,
        adhesion_size: rep.adhesion_size,
        adhesion_ok: rep.adhesion_size <= h,
        heavy_ok: heavy.len() <= h,
        heavy,
        bound,
        max_degree_outside_heavy: max_deg,
        bound_holds: max_deg <= bound,
    })
}

/// Projects a `K_{h+1}` plain minor model in `G_x` to a `K_h` model in the
/// torso: drop the branch set that is a singleton in the independent set (at
/// most one exists; otherwise the lexicographically last set), then strip
/// the independent set from the rest.
pub fn project_minor_model_to_torso(
    gx: &GxResult,
    model: &MinorModel,
) -> Result<MinorModel, StructureError> {
    validate_model(&gx.graph, model)?;
    let hplus1 = model.branch_sets.len();
    if hplus1 == 0 {
        return Err(StructureError::Other("empty model".into()));
    }
    let is_i_singleton =
        |s: &Vec<usize>| s.len() == 1 && gx.is_independent_vertex(s[0]);
    let drop_idx = model
        .branch_sets
        .iter()
        .position(is_i_singleton)
        .unwrap_or(hplus1 - 1);
    let mut sets = Vec::with_capacity(hplus1 - 1);
    for (i, s) in model.branch_sets.iter().enumerate() {
        if i == drop_idx {
            continue;
        }
        let stripped: Vec<usize> =
            s.iter().copied().filter(|&v| !gx.is_independent_vertex(v)).collect();
        if stripped.is_empty() {
            return Err(StructureError::Other(format!(
                "branch set {i} lies entirely in the independent set"
            )));
        }
        sets.push(stripped);
    }
    let out = MinorModel {
        pattern: crate::constructions::complete(hplus1 - 1),
        branch_sets: sets,
        induced: false,
    };
    validate_model(&gx.torso, &out)?;
    Ok(out)
}

/// Result of projecting a bramble through a bounded-adhesion decomposition.
#[derive(Clone, Debug)]
pub struct BrambleProjection {
    pub node: usize,
    pub gx: GxResult,
    /// The projected bramble, in `G_x` ids.
    pub projected: Bramble,
    pub input_order: usize,
    pub projected_order: usize,
    pub projected_hitting_set: Vec<usize>,
}

pub const PROJECTION_ORDER_CAP: usize = 400_000;

/// Lemma flow: certify the input bramble's order (at least `h*p + 1`), pick
/// a node `x` common to every set's trace subtree (they pairwise intersect,
/// and subtrees of a tree have the Helly property; ties broken by least
/// node id), project each set by component contraction plus twin
/// representatives, and certify the projected order (at least `p + 1`) by
/// exact hitting-set search.
pub fn project_bramble(
    g: &Graph,
    td: &TreeDecomposition,
    bramble: &Bramble,
    h: usize,
    p: usize,
) -> Result<BrambleProjection, StructureError> {
    let rep = validate_tree_decomposition(g, td)?;
    if rep.adhesion_size > h {
        return Err(StructureError::Other(format!(
            "adhesion size {} exceeds h = {h}",
            rep.adhesion_size
        )));
    }
    validate_bramble(g, bramble)?;
    let (order, _) = bramble_order_with_cap(g, bramble, PROJECTION_ORDER_CAP)?;
    let required = h * p + 1;
    if order < required {
        return Err(StructureError::OrderTooLow { order, required });
    }

    // Helly node: iterated intersection of the trace subtrees.
    let t = td.node_count();
    let mut common: BTreeSet<usize> = (0..t).collect();
    for set in &bramble.sets {
        let nodes: BTreeSet<usize> = (0..t)
            .filter(|&y| set.iter().any(|v| td.bags[y].contains(v)))
            .collect();
        common = common.intersection(&nodes).copied().collect();
    }
    let x = *common.iter().next().ok_or_else(|| {
        StructureError::Other("trace subtrees have empty intersection; bramble or td invalid".into())
    })?;

    let gx = build_gx(g, td, x)?;
    let bag_set: BTreeSet<usize> = gx.bag.iter().copied().collect();
    let local = |v: usize| gx.bag.binary_search(&v).expect("bag vertex");

    // Host vertex -> twin class of its component (for vertices off the bag).
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, class) in gx.classes.iter().enumerate() {
        for comp in &class.components {
            for &v in comp {
                class_of.insert(v, c);
            }
        }
    }

    let mut projected_sets = Vec::with_capacity(bramble.sets.len());
    for set in &bramble.sets {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &v in set {
            if bag_set.contains(&v) {
                out.insert(local(v));
            } else {
                out.insert(gx.bag_len() + class_of[&v]);
            }
        }
        projected_sets.push(out.into_iter().collect());
    }
    let projected = Bramble::new(projected_sets);
    validate_bramble(&gx.graph, &projected)?;
    let (projected_order, hitting) = bramble_order_with_cap(&gx.graph, &projected, PROJECTION_ORDER_CAP)?;
    if projected_order < p + 1 {
        return Err(StructureError::ProjectionFailed { order: projected_order, required: p + 1 });
    }
    Ok(BrambleProjection {
        node: x,
        gx,
        projected,
        input_order: order,
        projected_order,
        projected_hitting_set: hitting,
    })
}

/// Lifts a hitting set of the projected bramble back to the host: bag
/// vertices map to themselves, independent-set vertices are replaced by
/// their at most `h` neighbors. The result has size at most `h * |z|` and
/// hits the original bramble (both checked).
pub fn lift_hitting_set(
    gx: &GxResult,
    original: &Bramble,
    projected: &Bramble,
    z: &[usize],
    h: usize,
) -> Result<Vec<usize>, StructureError> {
    // z must hit the projected bramble.
    for (i, set) in projected.sets.iter().enumerate() {
        if !set.iter().any(|v| z.contains(v)) {
            return Err(StructureError::NotAHittingSet(i));
        }
    }
    let mut lifted: BTreeSet<usize> = BTreeSet::new();
    for &v in z {
        if gx.is_independent_vertex(v) {
            for &w in gx.graph.neighbors(v) {
                lifted.insert(gx.bag[w]);
            }
        } else {
            lifted.insert(gx.bag[v]);
        }
    }
    let lifted: Vec<usize> = lifted.into_iter().collect();
    if lifted.len() > h * z.len() {
        return Err(StructureError::Other(format!(
            "lifted set has {} vertices, above h*|z| = {}",
            lifted.len(),
            h * z.len()
        )));
    }
    for (i, set) in original.sets.iter().enumerate() {
        if !set.iter().any(|v| lifted.contains(v)) {
            return Err(StructureError::NotAHittingSet(i));
        }
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, grid, path};

    fn bag(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn torso_cases() {
        // Single bag: torso is the graph itself.
        let g = grid(2).unwrap().graph;
        let td = TreeDecomposition { tree: Graph::empty(1), bags: vec![bag(&[0, 1, 2, 3])] };
        let (torso, _) = build_torso(&g, &td, 0).unwrap();
        assert_eq!(torso, g);

        // Path with size-2 bags: middle torso is the edge.
        let g = path(3);
        let td = TreeDecomposition { tree: path(2), bags: vec![bag(&[0, 1]), bag(&[1, 2])] };
        let (torso, _) = build_torso(&g, &td, 1).unwrap();
        assert_eq!(torso, complete(2));

        // Star decomposition with a 2-vertex adhesion that is non-adjacent
        // in g: the torso adds that edge.
        let g = Graph::from_edges(4, &[(0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        let td = TreeDecomposition {
            tree: path(2),
            bags: vec![bag(&[0, 1, 2]), bag(&[0, 1, 3])],
        };
        let (torso, map) = build_torso(&g, &td, 0).unwrap();
        let (u, v) = (map.old_to_new(0).unwrap(), map.old_to_new(1).unwrap());
        assert!(torso.has_edge(u, v));
        assert!(!g.has_edge(0, 1));

        assert!(build_torso(&g, &td, 7).is_err());
    }

    #[test]
    fn gx_empty_outside() {
        let g = grid(2).unwrap().graph;
        let td = TreeDecomposition { tree: Graph::empty(1), bags: vec![bag(&[0, 1, 2, 3])] };
        let gx = build_gx(&g, &td, 0).unwrap();
        assert_eq!(gx.graph, g);
        assert!(gx.classes.is_empty());
    }

    #[test]
    fn gx_twin_components_merge() {
        // Two outside components with the same attachment: one representative.
        let g = Graph::from_edges(5, &[(0, 1), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        let td = TreeDecomposition {
            tree: path(3),
            bags: vec![bag(&[0, 1, 2]), bag(&[0, 1, 3]), bag(&[0, 1, 4])],
        };
        let gx = build_gx(&g, &td, 0).unwrap();
        assert_eq!(gx.classes.len(), 1);
        assert_eq!(gx.classes[0].components.len(), 2);
        assert_eq!(gx.graph.vertex_count(), 4);
        // The certifying model re-validates (done inside build_gx), and the
        // independent vertex has the right attachment.
        let class = &gx.classes[0];
        assert_eq!(class.attachment, vec![0, 1]);
    }

    #[test]
    fn gx_is_induced_minor_certified() {
        let g = grid(3).unwrap().graph;
        let td = TreeDecomposition {
            tree: path(2),
            bags: vec![bag(&[0, 1, 2, 3, 4, 5]), bag(&[3, 4, 5, 6, 7, 8])],
        };
        let gx = build_gx(&g, &td, 0).unwrap();
        assert!(validate_model(&g, &gx.model).is_ok());
        assert_eq!(gx.model.branch_sets.len(), gx.graph.vertex_count());
    }

    #[test]
    fn degree_transfer_trivial_decomposition() {
        let g = grid(3).unwrap().graph;
        let td = TreeDecomposition {
            tree: Graph::empty(1),
            bags: vec![bag(&(0..9).collect::<Vec<_>>())],
        };
        let rep = check_gx_degree_transfer(&g, &td, 0, 2).unwrap();
        assert!(rep.bound_holds);
        assert_eq!(rep.adhesion_size, 0);
    }

    #[test]
    fn torso_projection_drops_i_singleton() {
        // K_4 on the bag, one outside vertex attached to three bag vertices.
        let mut edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        edges.extend([(4, 0), (4, 1), (4, 2)]);
        let g = Graph::from_edges(5, &edges).unwrap();
        let td = TreeDecomposition {
            tree: path(2),
            bags: vec![bag(&[0, 1, 2, 3]), bag(&[0, 1, 2, 4])],
        };
        let gx = build_gx(&g, &td, 0).unwrap();
        // K_4 model: three bag singletons plus the I-singleton.
        let model = MinorModel {
            pattern: complete(4),
            branch_sets: vec![vec![0], vec![1], vec![2], vec![4]],
            induced: false,
        };
        let projected = project_minor_model_to_torso(&gx, &model).unwrap();
        assert_eq!(projected.branch_sets, vec![vec![0], vec![1], vec![2]]);

        // A model disjoint from I loses its last set.
        let model = MinorModel {
            pattern: complete(3),
            branch_sets: vec![vec![0], vec![1], vec![2]],
            induced: false,
        };
        let projected = project_minor_model_to_torso(&gx, &model).unwrap();
        assert_eq!(projected.branch_sets.len(), 2);
    }

    #[test]
    fn single_bag_projection_is_identity() {
        let g = grid(3).unwrap().graph;
        let td = TreeDecomposition {
            tree: Graph::empty(1),
            bags: vec![bag(&(0..9).collect::<Vec<_>>())],
        };
        let crosses = crate::fixtures::crosses_bramble(&grid(3).unwrap());
        let proj = project_bramble(&g, &td, &crosses, 1, 3).unwrap();
        assert_eq!(proj.node, 0);
        assert_eq!(proj.input_order, 4);
        assert_eq!(proj.projected_order, 4);
    }

    #[test]
    fn gamma3_crosses_through_adhesion_one() {
        // Gamma_3 with a pendant-style decomposition: big bag plus a bag
        // {v} for one vertex; adhesion 1.
        let g = grid(3).unwrap().graph;
        let td = TreeDecomposition {
            tree: path(2),
            bags: vec![bag(&(0..9).collect::<Vec<_>>()), bag(&[4])],
        };
        let crosses = crate::fixtures::crosses_bramble(&grid(3).unwrap());
        let proj = project_bramble(&g, &td, &crosses, 1, 3).unwrap();
        assert!(proj.projected_order >= 4);
        // Lift the found hitting set.
        let z = proj.projected_hitting_set.clone();
        let lifted = lift_hitting_set(&proj.gx, &crosses, &proj.projected, &z, 1).unwrap();
        assert!(lifted.len() <= z.len());
    }

    #[test]
    fn lift_replaces_i_vertices_by_neighbors() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (1, 4), (3, 4)]).unwrap();
        let td = TreeDecomposition {
            tree: path(2),
            bags: vec![bag(&[0, 1, 2]), bag(&[0, 1, 3, 4])],
        };
        let gx = build_gx(&g, &td, 0).unwrap();
        assert_eq!(gx.classes.len(), 1);
        let i_vertex = gx.bag_len();
        // Brambles: original on host, projected on G_x. As at a Helly node,
        // the original set meets the bag.
        let original = Bramble::new(vec![vec![1, 3, 4]]);
        let projected = Bramble::new(vec![vec![1, i_vertex]]);
        let lifted = lift_hitting_set(&gx, &original, &projected, &[i_vertex], 2).unwrap();
        assert_eq!(lifted, vec![0, 1]);
        assert!(lift_hitting_set(&gx, &original, &projected, &[0], 2).is_err());
    }
}
