//! Exact treewidth on small instances, with a witnessing decomposition.
//!
//! Dynamic program over elimination prefixes: for a set `S` of eliminated
//! vertices, `dp[S]` is the least possible maximum elimination degree, where
//! eliminating `v` after `S` costs the number of vertices outside `S + v`
//! reachable from `v` through `S`. Exact only; no heuristic width is ever
//! reported.

use crate::decomposition::{validate_tree_decomposition, TreeDecomposition};
use crate::graph::Graph;
use std::collections::BTreeSet;

pub const DEFAULT_TW_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwError {
    #[error("instance has {0} vertices, above the exact cap {1}")]
    CapExceeded(usize, usize),
    #[error("treewidth of the empty graph is undefined here")]
    EmptyGraph,
}

/// Exact treewidth with the default instance cap.
pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition), TwError> {
    exact_treewidth_with_cap(g, DEFAULT_TW_CAP)
}

/// Exact treewidth of graphs with at most `cap` vertices.
pub fn exact_treewidth_with_cap(g: &Graph, cap: usize) -> Result<(usize, TreeDecomposition), TwError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(TwError::EmptyGraph);
    }
    if n > cap {
        return Err(TwError::CapExceeded(n, cap));
    }

    // Solve per connected component; treewidth is the max, and the
    // decompositions chain into one tree.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for comp in g.components() {
        let (sub, map) = g.induced_subgraph(&comp).expect("component vertices are in range");
        let comp_order = component_elimination_order(&sub);
        order.extend(comp_order.into_iter().map(|v| map.to_old(v)));
    }
    let (width, td) = decomposition_from_elimination(g, &order);
    debug_assert_eq!(
        validate_tree_decomposition(g, &td).map(|r| r.width),
        Ok(width)
    );
    Ok((width, td))
}

/// Optimal elimination order of a connected graph by subset DP.
fn component_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    assert!(n <= 26, "component too large for subset DP");
    if n == 1 {
        return vec![0];
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();

    // q(v, S): #vertices outside S+v adjacent to v or linked via S.
    let fill_degree = |v: usize, s: u32| -> u8 {
        let mut reach = adj[v];
        loop {
            let mut grow = reach;
            let mut inside = reach & s;
            while inside != 0 {
                let u = inside.trailing_zeros() as usize;
                inside &= inside - 1;
                grow |= adj[u];
            }
            grow &= !(1 << v);
            if grow == reach {
                break;
            }
            reach = grow;
        }
        (reach & !s & !(1 << v)).count_ones() as u8
    };

    let mut dp = vec![u8::MAX; (full as usize) + 1];
    dp[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let prev = dp[rest as usize];
            if prev >= best {
                continue;
            }
            let cost = prev.max(fill_degree(v, rest));
            if cost < best {
                best = cost;
            }
        }
        dp[s as usize] = best;
    }

    // Reconstruct: order[i] is eliminated i-th; walk prefixes backwards.
    let mut order = vec![0usize; n];
    let mut s = full;
    for pos in (0..n).rev() {
        let mut chosen = None;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            if dp[rest as usize].max(fill_degree(v, rest)) == dp[s as usize] {
                chosen = Some(v);
                break;
            }
        }
        let v = chosen.expect("dp table is consistent");
        order[pos] = v;
        s &= !(1 << v);
    }
    order
}

/// Builds the tree-decomposition induced by an elimination order: eliminate
/// in order, each vertex's bag is itself plus its current (fill) neighbors,
/// and each bag hangs below the bag of its earliest-later fill neighbor.
pub fn decomposition_from_elimination(g: &Graph, order: &[usize]) -> (usize, TreeDecomposition) {
    let n = g.vertex_count();
    assert_eq!(order.len(), n);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut work: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let nb: Vec<usize> = work[v].iter().copied().collect();
        let mut bag: BTreeSet<usize> = nb.iter().copied().collect();
        bag.insert(v);
        bags[v] = bag;
        // Fill the neighborhood into a clique, then delete v.
        for (ai, &a) in nb.iter().enumerate() {
            work[a].remove(&v);
            for &b in nb.iter().skip(ai + 1) {
                work[a].insert(b);
                work[b].insert(a);
            }
        }
        // Attach below the next-eliminated neighbor.
        if let Some(&p) = nb.iter().min_by_key(|&&w| pos[w]) {
            parent[v] = Some(p);
        } else if i + 1 < n {
            // Isolated at elimination time: chain to the next in order to
            // keep the node graph a tree.
            parent[v] = Some(order[i + 1]);
        }
    }
    let tree_edges: Vec<(usize, usize)> = (0..n)
        .filter_map(|v| parent[v].map(|p| (v, p)))
        .collect();
    let tree = Graph::from_edges(n, &tree_edges).expect("elimination tree is simple");
    let width = bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1;
    (width, TreeDecomposition { tree, bags })
}

/// The witnesses accepted by [`tw_lower_bound_from_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WitnessKind {
    Grid { k: usize },
    Wall { k: usize },
    Biclique { s: usize },
    Clique { s: usize },
}

impl WitnessKind {
    /// The treewidth lower bound the witness certifies: `k` for grids, `k`
    /// for walls (via their grid induced minor), `s` for bicliques, `s - 1`
    /// for cliques. Degenerate one-vertex patterns give 0.
    pub fn bound(&self) -> usize {
        match *self {
            WitnessKind::Grid { k } => {
                if k >= 2 {
                    k
                } else {
                    0
                }
            }
            WitnessKind::Wall { k } => k,
            WitnessKind::Biclique { s } => s,
            WitnessKind::Clique { s } => s.saturating_sub(1),
        }
    }

    pub fn pattern(&self) -> Graph {
        match *self {
            WitnessKind::Grid { k } => crate::constructions::grid(k).expect("k >= 1").graph,
            WitnessKind::Wall { k } => crate::constructions::wall(k).expect("k >= 2").graph,
            WitnessKind::Biclique { s } => crate::constructions::biclique(s, s),
            WitnessKind::Clique { s } => crate::constructions::complete(s),
        }
    }
}

/// Validates `model` as a minor model of the claimed pattern in `g` and
/// returns the treewidth lower bound it certifies. Monotone under minors, so
/// plain-minor models qualify.
pub fn tw_lower_bound_from_witness(
    g: &Graph,
    kind: WitnessKind,
    model: &crate::minor::MinorModel,
) -> Result<usize, crate::minor::ModelViolation> {
    let pattern = kind.pattern();
    if model.pattern != pattern {
        return Err(crate::minor::ModelViolation::PatternMismatch {
            expected: format!("{kind:?}"),
        });
    }
    crate::minor::validate_model(g, model)?;
    Ok(kind.bound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{biclique, complete, grid, path};

    #[test]
    fn cliques_trees_grids() {
        assert_eq!(exact_treewidth(&complete(5)).unwrap().0, 4);
        assert_eq!(exact_treewidth(&path(2)).unwrap().0, 1);
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(exact_treewidth(&star).unwrap().0, 1);
        assert_eq!(exact_treewidth(&biclique(3, 3)).unwrap().0, 3);
        assert_eq!(exact_treewidth(&grid(3).unwrap().graph).unwrap().0, 3);
        assert_eq!(exact_treewidth(&complete(1)).unwrap().0, 0);
    }

    #[test]
    fn grid_four_and_disconnected() {
        assert_eq!(exact_treewidth(&grid(4).unwrap().graph).unwrap().0, 4);
        // K_4 plus isolated vertices plus a path.
        let mut edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        edges.push((6, 7));
        let g = Graph::from_edges(9, &edges).unwrap();
        let (w, td) = exact_treewidth(&g).unwrap();
        assert_eq!(w, 3);
        assert!(validate_tree_decomposition(&g, &td).is_ok());
    }

    #[test]
    fn returned_decomposition_revalidates() {
        for g in [grid(3).unwrap().graph, biclique(3, 3), crate::constructions::cycle(7)] {
            let (w, td) = exact_treewidth(&g).unwrap();
            let rep = validate_tree_decomposition(&g, &td).unwrap();
            assert_eq!(rep.width, w);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::empty(30);
        assert!(matches!(exact_treewidth(&g), Err(TwError::CapExceeded(30, _))));
        assert!(exact_treewidth_with_cap(&Graph::empty(30), 8).is_err());
        assert!(matches!(exact_treewidth(&Graph::empty(0)), Err(TwError::EmptyGraph)));
    }
}
