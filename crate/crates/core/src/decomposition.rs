//! Tree-decompositions: validation of the two axioms, width, and adhesion.

use crate::bitset::BitSet;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A tree of bags over a host graph. `tree` must be acyclic and connected;
/// `bags[x]` is the vertex set of node `x`.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: Vec<BTreeSet<usize>>,
}

/// JSON schema for tree-decompositions: node count, tree edges, bags.
#[derive(Serialize, Deserialize)]
pub struct TreeDecompositionJson {
    pub nodes: usize,
    pub tree_edges: Vec<(usize, usize)>,
    pub bags: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn node_count(&self) -> usize {
        self.tree.vertex_count()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn to_json(&self) -> TreeDecompositionJson {
        TreeDecompositionJson {
            nodes: self.node_count(),
            tree_edges: self.tree.edges().to_vec(),
            bags: self.bags.iter().map(|b| b.iter().copied().collect()).collect(),
        }
    }

    pub fn from_json(json: &TreeDecompositionJson) -> Result<TreeDecomposition, TdViolation> {
        let tree = Graph::from_edges(json.nodes, &json.tree_edges)
            .map_err(|e| TdViolation::Malformed(e.to_string()))?;
        if json.bags.len() != json.nodes {
            return Err(TdViolation::Malformed(format!(
                "{} bags for {} nodes",
                json.bags.len(),
                json.nodes
            )));
        }
        let bags = json.bags.iter().map(|b| b.iter().copied().collect()).collect();
        Ok(TreeDecomposition { tree, bags })
    }

    /// All non-empty intersections `bag(x) & bag(y)` with `y != x`,
    /// deduplicated.
    pub fn adhesions_of(&self, x: usize) -> Vec<BTreeSet<usize>> {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for y in 0..self.node_count() {
            if y == x {
                continue;
            }
            let inter: BTreeSet<usize> = self.bags[x].intersection(&self.bags[y]).copied().collect();
            if !inter.is_empty() && !out.contains(&inter) {
                out.push(inter);
            }
        }
        out
    }
}

/// A specific violation of the tree-decomposition axioms, naming the
/// offending vertex or edge.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdViolation {
    #[error("malformed decomposition: {0}")]
    Malformed(String),
    #[error("the node graph is not a tree (nodes={nodes}, edges={edges}, connected={connected})")]
    NotATree { nodes: usize, edges: usize, connected: bool },
    #[error("bag {bag} mentions vertex {vertex} outside the host graph")]
    ForeignVertex { bag: usize, vertex: usize },
    #[error("edge {u}-{v} of the host is covered by no bag")]
    EdgeUncovered { u: usize, v: usize },
    #[error("vertex {vertex} appears in no bag")]
    VertexMissing { vertex: usize },
    #[error("the bags containing vertex {vertex} do not induce a subtree")]
    TraceDisconnected { vertex: usize },
}

/// Report for a valid decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdReport {
    pub width: usize,
    /// Max `|bag(x) & bag(y)|` over distinct node pairs with non-empty
    /// intersection, adjacent or not; 0 when no two bags intersect.
    pub adhesion_size: usize,
}

/// Checks both decomposition axioms and computes width and adhesion size.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<TdReport, TdViolation> {
    let t = td.node_count();
    if td.bags.len() != t {
        return Err(TdViolation::Malformed(format!("{} bags for {t} nodes", td.bags.len())));
    }
    if t == 0 {
        return Err(TdViolation::Malformed("decomposition needs at least one node".into()));
    }
    if td.tree.edge_count() != t - 1 || !td.tree.is_connected() {
        return Err(TdViolation::NotATree {
            nodes: t,
            edges: td.tree.edge_count(),
            connected: td.tree.is_connected(),
        });
    }
    let n = g.vertex_count();
    for (x, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= n) {
            return Err(TdViolation::ForeignVertex { bag: x, vertex: v });
        }
    }
    // Edge coverage.
    for &(u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(TdViolation::EdgeUncovered { u, v });
        }
    }
    // Connected non-empty traces.
    for v in 0..n {
        let trace: Vec<usize> =
            (0..t).filter(|&x| td.bags[x].contains(&v)).collect();
        if trace.is_empty() {
            return Err(TdViolation::VertexMissing { vertex: v });
        }
        let set = BitSet::from_iter_with_capacity(t, trace.iter().copied());
        if !td.tree.is_connected_subset(&set) {
            return Err(TdViolation::TraceDisconnected { vertex: v });
        }
    }
    let width = td.bags.iter().map(|b| b.len()).max().unwrap() as i64 - 1;
    let mut adhesion = 0usize;
    for x in 0..t {
        for y in x + 1..t {
            let inter = td.bags[x].intersection(&td.bags[y]).count();
            adhesion = adhesion.max(inter);
        }
    }
    Ok(TdReport { width: width.max(0) as usize, adhesion_size: adhesion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::path;

    fn bag(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn single_bag_is_valid() {
        let g = crate::constructions::complete(4);
        let td = TreeDecomposition { tree: Graph::empty(1), bags: vec![bag(&[0, 1, 2, 3])] };
        let rep = validate_tree_decomposition(&g, &td).unwrap();
        assert_eq!(rep.width, 3);
        assert_eq!(rep.adhesion_size, 0);
    }

    #[test]
    fn path_of_bags() {
        let g = path(4);
        let td = TreeDecomposition {
            tree: path(3),
            bags: vec![bag(&[0, 1]), bag(&[1, 2]), bag(&[2, 3])],
        };
        let rep = validate_tree_decomposition(&g, &td).unwrap();
        assert_eq!(rep.width, 1);
        assert_eq!(rep.adhesion_size, 1);
    }

    #[test]
    fn violations_are_named() {
        let g = path(3);
        // Disconnected trace for vertex 0.
        let td = TreeDecomposition {
            tree: path(3),
            bags: vec![bag(&[0, 1]), bag(&[1, 2]), bag(&[0, 2])],
        };
        assert_eq!(
            validate_tree_decomposition(&g, &td),
            Err(TdViolation::TraceDisconnected { vertex: 0 })
        );

        let td = TreeDecomposition { tree: path(2), bags: vec![bag(&[0, 1]), bag(&[1])] };
        assert_eq!(
            validate_tree_decomposition(&g, &td),
            Err(TdViolation::EdgeUncovered { u: 1, v: 2 })
        );

        let td = TreeDecomposition {
            tree: Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            bags: vec![bag(&[0, 1]), bag(&[1, 2]), bag(&[2])],
        };
        assert!(matches!(
            validate_tree_decomposition(&g, &td),
            Err(TdViolation::NotATree { .. })
        ));
    }

    #[test]
    fn adhesion_over_all_distinct_pairs() {
        // Adhesion is computed over all distinct node pairs (the non-adjacent
        // leaf pair here shares {1,3} too, consistent with the tree-edge max).
        let g = Graph::from_edges(4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let td = TreeDecomposition {
            tree: Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap(),
            bags: vec![bag(&[1, 3]), bag(&[0, 3, 1]), bag(&[2, 3, 1])],
        };
        let rep = validate_tree_decomposition(&g, &td).unwrap();
        assert_eq!(rep.adhesion_size, 2);
        assert_eq!(td.adhesions_of(1), vec![bag(&[1, 3])]);
    }

    #[test]
    fn json_roundtrip() {
        let td = TreeDecomposition {
            tree: path(3),
            bags: vec![bag(&[0, 1]), bag(&[1, 2]), bag(&[2, 3])],
        };
        let json = serde_json::to_string(&td.to_json()).unwrap();
        let parsed: TreeDecompositionJson = serde_json::from_str(&json).unwrap();
        let back = TreeDecomposition::from_json(&parsed).unwrap();
        assert_eq!(back.bags, td.bags);
        assert_eq!(back.tree, td.tree);
    }
}
