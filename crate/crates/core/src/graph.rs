//! Immutable simple undirected graphs with contiguous vertex ids, plus the
//! elementary predicates and measures everything else consumes.
//!
//! Graphs never mutate after construction; derivations return a new graph
//! together with an explicit vertex map so that minor / induced-minor chains
//! can be composed back to the original host.

use crate::bitset::BitSet;
use crate::rational::Rational;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{0} is not an edge")]
    NotAnEdge(String),
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    masks: Vec<BitSet>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edges.len())
    }
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut set = std::collections::BTreeSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); n];
        let mut masks = vec![BitSet::new(n); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
            masks[u].insert(v);
            masks[v].insert(u);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(Graph { n, neighbors, edges, masks })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, &[]).expect("empty graph is always valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && u != v && self.masks[u].contains(v)
    }

    pub fn neighbor_mask(&self, v: usize) -> &BitSet {
        &self.masks[v]
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// True if some edge joins `a` and `b` (as vertex sets).
    pub fn sets_adjacent(&self, a: &BitSet, b: &BitSet) -> bool {
        a.iter().any(|u| self.masks[u].intersects(b))
    }

    /// True if `set` induces a connected subgraph. The empty set is not
    /// connected.
    pub fn is_connected_subset(&self, set: &BitSet) -> bool {
        let mut it = set.iter();
        let Some(start) = it.next() else { return false };
        let mut seen = BitSet::new(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        set.is_subset_of(&seen)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let all = BitSet::from_iter_with_capacity(self.n, 0..self.n);
        self.is_connected_subset(&all)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.neighbors[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Subgraph induced by `s`, plus the map between old and new ids.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Graph, VertexMap), GraphError> {
        let mut sorted: Vec<usize> = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
        }
        let map = VertexMap::from_new_to_old(self.n, sorted);
        let mut edges = Vec::new();
        for (new_u, &old_u) in map.new_to_old.iter().enumerate() {
            for &old_w in &self.neighbors[old_u] {
                if old_w > old_u {
                    if let Some(new_w) = map.old_to_new(old_w) {
                        edges.push((new_u, new_w));
                    }
                }
            }
        }
        let g = Graph::from_edges(map.new_to_old.len(), &edges)?;
        Ok((g, map))
    }

    /// Contracts edge `uv`. The merged vertex takes the slot of `min(u, v)`;
    /// ids above `max(u, v)` shift down by one. Returns the graph and the
    /// old-to-new vertex map (with `u` and `v` mapping to the merged vertex).
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(format!("{u}-{v}")));
        }
        let (lo, hi) = (u.min(v), u.max(v));
        let map: Vec<usize> = (0..self.n)
            .map(|x| {
                if x == hi {
                    lo
                } else if x > hi {
                    x - 1
                } else {
                    x
                }
            })
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let (na, nb) = (map[a], map[b]);
            if na != nb {
                edges.push((na, nb));
            }
        }
        let g = Graph::from_edges(self.n - 1, &edges)?;
        Ok((g, map))
    }

    /// True iff the graph has at least 3 vertices, is connected, and has no
    /// cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        // Cut vertices by one BFS per deleted vertex; fine at desk scale.
        let mut set = BitSet::from_iter_with_capacity(self.n, 0..self.n);
        for v in 0..self.n {
            set.remove(v);
            if !self.is_connected_subset(&set) {
                return false;
            }
            set.insert(v);
        }
        true
    }

    /// Degeneracy together with a witnessing elimination order (repeated
    /// minimum-degree removal). Replaying the order never exposes a vertex
    /// with more than `d` not-yet-removed neighbors.
    pub fn degeneracy(&self) -> (usize, Vec<usize>) {
        let n = self.n;
        if n == 0 {
            return (0, Vec::new());
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let max_deg = *deg.iter().max().unwrap();
        // Bucket queue with lazily discarded stale entries.
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
        for v in 0..n {
            buckets[deg[v]].push(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut d = 0;
        let mut cursor = 0;
        while order.len() < n {
            let v = loop {
                match buckets[cursor].last().copied() {
                    Some(cand) if !removed[cand] && deg[cand] == cursor => {
                        buckets[cursor].pop();
                        break cand;
                    }
                    Some(_) => {
                        buckets[cursor].pop();
                    }
                    None => {
                        cursor += 1;
                        debug_assert!(cursor <= max_deg, "a live vertex must remain");
                    }
                }
            };
            d = d.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for &w in &self.neighbors[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    buckets[deg[w]].push(w);
                    cursor = cursor.min(deg[w]);
                }
            }
        }
        (d, order)
    }

    /// `|E| / |V|` as an exact rational; half the average degree.
    pub fn edge_density(&self) -> Result<Rational, GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok(Rational::new(self.edges.len() as i64, self.n as i64).expect("n > 0"))
    }

    /// Exact search for a `K_{t,t}` subgraph: disjoint sides `(A, B)` with all
    /// `A x B` edges present. Backtracks over candidate extensions of `A`
    /// through common neighborhoods.
    pub fn has_biclique_subgraph(&self, t: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>, GraphError> {
        if t < 1 {
            return Err(GraphError::InvalidParameter("biclique order t must be >= 1".into()));
        }
        if t == 1 {
            return Ok(self.edges.first().map(|&(u, v)| (vec![u], vec![v])));
        }
        let mut side_a: Vec<usize> = Vec::with_capacity(t);
        let full = BitSet::from_iter_with_capacity(self.n, (0..self.n).filter(|&v| self.degree(v) >= t));
        let mut found: Option<(Vec<usize>, Vec<usize>)> = None;
        self.biclique_extend(t, &mut side_a, &full, &full, &mut found);
        Ok(found)
    }

    fn biclique_extend(
        &self,
        t: usize,
        side_a: &mut Vec<usize>,
        common: &BitSet,
        candidates: &BitSet,
        found: &mut Option<(Vec<usize>, Vec<usize>)>,
    ) {
        if found.is_some() {
            return;
        }
        if side_a.len() == t {
            // `common` holds all common neighbors of A; no member of A is in
            // it (no self-loops), so any t of them form side B.
            let b: Vec<usize> = common.iter().take(t).collect();
            if b.len() == t {
                *found = Some((side_a.clone(), b));
            }
            return;
        }
        if common.len() < t {
            return;
        }
        for v in candidates.iter() {
            if let Some(&last) = side_a.last() {
                if v <= last {
                    continue;
                }
            }
            let mut next_common = common.clone();
            next_common.intersect_with(&self.masks[v]);
            if next_common.len() < t {
                continue;
            }
            side_a.push(v);
            let mut next_cands = candidates.clone();
            next_cands.remove(v);
            self.biclique_extend(t, side_a, &next_common, &next_cands, found);
            side_a.pop();
            if found.is_some() {
                return;
            }
        }
    }

    /// Line graph: one vertex per edge, adjacency iff the edges share an
    /// endpoint. The returned map gives, per line-graph vertex, the host edge
    /// it stands for.
    pub fn line_graph(&self) -> (Graph, Vec<(usize, usize)>) {
        let edge_ids: Vec<(usize, usize)> = self.edges.clone();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, &e) in edge_ids.iter().enumerate() {
            index.insert(e, i);
        }
        let mut lg_edges = Vec::new();
        for v in 0..self.n {
            let nb = &self.neighbors[v];
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    let e1 = (v.min(nb[i]), v.max(nb[i]));
                    let e2 = (v.min(nb[j]), v.max(nb[j]));
                    lg_edges.push((index[&e1], index[&e2]));
                }
            }
        }
        let g = Graph::from_edges(edge_ids.len(), &lg_edges).expect("line graph is simple");
        (g, edge_ids)
    }
}

/// Map between a derived graph's contiguous ids and the parent's ids.
#[derive(Clone, Debug)]
pub struct VertexMap {
    /// `new_to_old[new] = old`, strictly increasing.
    pub new_to_old: Vec<usize>,
    old_to_new: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn from_new_to_old(parent_n: usize, new_to_old: Vec<usize>) -> VertexMap {
        let mut old_to_new = vec![None; parent_n];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        VertexMap { new_to_old, old_to_new }
    }

    pub fn old_to_new(&self, old: usize) -> Option<usize> {
        self.old_to_new.get(old).copied().flatten()
    }

    pub fn to_old(&self, new: usize) -> usize {
        self.new_to_old[new]
    }

    pub fn len(&self) -> usize {
        self.new_to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_to_old.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, grid, path};

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::from_edges(3, &[(0, 3)]), Err(GraphError::VertexOutOfRange(3, 3))));
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1))));
        // Parallel edges merge.
        let g = Graph::from_edges(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn induced_subgraph_identity_and_empty() {
        let k4 = complete(4);
        let (h, map) = k4.induced_subgraph(&[0, 1, 2, 3]).unwrap();
        assert_eq!(h, k4);
        assert_eq!(map.to_old(2), 2);

        let (e, _) = k4.induced_subgraph(&[]).unwrap();
        assert_eq!(e.vertex_count(), 0);
        assert_eq!(e.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_grid_corner() {
        // Corner of the 3x3 grid plus its two neighbors induces a 3-vertex path.
        let g = grid(3).unwrap();
        let corner = g.index(0, 0);
        let mut s = vec![corner];
        s.extend_from_slice(g.graph.neighbors(corner));
        let (h, _) = g.graph.induced_subgraph(&s).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.max_degree(), 2);
    }

    #[test]
    fn induced_subgraph_range_error() {
        let g = complete(3);
        assert!(g.induced_subgraph(&[0, 7]).is_err());
    }

    #[test]
    fn contraction_examples() {
        // Triangle contracts to an edge.
        let (h, _) = complete(3).contract_edge(0, 1).unwrap();
        assert_eq!(h, complete(2));

        // Path a-b-c, contract ab: edge on 2 vertices.
        let (h, _) = path(3).contract_edge(0, 1).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);

        // C4 contracts to a triangle.
        let (h, map) = cycle(4).contract_edge(0, 1).unwrap();
        assert_eq!(h, complete(3));
        assert_eq!(map[0], map[1]);

        assert!(path(3).contract_edge(0, 2).is_err());
    }

    #[test]
    fn two_connectivity() {
        assert!(cycle(5).is_two_connected());
        assert!(!path(4).is_two_connected());
        // Two triangles sharing one vertex: the shared vertex cuts.
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!bowtie.is_two_connected());
        assert!(!complete(2).is_two_connected());
    }

    #[test]
    fn degeneracy_examples() {
        let (d, _) = complete(6).degeneracy();
        assert_eq!(d, 5);
        let (d, _) = Graph::empty(5).degeneracy();
        assert_eq!(d, 0);
        let (d, _) = grid(4).unwrap().graph.degeneracy();
        assert_eq!(d, 2);
    }

    #[test]
    fn degeneracy_order_replay() {
        let g = grid(4).unwrap().graph;
        let (d, order) = g.degeneracy();
        let mut pos = vec![0; g.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for &v in &order {
            let later = g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count();
            assert!(later <= d);
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(complete(3).edge_density().unwrap(), Rational::one());
        assert_eq!(grid(5).unwrap().graph.edge_density().unwrap(), Rational::new(8, 5).unwrap());
        // K_t plus t^3 isolated vertices has density below 1/t.
        let t = 4;
        let mut edges = Vec::new();
        for u in 0..t {
            for v in u + 1..t {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(t + t * t * t, &edges).unwrap();
        assert!(g.edge_density().unwrap() < Rational::new(1, t as i64).unwrap());
        assert!(Graph::empty(0).edge_density().is_err());
    }

    #[test]
    fn biclique_search() {
        let k33 = crate::constructions::biclique(3, 3);
        let (a, b) = k33.has_biclique_subgraph(3).unwrap().expect("K_{3,3} contains itself");
        assert_eq!(a.len(), 3);
        assert_eq!(b.len(), 3);
        for &u in &a {
            for &v in &b {
                assert!(k33.has_edge(u, v));
            }
        }

        // K_4 contains K_{2,2} (any 2+2 split works).
        assert!(complete(4).has_biclique_subgraph(2).unwrap().is_some());

        // Walls are C_4-free, so no K_{2,2}. (Grids do contain unit 4-cycles.)
        let w = crate::constructions::wall(4).unwrap();
        assert!(w.graph.has_biclique_subgraph(2).unwrap().is_none());
        let g = grid(4).unwrap();
        assert!(g.graph.has_biclique_subgraph(2).unwrap().is_some());

        assert!(complete(4).has_biclique_subgraph(0).is_err());
    }

    #[test]
    fn line_graph_examples() {
        // Path on 3 vertices -> K_2.
        let (lg, _) = path(3).line_graph();
        assert_eq!(lg, complete(2));
        // Star K_{1,3} -> K_3.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (lg, _) = star.line_graph();
        assert_eq!(lg, complete(3));
        // C_5 -> C_5 (up to isomorphism).
        let (lg, _) = cycle(5).line_graph();
        assert!(crate::iso::is_isomorphic(&lg, &cycle(5)));
    }
}
