//! Generators for the parameterized graph families the library manipulates:
//! grids, walls, cliques, bicliques, subdivisions, quasi-subdivisions, and
//! seeded random trim supergraphs.
//!
//! Every generator is pure given its parameters and seed, and emits enough
//! provenance (coordinates, path memberships, vertex roles) for downstream
//! extraction to be validated against ground truth on planted instances.

use crate::graph::{Graph, GraphError};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn complete(t: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..t {
        for v in u + 1..t {
            edges.push((u, v));
        }
    }
    Graph::from_edges(t, &edges).expect("clique is simple")
}

/// `K_{a,b}` with side A on `0..a` and side B on `a..a+b`.
pub fn biclique(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("biclique is simple")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path is simple")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    Graph::from_edges(n, &edges).expect("cycle is simple")
}

/// The `k x k` grid with its coordinate metadata.
#[derive(Clone, Debug)]
pub struct GridGraph {
    pub graph: Graph,
    pub k: usize,
}

impl GridGraph {
    /// Vertex id of the point at `(row, col)`, both in `0..k`.
    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.k && col < self.k);
        row * self.k + col
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.k, v % self.k)
    }
}

/// The `k x k` grid: `k^2` vertices, `2k(k-1)` edges.
pub fn grid(k: usize) -> Result<GridGraph, GraphError> {
    if k < 1 {
        return Err(GraphError::InvalidParameter("grid needs k >= 1".into()));
    }
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            if c + 1 < k {
                edges.push((v, v + 1));
            }
            if r + 1 < k {
                edges.push((v, v + k));
            }
        }
    }
    Ok(GridGraph { graph: Graph::from_edges(k * k, &edges)?, k })
}

/// The `k x k` wall with its surviving `(column, row)` coordinates
/// (columns `0..2k`, rows `0..k`).
#[derive(Clone, Debug)]
pub struct WallGraph {
    pub graph: Graph,
    pub k: usize,
    /// `coords[v] = (column, row)` of wall vertex `v`.
    pub coords: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl WallGraph {
    pub fn index_of(&self, col: usize, row: usize) -> Option<usize> {
        self.index.get(&(col, row)).copied()
    }

    /// The wall keeps the vertical edge `(x, y)-(x, y+1)` iff `x = y (mod 2)`.
    pub fn has_vertical(col: usize, row: usize) -> bool {
        col % 2 == row % 2
    }
}

/// The `k x k` wall: the subgraph of the `2k x k` grid keeping a vertical
/// edge exactly when its column and bottom row have equal parity, minus the
/// two degree-1 vertices that rule creates. `2k^2 - 2` vertices, max degree 3.
pub fn wall(k: usize) -> Result<WallGraph, GraphError> {
    if k < 2 {
        return Err(GraphError::InvalidParameter("wall needs k >= 2".into()));
    }
    let cols = 2 * k;
    let rows = k;
    let pre_index = |x: usize, y: usize| y * cols + x;
    let mut edges = Vec::new();
    for y in 0..rows {
        for x in 0..cols {
            if x + 1 < cols {
                edges.push((pre_index(x, y), pre_index(x + 1, y)));
            }
            if y + 1 < rows && WallGraph::has_vertical(x, y) {
                edges.push((pre_index(x, y), pre_index(x, y + 1)));
            }
        }
    }
    let pre = Graph::from_edges(cols * rows, &edges)?;
    let dropped: Vec<usize> = pre.vertices().filter(|&v| pre.degree(v) == 1).collect();
    assert_eq!(dropped.len(), 2, "the parity rule creates exactly two degree-1 vertices");
    let kept: Vec<usize> = pre.vertices().filter(|v| !dropped.contains(v)).collect();
    let (graph, map) = pre.induced_subgraph(&kept)?;
    let coords: Vec<(usize, usize)> =
        map.new_to_old.iter().map(|&old| (old % cols, old / cols)).collect();
    let mut index = BTreeMap::new();
    for (v, &c) in coords.iter().enumerate() {
        index.insert(c, v);
    }
    assert_eq!(graph.vertex_count(), 2 * k * k - 2);
    Ok(WallGraph { graph, k, coords, index })
}

/// How long each direct path of a subdivision should be, in edges.
#[derive(Clone, Debug)]
pub enum SubdivisionLengths {
    /// Every edge becomes a path of exactly this many edges.
    ExactUniform(usize),
    /// Per-edge exact lengths; every skeleton edge must be present.
    ExactPerEdge(BTreeMap<(usize, usize), usize>),
    /// Seeded lengths drawn uniformly from `floor..=floor+spread`.
    AtLeast { floor: usize, spread: usize, seed: u64 },
}

/// A subdivision with its branch/subdivision vertex roles and direct paths.
#[derive(Clone, Debug)]
pub struct SubdivisionSpec {
    pub skeleton: Graph,
    /// Direct path per skeleton edge, endpoints included. Branch vertices
    /// keep the skeleton's ids; subdivision vertices are appended above them.
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl SubdivisionSpec {
    pub fn branch_count(&self) -> usize {
        self.skeleton.vertex_count()
    }

    pub fn length(&self, e: (usize, usize)) -> usize {
        self.paths[&e].len() - 1
    }

    pub fn min_length(&self) -> usize {
        self.paths.values().map(|p| p.len() - 1).min().unwrap_or(0)
    }
}

/// Replaces each skeleton edge by a path. Returns the subdivided graph plus
/// the spec tying paths back to skeleton edges.
pub fn subdivide(h: &Graph, lengths: &SubdivisionLengths) -> Result<(Graph, SubdivisionSpec), GraphError> {
    let mut rng = match lengths {
        SubdivisionLengths::AtLeast { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut next = h.vertex_count();
    let mut edges = Vec::new();
    let mut paths = BTreeMap::new();
    for &(u, v) in h.edges() {
        let len = match lengths {
            SubdivisionLengths::ExactUniform(l) => *l,
            SubdivisionLengths::ExactPerEdge(m) => *m.get(&(u, v)).ok_or_else(|| {
                GraphError::InvalidParameter(format!("no length given for edge {u}-{v}"))
            })?,
            SubdivisionLengths::AtLeast { floor, spread, .. } => {
                *floor + rng.as_mut().unwrap().gen_range(0..=*spread)
            }
        };
        if len < 1 {
            return Err(GraphError::InvalidParameter("path lengths must be >= 1".into()));
        }
        let mut p = vec![u];
        for _ in 0..len - 1 {
            p.push(next);
            next += 1;
        }
        p.push(v);
        for w in p.windows(2) {
            edges.push((w[0], w[1]));
        }
        paths.insert((u, v), p);
    }
    let g = Graph::from_edges(next, &edges)?;
    let spec = SubdivisionSpec { skeleton: h.clone(), paths };
    debug_assert!(subdivision_density_bound_holds(&g, &spec));
    Ok((g, spec))
}

/// `|E| <= (1 + 1/(l-1)) |V|` for any (>=l)-subdivision with `l >= 2`.
pub fn subdivision_density_bound_holds(g: &Graph, spec: &SubdivisionSpec) -> bool {
    let l = spec.min_length();
    if l < 2 {
        return true;
    }
    // m * (l-1) <= (l-1+1) * n  <=>  |E| <= (1 + 1/(l-1)) |V|, exactly.
    (g.edge_count() as i64) * (l as i64 - 1) <= (l as i64) * (g.vertex_count() as i64)
}

/// How a skeleton vertex is realized inside a quasi-subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiVertexForm {
    Plain(usize),
    /// Corners keyed by the incident skeleton edge each one serves.
    Triangle(Vec<((usize, usize), usize)>),
}

impl QuasiVertexForm {
    pub fn host_vertices(&self) -> Vec<usize> {
        match self {
            QuasiVertexForm::Plain(v) => vec![*v],
            QuasiVertexForm::Triangle(corners) => corners.iter().map(|&(_, c)| c).collect(),
        }
    }

    /// The vertex at which the path for skeleton edge `e` attaches.
    pub fn attach(&self, e: (usize, usize)) -> usize {
        match self {
            QuasiVertexForm::Plain(v) => *v,
            QuasiVertexForm::Triangle(corners) => {
                corners.iter().find(|&&(ce, _)| ce == e).map(|&(_, c)| c).expect("corner for edge")
            }
        }
    }
}

/// A quasi-subdivision: a subdivision of a subcubic skeleton in which the
/// selected degree-3 vertices were replaced by triangles.
#[derive(Clone, Debug)]
pub struct QuasiSubdivisionSpec {
    pub skeleton: Graph,
    pub vertex_form: Vec<QuasiVertexForm>,
    /// Direct path per skeleton edge; endpoints are the attach vertices of
    /// the incident vertex forms.
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

/// Subdivides subcubic `h` and replaces each vertex in `triangle_set` (all of
/// degree 3) by a triangle, one corner per incident edge. The replacement is
/// simultaneous and non-iterative: created corners are never expanded again.
pub fn quasi_subdivide(
    h: &Graph,
    triangle_set: &[usize],
    lengths: &SubdivisionLengths,
) -> Result<(Graph, QuasiSubdivisionSpec), GraphError> {
    if h.max_degree() > 3 {
        return Err(GraphError::InvalidParameter("skeleton must be subcubic".into()));
    }
    for &v in triangle_set {
        if v >= h.vertex_count() {
            return Err(GraphError::VertexOutOfRange(v, h.vertex_count()));
        }
        if h.degree(v) != 3 {
            return Err(GraphError::InvalidParameter(format!(
                "vertex {v} has degree {}, only degree-3 vertices can become triangles",
                h.degree(v)
            )));
        }
    }
    let (sub, spec) = subdivide(h, lengths)?;
    let selected = |v: usize| triangle_set.contains(&v);

    // New ids: unselected subdivision-graph vertices keep relative order,
    // then triangle corners, grouped by skeleton vertex, edges ascending.
    let mut new_id: Vec<Option<usize>> = vec![None; sub.vertex_count()];
    let mut next = 0;
    for v in 0..sub.vertex_count() {
        if v >= h.vertex_count() || !selected(v) {
            new_id[v] = Some(next);
            next += 1;
        }
    }
    let mut vertex_form: Vec<QuasiVertexForm> = (0..h.vertex_count())
        .map(|v| QuasiVertexForm::Plain(new_id[v].unwrap_or(usize::MAX)))
        .collect();
    let mut corner_of: BTreeMap<(usize, (usize, usize)), usize> = BTreeMap::new();
    for &v in triangle_set {
        let mut corners = Vec::new();
        let mut incident: Vec<(usize, usize)> =
            h.neighbors(v).iter().map(|&w| (v.min(w), v.max(w))).collect();
        incident.sort_unstable();
        for e in incident {
            corner_of.insert((v, e), next);
            corners.push((e, next));
            next += 1;
        }
        vertex_form[v] = QuasiVertexForm::Triangle(corners);
    }

    let mut edges = Vec::new();
    // Triangle edges.
    for &v in triangle_set {
        let cs = vertex_form[v].host_vertices();
        edges.push((cs[0], cs[1]));
        edges.push((cs[0], cs[2]));
        edges.push((cs[1], cs[2]));
    }
    // Path edges, with endpoints redirected to corners where needed.
    let mut new_paths = BTreeMap::new();
    for (&e, p) in &spec.paths {
        let image = |pos: usize, v: usize| -> usize {
            if v < h.vertex_count() && selected(v) {
                debug_assert!(pos == 0 || pos == p.len() - 1);
                corner_of[&(v, e)]
            } else {
                new_id[v].unwrap()
            }
        };
        let q: Vec<usize> = p.iter().enumerate().map(|(i, &v)| image(i, v)).collect();
        for w in q.windows(2) {
            edges.push((w[0], w[1]));
        }
        new_paths.insert(e, q);
    }
    let g = Graph::from_edges(next, &edges)?;
    Ok((g, QuasiSubdivisionSpec { skeleton: h.clone(), vertex_form, paths: new_paths }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    #[test]
    fn grid_shape() {
        assert_eq!(grid(1).unwrap().graph.vertex_count(), 1);
        let g2 = grid(2).unwrap();
        assert!(is_isomorphic(&g2.graph, &cycle(4)));
        let g5 = grid(5).unwrap();
        assert_eq!(g5.graph.vertex_count(), 25);
        assert_eq!(g5.graph.edge_count(), 40);
        assert!(grid(0).is_err());
    }

    #[test]
    fn wall_shape() {
        assert!(wall(1).is_err());
        let w2 = wall(2).unwrap();
        assert_eq!(w2.graph.vertex_count(), 6);
        assert!(is_isomorphic(&w2.graph, &cycle(6)));

        let w3 = wall(3).unwrap();
        assert_eq!(w3.graph.vertex_count(), 16);
        assert_eq!(w3.graph.max_degree(), 3);

        let w5 = wall(5).unwrap();
        assert_eq!(w5.graph.vertex_count(), 48);
        assert_eq!(w5.graph.max_degree(), 3);
        for k in 2..=9 {
            let w = wall(k).unwrap();
            assert_eq!(w.graph.vertex_count(), 2 * k * k - 2);
            assert_eq!(w.graph.max_degree(), if k == 2 { 2 } else { 3 });
            assert!(w.graph.is_connected());
        }
    }

    /// Golden pin for the wall convention: the exact edge set of wall(3) in
    /// (column, row) coordinates. Several wall variants exist in the
    /// literature; this fixes ours.
    #[test]
    fn wall_three_golden() {
        let w = wall(3).unwrap();
        let edge = |a: (usize, usize), b: (usize, usize)| {
            let u = w.index_of(a.0, a.1).unwrap();
            let v = w.index_of(b.0, b.1).unwrap();
            assert!(w.graph.has_edge(u, v), "expected edge {a:?}-{b:?}");
        };
        // Row paths: row 0 spans columns 0..=4, row 1 all, row 2 columns 1..=5.
        assert!(w.index_of(5, 0).is_none());
        assert!(w.index_of(0, 2).is_none());
        for x in 0..4 {
            edge((x, 0), (x + 1, 0));
        }
        for x in 0..5 {
            edge((x, 1), (x + 1, 1));
        }
        for x in 1..5 {
            edge((x, 2), (x + 1, 2));
        }
        // Verticals: equal parity of column and bottom row.
        for &(x, y) in &[(0, 0), (2, 0), (4, 0), (1, 1), (3, 1), (5, 1)] {
            edge((x, y), (x, y + 1));
        }
        let expected_edges = 4 + 5 + 4 + 6;
        assert_eq!(w.graph.edge_count(), expected_edges);
    }

    #[test]
    fn subdivide_counts() {
        let (g, spec) = subdivide(&complete(3), &SubdivisionLengths::ExactUniform(1)).unwrap();
        assert_eq!(g, complete(3));
        assert_eq!(spec.min_length(), 1);

        let (g, _) = subdivide(&complete(4), &SubdivisionLengths::ExactUniform(2)).unwrap();
        assert_eq!(g.vertex_count(), 10);

        let (g, _) = subdivide(&biclique(2, 2), &SubdivisionLengths::ExactUniform(3)).unwrap();
        assert_eq!(g.vertex_count(), 12);

        assert!(subdivide(&complete(3), &SubdivisionLengths::ExactUniform(0)).is_err());
    }

    #[test]
    fn subdivide_branch_independence_and_reproducibility() {
        let lengths = SubdivisionLengths::AtLeast { floor: 2, spread: 3, seed: 7 };
        let (g1, spec1) = subdivide(&complete(5), &lengths).unwrap();
        let (g2, _) = subdivide(&complete(5), &lengths).unwrap();
        assert_eq!(g1, g2);
        // Branch vertices form an independent set when l >= 2.
        for u in 0..spec1.branch_count() {
            for v in u + 1..spec1.branch_count() {
                assert!(!g1.has_edge(u, v));
            }
        }
        let (g3, _) =
            subdivide(&complete(5), &SubdivisionLengths::AtLeast { floor: 2, spread: 3, seed: 8 }).unwrap();
        assert_ne!(g1, g3);
    }

    #[test]
    fn quasi_subdivide_star() {
        // K_{1,3} with its center selected at unit lengths: a triangle with a
        // pendant vertex on each corner.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (g, spec) = quasi_subdivide(&star, &[0], &SubdivisionLengths::ExactUniform(1)).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 6);
        let degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 3).count(), 3);
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 3);
        assert!(matches!(spec.vertex_form[0], QuasiVertexForm::Triangle(_)));
    }

    #[test]
    fn quasi_subdivide_empty_selection_is_plain() {
        let (g, _) = quasi_subdivide(&complete(3), &[], &SubdivisionLengths::ExactUniform(2)).unwrap();
        let (g2, _) = subdivide(&complete(3), &SubdivisionLengths::ExactUniform(2)).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn quasi_subdivide_rejects_low_degree() {
        assert!(quasi_subdivide(&cycle(4), &[0], &SubdivisionLengths::ExactUniform(1)).is_err());
        assert!(quasi_subdivide(&complete(5), &[], &SubdivisionLengths::ExactUniform(1)).is_err());
    }

    /// The line graph of an exact-2 subdivision of subcubic `h` is a
    /// quasi-subdivision of `h` with every degree-3 vertex turned into a
    /// triangle, for suitable per-edge lengths.
    #[test]
    fn line_graph_of_subdivision_is_quasi_subdivision() {
        let h = wall(3).unwrap().graph;
        let ell = 2;
        let (sub, _) = subdivide(&h, &SubdivisionLengths::ExactUniform(ell)).unwrap();
        let (lg, _) = sub.line_graph();

        // Each endpoint "consumes" one edge-vertex of the chain: always for
        // degree-3 endpoints (the triangle corner), and for exactly one of
        // the two chains of a degree-2 vertex (its representative; we pick
        // the smaller incident edge).
        let consumes = |v: usize, e: (usize, usize)| -> bool {
            match h.degree(v) {
                3 => true,
                1 => true,
                2 => {
                    let mut inc: Vec<(usize, usize)> =
                        h.neighbors(v).iter().map(|&w| (v.min(w), v.max(w))).collect();
                    inc.sort_unstable();
                    inc[0] == e
                }
                _ => unreachable!("subcubic"),
            }
        };
        let mut lambda = BTreeMap::new();
        for &(u, v) in h.edges() {
            let e = (u, v);
            let consumed = consumes(u, e) as usize + consumes(v, e) as usize;
            lambda.insert(e, ell + 1 - consumed);
        }
        let deg3: Vec<usize> = h.vertices().filter(|&v| h.degree(v) == 3).collect();
        let (qs, _) =
            quasi_subdivide(&h, &deg3, &SubdivisionLengths::ExactPerEdge(lambda)).unwrap();
        assert_eq!(lg.vertex_count(), qs.vertex_count());
        assert!(is_isomorphic(&lg, &qs));
    }
}
