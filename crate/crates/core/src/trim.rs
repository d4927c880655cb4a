//! Trim spanning supergraphs of (bi)clique subdivisions.
//!
//! A spanning supergraph of a subdivision is *trim* when every direct path
//! stays induced in the host: no chord of any kind on a direct path, even one
//! shortening it. As a consequence every extra edge joins two subdivision
//! vertices on distinct direct paths, or a branch vertex and a subdivision
//! vertex of a path not incident to that branch vertex; an extra edge between
//! two branch vertices is a violation.

use crate::graph::Graph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// The subdivided pattern: a clique `K_s` or a biclique `K_{s,s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Skeleton {
    Clique { s: usize },
    /// Sides are `0..s` and `s..2s` in skeleton ids.
    Biclique { s: usize },
}

impl Skeleton {
    pub fn graph(&self) -> Graph {
        match *self {
            Skeleton::Clique { s } => crate::constructions::complete(s),
            Skeleton::Biclique { s } => crate::constructions::biclique(s, s),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            Skeleton::Clique { s } => s,
            Skeleton::Biclique { s } => 2 * s,
        }
    }

    /// Side A and side B for bicliques; `None` for cliques.
    pub fn sides(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match *self {
            Skeleton::Clique { .. } => None,
            Skeleton::Biclique { s } => Some(((0..s).collect(), (s..2 * s).collect())),
        }
    }
}

/// A trim spanning supergraph of a subdivision, as host graph plus the
/// subdivision structure living inside it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrimSupergraph {
    pub host: Graph,
    pub skeleton: Skeleton,
    /// `branch[u]` is the host vertex realizing skeleton vertex `u`.
    pub branch: Vec<usize>,
    /// Direct path per skeleton edge, endpoints included (host ids).
    #[serde(with = "crate::serde_util::edge_map")]
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl TrimSupergraph {
    /// Edges of the underlying subdivision (the union of all path edges).
    pub fn subdivision_edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for p in self.paths.values() {
            for w in p.windows(2) {
                out.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        out
    }

    /// Host edges that are not subdivision edges.
    pub fn extra_edges(&self) -> Vec<(usize, usize)> {
        let sub = self.subdivision_edges();
        self.host.edges().iter().copied().filter(|e| !sub.contains(e)).collect()
    }

    /// Least direct-path length, in edges.
    pub fn min_path_length(&self) -> usize {
        self.paths.values().map(|p| p.len() - 1).min().unwrap_or(0)
    }

    /// Which skeleton vertex each host vertex serves: `Branch(u)` or
    /// `OnPath(e)`. Errors are reported by `validate_trim`; here unknown
    /// vertices map to `None`.
    pub fn role_of(&self) -> Vec<Option<HostRole>> {
        let mut roles: Vec<Option<HostRole>> = vec![None; self.host.vertex_count()];
        for (u, &h) in self.branch.iter().enumerate() {
            if h < roles.len() {
                roles[h] = Some(HostRole::Branch(u));
            }
        }
        for (&e, p) in &self.paths {
            for &h in &p[1..p.len().saturating_sub(1)] {
                if h < roles.len() && roles[h].is_none() {
                    roles[h] = Some(HostRole::OnPath(e));
                }
            }
        }
        roles
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostRole {
    Branch(usize),
    OnPath((usize, usize)),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrimViolation {
    #[error("branch map has {0} entries for a {1}-vertex skeleton")]
    BranchArity(usize, usize),
    #[error("branch map names host vertex {0} outside the host")]
    ForeignBranch(usize),
    #[error("branch map is not injective: skeleton vertices {0} and {1} share a host vertex")]
    BranchCollision(usize, usize),
    #[error("skeleton edge {0}-{1} has no direct path")]
    MissingPath(usize, usize),
    #[error("path is keyed by {0}-{1}, which is not a skeleton edge")]
    UnknownPathKey(usize, usize),
    #[error("direct path for {0}-{1} does not run between its branch vertices")]
    BadEndpoints(usize, usize),
    #[error("direct path for {0}-{1} is not a simple host path")]
    NotAPath(usize, usize),
    #[error("host vertex {0} lies on two direct paths (or a path and a branch)")]
    Overlap(usize),
    #[error("host vertex {0} is neither a branch vertex nor on any direct path")]
    Uncovered(usize),
    #[error("chord {u}-{v} on the direct path for {a}-{b} breaks trimness")]
    Chord { u: usize, v: usize, a: usize, b: usize },
    #[error("extra edge {0}-{1} joins two branch vertices")]
    BranchBranchExtra(usize, usize),
}

/// Classification of an extra edge, following the trimness taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraEdgeKind {
    /// Two subdivision vertices on distinct direct paths.
    SubdivisionSubdivision,
    /// A branch vertex and a subdivision vertex on a non-incident path.
    BranchSubdivision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimReport {
    pub extra_edges: Vec<((usize, usize), ExtraEdgeKind)>,
    pub min_path_length: usize,
}

/// Checks every `TrimSupergraph` invariant and classifies the extra edges.
pub fn validate_trim(t: &TrimSupergraph) -> Result<TrimReport, TrimViolation> {
    let n = t.host.vertex_count();
    let skel = t.skeleton.graph();
    // Branch map.
    if t.branch.len() != skel.vertex_count() {
        return Err(TrimViolation::BranchArity(t.branch.len(), skel.vertex_count()));
    }
    for (u, &h) in t.branch.iter().enumerate() {
        if h >= n {
            return Err(TrimViolation::ForeignBranch(h));
        }
        for (v, &h2) in t.branch.iter().enumerate().skip(u + 1) {
            if h == h2 {
                return Err(TrimViolation::BranchCollision(u, v));
            }
        }
    }
    // Path keys match skeleton edges exactly.
    for &(a, b) in skel.edges() {
        if !t.paths.contains_key(&(a, b)) {
            return Err(TrimViolation::MissingPath(a, b));
        }
    }
    for &(a, b) in t.paths.keys() {
        if !skel.has_edge(a, b) || a > b {
            return Err(TrimViolation::UnknownPathKey(a, b));
        }
    }
    // Paths are simple host paths between the right branch vertices, and all
    // interiors are disjoint from each other and from branch vertices.
    let mut owner: Vec<Option<HostRole>> = vec![None; n];
    for (u, &h) in t.branch.iter().enumerate() {
        owner[h] = Some(HostRole::Branch(u));
    }
    for (&(a, b), p) in &t.paths {
        if p.len() < 2 {
            return Err(TrimViolation::NotAPath(a, b));
        }
        if p[0] != t.branch[a] || p[p.len() - 1] != t.branch[b] {
            return Err(TrimViolation::BadEndpoints(a, b));
        }
        let mut seen = BTreeSet::new();
        for &h in p {
            if h >= n {
                return Err(TrimViolation::NotAPath(a, b));
            }
            if !seen.insert(h) {
                return Err(TrimViolation::NotAPath(a, b));
            }
        }
        for w in p.windows(2) {
            if !t.host.has_edge(w[0], w[1]) {
                return Err(TrimViolation::NotAPath(a, b));
            }
        }
        for &h in &p[1..p.len() - 1] {
            if owner[h].is_some() {
                return Err(TrimViolation::Overlap(h));
            }
            owner[h] = Some(HostRole::OnPath((a, b)));
        }
    }
    // Spanning: every host vertex has a role.
    if let Some(h) = (0..n).find(|&h| owner[h].is_none()) {
        return Err(TrimViolation::Uncovered(h));
    }
    // Trimness: every direct path is induced (no chord of any kind, even one
    // making a shorter connection).
    for (&(a, b), p) in &t.paths {
        for i in 0..p.len() {
            for j in i + 2..p.len() {
                if t.host.has_edge(p[i], p[j]) {
                    return Err(TrimViolation::Chord { u: p[i], v: p[j], a, b });
                }
            }
        }
    }
    // Extra-edge taxonomy.
    let sub_edges = t.subdivision_edges();
    let mut extra = Vec::new();
    for &(u, v) in t.host.edges() {
        if sub_edges.contains(&(u, v)) {
            continue;
        }
        match (owner[u].unwrap(), owner[v].unwrap()) {
            (HostRole::Branch(_), HostRole::Branch(_)) => {
                return Err(TrimViolation::BranchBranchExtra(u, v));
            }
            (HostRole::OnPath(e1), HostRole::OnPath(e2)) => {
                debug_assert_ne!(e1, e2, "same-path extras are chords, caught above");
                extra.push(((u, v), ExtraEdgeKind::SubdivisionSubdivision));
            }
            (HostRole::Branch(_), HostRole::OnPath(_)) | (HostRole::OnPath(_), HostRole::Branch(_)) => {
                // The path cannot be incident to this branch vertex: that
                // edge would be a chord, caught above.
                extra.push(((u, v), ExtraEdgeKind::BranchSubdivision));
            }
        }
    }
    Ok(TrimReport { extra_edges: extra, min_path_length: t.min_path_length() })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrimGenError {
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error("could not place {requested} extra edges ({placed} placed) within the retry budget")]
    InfeasibleExtras { requested: usize, placed: usize },
}

pub const EXTRA_EDGE_RETRIES: usize = 10_000;

/// Builds a seeded random trim spanning supergraph: subdivide the skeleton
/// with per-path lengths in `floor..=floor+spread`, then place exactly
/// `extra_count` extra edges by rejection sampling over the legal pairs (not
/// on a common path, not branch-branch).
pub fn random_trim_supergraph(
    skeleton: Skeleton,
    floor: usize,
    spread: usize,
    extra_count: usize,
    seed: u64,
) -> Result<TrimSupergraph, TrimGenError> {
    let skel_graph = skeleton.graph();
    let (sub, spec) = crate::constructions::subdivide(
        &skel_graph,
        &crate::constructions::SubdivisionLengths::AtLeast { floor, spread, seed },
    )?;
    let n = sub.vertex_count();
    let branch: Vec<usize> = (0..skel_graph.vertex_count()).collect();

    // Role lookup for legality: path id per vertex (branch vertices belong
    // to every incident path).
    let mut on_path: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (&e, p) in &spec.paths {
        for &h in &p[1..p.len() - 1] {
            on_path.insert(h, e);
        }
    }
    let is_branch = |v: usize| v < skel_graph.vertex_count();
    let same_path = |u: usize, v: usize| -> bool {
        match (is_branch(u), is_branch(v)) {
            (true, true) => true, // branch-branch is never legal anyway
            (true, false) => {
                let e = on_path[&v];
                e.0 == u || e.1 == u
            }
            (false, true) => {
                let e = on_path[&u];
                e.0 == v || e.1 == v
            }
            (false, false) => on_path[&u] == on_path[&v],
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_e4a5);
    let mut extra: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut failures = 0usize;
    while extra.len() < extra_count && failures < EXTRA_EDGE_RETRIES {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            failures += 1;
            continue;
        }
        let e = (u.min(v), u.max(v));
        if sub.has_edge(e.0, e.1) || extra.contains(&e) || same_path(e.0, e.1) {
            failures += 1;
            continue;
        }
        extra.insert(e);
    }
    if extra.len() < extra_count {
        return Err(TrimGenError::InfeasibleExtras { requested: extra_count, placed: extra.len() });
    }
    let mut edges: Vec<(usize, usize)> = sub.edges().to_vec();
    edges.extend(extra.iter().copied());
    let host = Graph::from_edges(n, &edges)?;
    let t = TrimSupergraph { host, skeleton, branch, paths: spec.paths };
    debug_assert!(validate_trim(&t).is_ok());
    Ok(t)
}
