//! Minor and induced-minor models: validation, minimal-model refinement,
//! exact containment search, clique-subdivision search, and the green-clique
//! step over trim supergraphs.

use crate::bitset::BitSet;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Disjoint connected branch sets, one per pattern vertex (`branch_sets[i]`
/// realizes pattern vertex `i`). In induced mode, two branch sets are
/// adjacent iff the pattern vertices are; in plain mode, pattern adjacency
/// only forces host adjacency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<usize>>,
    pub induced: bool,
}

impl MinorModel {
    pub fn identity(g: &Graph, induced: bool) -> MinorModel {
        MinorModel {
            pattern: g.clone(),
            branch_sets: g.vertices().map(|v| vec![v]).collect(),
            induced,
        }
    }

    pub fn used_vertices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.branch_sets.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    fn masks(&self, host_n: usize) -> Vec<BitSet> {
        self.branch_sets
            .iter()
            .map(|s| BitSet::from_iter_with_capacity(host_n, s.iter().copied()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelViolation {
    #[error("model has {sets} branch sets for a {pattern}-vertex pattern")]
    Arity { sets: usize, pattern: usize },
    #[error("branch set {0} is empty")]
    EmptySet(usize),
    #[error("branch set {set} mentions host vertex {vertex} out of range")]
    ForeignVertex { set: usize, vertex: usize },
    #[error("branch sets {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("branch set {0} is not connected in the host")]
    Disconnected(usize),
    #[error("pattern edge {0}-{1} has no host edge between its branch sets")]
    MissingAdjacency(usize, usize),
    #[error("branch sets {0} and {1} are adjacent although the pattern has no edge (induced mode)")]
    ForbiddenAdjacency(usize, usize),
    #[error("model pattern does not match the expected graph ({expected})")]
    PatternMismatch { expected: String },
}

/// Checks disjointness, connectivity, and the adjacency (bi)conditional.
pub fn validate_model(host: &Graph, model: &MinorModel) -> Result<(), ModelViolation> {
    let p = model.pattern.vertex_count();
    if model.branch_sets.len() != p {
        return Err(ModelViolation::Arity { sets: model.branch_sets.len(), pattern: p });
    }
    let n = host.vertex_count();
    for (i, s) in model.branch_sets.iter().enumerate() {
        if s.is_empty() {
            return Err(ModelViolation::EmptySet(i));
        }
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(ModelViolation::ForeignVertex { set: i, vertex: v });
        }
    }
    let masks = model.masks(n);
    for i in 0..p {
        for j in i + 1..p {
            if masks[i].intersects(&masks[j]) {
                return Err(ModelViolation::Overlap(i, j));
            }
        }
    }
    for (i, mask) in masks.iter().enumerate() {
        if !host.is_connected_subset(mask) {
            return Err(ModelViolation::Disconnected(i));
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            let adjacent = host.sets_adjacent(&masks[i], &masks[j]);
            let pattern_edge = model.pattern.has_edge(i, j);
            if pattern_edge && !adjacent {
                return Err(ModelViolation::MissingAdjacency(i, j));
            }
            if model.induced && !pattern_edge && adjacent {
                return Err(ModelViolation::ForbiddenAdjacency(i, j));
            }
        }
    }
    Ok(())
}

/// Composes a model of `A` in `B` with a model of `B` in `C` into a model of
/// `A` in `C`: each branch set of `inner` is replaced by the union of the
/// `outer` branch sets it names. Both models must use the same mode.
pub fn compose_models(inner: &MinorModel, outer: &MinorModel) -> Result<MinorModel, ModelViolation> {
    if inner.induced != outer.induced {
        return Err(ModelViolation::PatternMismatch { expected: "matching modes".into() });
    }
    let b = outer.pattern.vertex_count();
    let mut branch_sets = Vec::with_capacity(inner.branch_sets.len());
    for (i, s) in inner.branch_sets.iter().enumerate() {
        let mut merged = Vec::new();
        for &mid in s {
            if mid >= b {
                return Err(ModelViolation::ForeignVertex { set: i, vertex: mid });
            }
            merged.extend_from_slice(&outer.branch_sets[mid]);
        }
        merged.sort_unstable();
        branch_sets.push(merged);
    }
    Ok(MinorModel { pattern: inner.pattern.clone(), branch_sets, induced: inner.induced })
}

pub const REFINE_EXHAUSTIVE_SET_CAP: usize = 12;

/// Shrinks a valid model to a per-set minimal one: greedy single-vertex
/// deletions to a fixpoint, then an exhaustive per-set re-search for sets of
/// at most [`REFINE_EXHAUSTIVE_SET_CAP`] vertices. Deterministic scan order.
pub fn refine_to_minimal(host: &Graph, model: &MinorModel) -> Result<MinorModel, ModelViolation> {
    validate_model(host, model)?;
    let mut current = model.clone();
    loop {
        let mut changed = false;
        // Greedy single-vertex deletions.
        loop {
            let mut deleted = false;
            for i in 0..current.branch_sets.len() {
                if current.branch_sets[i].len() == 1 {
                    continue;
                }
                let vertices = current.branch_sets[i].clone();
                for &v in &vertices {
                    let mut candidate = current.clone();
                    candidate.branch_sets[i].retain(|&w| w != v);
                    if validate_model(host, &candidate).is_ok() {
                        current = candidate;
                        deleted = true;
                        changed = true;
                        break;
                    }
                }
            }
            if !deleted {
                break;
            }
        }
        // Capped exhaustive per-set shrink: try strictly smaller subsets in
        // size order, then lexicographic.
        let mut improved = false;
        for i in 0..current.branch_sets.len() {
            let set = current.branch_sets[i].clone();
            if set.len() < 2 || set.len() > REFINE_EXHAUSTIVE_SET_CAP {
                continue;
            }
            'sizes: for size in 1..set.len() {
                for subset in subsets_of_size(&set, size) {
                    let mut candidate = current.clone();
                    candidate.branch_sets[i] = subset;
                    if validate_model(host, &candidate).is_ok() {
                        current = candidate;
                        improved = true;
                        changed = true;
                        break 'sizes;
                    }
                }
            }
        }
        if !(changed && improved) {
            break;
        }
    }
    Ok(current)
}

fn subsets_of_size(set: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(set: &[usize], start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..set.len() {
            cur.push(set[i]);
            rec(set, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(set, 0, size, &mut cur, &mut out);
    out
}

/// Resource limits for the containment searches. Caps exceeded (or node
/// budget exhausted) yield `BudgetExhausted`, never a wrong answer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budget {
    pub max_host: usize,
    pub max_pattern: usize,
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_host: 18, max_pattern: 6, max_nodes: 5_000_000 }
    }
}

/// Three-valued search result: a timeout is never reported as absence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Absent,
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, SearchOutcome::Absent)
    }
}

/// Exact induced-minor containment search by backtracking over
/// vertex-to-(branch set | discard) assignments in canonical order, with
/// adjacency and connectivity pruning. Returns the first witness in that
/// canonical order (deterministic across runs).
pub fn find_induced_minor(host: &Graph, pattern: &Graph, budget: &Budget) -> SearchOutcome<MinorModel> {
    find_model(host, pattern, true, budget)
}

/// Plain-minor variant of [`find_induced_minor`].
pub fn find_minor(host: &Graph, pattern: &Graph, budget: &Budget) -> SearchOutcome<MinorModel> {
    find_model(host, pattern, false, budget)
}

pub fn find_model(host: &Graph, pattern: &Graph, induced: bool, budget: &Budget) -> SearchOutcome<MinorModel> {
    let n = host.vertex_count();
    let p = pattern.vertex_count();
    if n > budget.max_host || p > budget.max_pattern {
        return SearchOutcome::BudgetExhausted;
    }
    if p == 0 {
        return SearchOutcome::Found(MinorModel { pattern: pattern.clone(), branch_sets: Vec::new(), induced });
    }
    if p > n {
        return SearchOutcome::Absent;
    }
    let mut state = SearchState {
        host,
        pattern,
        induced,
        assignment: vec![UNASSIGNED; n],
        set_masks: vec![BitSet::new(n); p],
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    match state.assign(0) {
        AssignResult::Found => {
            let mut branch_sets = vec![Vec::new(); p];
            for v in 0..n {
                let a = state.assignment[v];
                if a != UNASSIGNED && a != DISCARDED {
                    branch_sets[a as usize].push(v);
                }
            }
            let model = MinorModel { pattern: pattern.clone(), branch_sets, induced };
            debug_assert!(validate_model(host, &model).is_ok());
            SearchOutcome::Found(model)
        }
        AssignResult::Exhausted => SearchOutcome::Absent,
        AssignResult::OutOfBudget => SearchOutcome::BudgetExhausted,
    }
}

const UNASSIGNED: i32 = -1;
const DISCARDED: i32 = -2;

enum AssignResult {
    Found,
    Exhausted,
    OutOfBudget,
}

struct SearchState<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    induced: bool,
    assignment: Vec<i32>,
    set_masks: Vec<BitSet>,
    nodes: u64,
    max_nodes: u64,
}

impl SearchState<'_> {
    fn assign(&mut self, v: usize) -> AssignResult {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return AssignResult::OutOfBudget;
        }
        let n = self.host.vertex_count();
        if v == n {
            return if self.complete_valid() { AssignResult::Found } else { AssignResult::Exhausted };
        }
        if !self.still_feasible(v) {
            return AssignResult::Exhausted;
        }
        let p = self.pattern.vertex_count();
        for choice in 0..p {
            if self.consistent(v, choice) {
                self.assignment[v] = choice as i32;
                self.set_masks[choice].insert(v);
                match self.assign(v + 1) {
                    AssignResult::Found => return AssignResult::Found,
                    AssignResult::OutOfBudget => return AssignResult::OutOfBudget,
                    AssignResult::Exhausted => {}
                }
                self.set_masks[choice].remove(v);
                self.assignment[v] = UNASSIGNED;
            }
        }
        self.assignment[v] = DISCARDED;
        let r = self.assign(v + 1);
        if !matches!(r, AssignResult::Exhausted) {
            return r;
        }
        self.assignment[v] = UNASSIGNED;
        AssignResult::Exhausted
    }

    /// Induced mode: adding `v` to set `i` must not create adjacency to a set
    /// the pattern keeps non-adjacent.
    fn consistent(&self, v: usize, i: usize) -> bool {
        if !self.induced {
            return true;
        }
        let nb = self.host.neighbor_mask(v);
        for j in 0..self.pattern.vertex_count() {
            if j != i && !self.pattern.has_edge(i, j) && nb.intersects(&self.set_masks[j]) {
                return false;
            }
        }
        true
    }

    /// Sound pruning with vertices `0..v` fixed and `v..n` free:
    /// - a multi-component branch set must still be mendable by free vertices;
    /// - a required pattern edge must be present or still creatable;
    /// - empty branch sets need enough free vertices.
    fn still_feasible(&self, v: usize) -> bool {
        let n = self.host.vertex_count();
        let p = self.pattern.vertex_count();
        let mut free = BitSet::new(n);
        for u in v..n {
            free.insert(u);
        }
        let empty_sets = self.set_masks.iter().filter(|m| m.is_empty()).count();
        if empty_sets > n - v {
            return false;
        }
        for i in 0..p {
            if self.set_masks[i].is_empty() {
                continue;
            }
            if !self.connectable(&self.set_masks[i], &free) {
                return false;
            }
            for j in i + 1..p {
                if !self.pattern.has_edge(i, j) || self.set_masks[j].is_empty() {
                    continue;
                }
                if !self.host.sets_adjacent(&self.set_masks[i], &self.set_masks[j]) {
                    // Some free vertex adjacent to one side could still join
                    // the other side (or bridge, in several steps).
                    let reaches = free.iter().any(|u| {
                        let nbm = self.host.neighbor_mask(u);
                        nbm.intersects(&self.set_masks[i]) || nbm.intersects(&self.set_masks[j])
                    });
                    if !reaches {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The set plus all free vertices must span a single component containing
    /// every current member.
    fn connectable(&self, mask: &BitSet, free: &BitSet) -> bool {
        let mut allowed = mask.clone();
        allowed.union_with(free);
        let start = mask.iter().next().expect("nonempty");
        let n = self.host.vertex_count();
        let mut seen = BitSet::new(n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in self.host.neighbors(u) {
                if allowed.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        mask.is_subset_of(&seen)
    }

    fn complete_valid(&self) -> bool {
        let p = self.pattern.vertex_count();
        for i in 0..p {
            if self.set_masks[i].is_empty() || !self.host.is_connected_subset(&self.set_masks[i]) {
                return false;
            }
        }
        for i in 0..p {
            for j in i + 1..p {
                let adjacent = self.host.sets_adjacent(&self.set_masks[i], &self.set_masks[j]);
                let pattern_edge = self.pattern.has_edge(i, j);
                if pattern_edge && !adjacent {
                    return false;
                }
                if self.induced && !pattern_edge && adjacent {
                    return false;
                }
            }
        }
        true
    }
}

/// A topological-minor witness: branch vertices plus internally-disjoint
/// paths (full vertex lists, endpoints included) realizing the clique edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CliqueSubdivisionWitness {
    pub s: usize,
    pub branch: Vec<usize>,
    #[serde(with = "crate::serde_util::edge_map")]
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CliqueSubdivisionWitness {
    pub fn validate(&self, host: &Graph) -> Result<(), ModelViolation> {
        if self.branch.len() != self.s {
            return Err(ModelViolation::Arity { sets: self.branch.len(), pattern: self.s });
        }
        let mut used: BTreeMap<usize, ()> = BTreeMap::new();
        for &b in &self.branch {
            if b >= host.vertex_count() {
                return Err(ModelViolation::ForeignVertex { set: 0, vertex: b });
            }
            if used.insert(b, ()).is_some() {
                return Err(ModelViolation::Overlap(b, b));
            }
        }
        for a in 0..self.s {
            for b in a + 1..self.s {
                let p = self
                    .paths
                    .get(&(a, b))
                    .ok_or(ModelViolation::MissingAdjacency(a, b))?;
                if p.first() != Some(&self.branch[a]) || p.last() != Some(&self.branch[b]) {
                    return Err(ModelViolation::MissingAdjacency(a, b));
                }
                for w in p.windows(2) {
                    if !host.has_edge(w[0], w[1]) {
                        return Err(ModelViolation::MissingAdjacency(a, b));
                    }
                }
                for &x in &p[1..p.len() - 1] {
                    if used.insert(x, ()).is_some() {
                        return Err(ModelViolation::Overlap(x, x));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact search for a subdivision of `K_s` as a subgraph: choose `s` branch
/// vertices in lexicographic order, then route the pairs by backtracking
/// over simple paths (shortest candidates first).
pub fn find_clique_subdivision(host: &Graph, s: usize, budget: &Budget) -> SearchOutcome<CliqueSubdivisionWitness> {
    if host.vertex_count() > budget.max_host || s > 5 {
        return SearchOutcome::BudgetExhausted;
    }
    if s == 0 {
        return SearchOutcome::Found(CliqueSubdivisionWitness { s: 0, branch: vec![], paths: BTreeMap::new() });
    }
    let candidates: Vec<usize> =
        host.vertices().filter(|&v| host.degree(v) >= s.saturating_sub(1)).collect();
    if candidates.len() < s {
        return SearchOutcome::Absent;
    }
    let mut nodes = 0u64;
    let mut branch = Vec::with_capacity(s);
    let result = choose_branch(host, s, &candidates, 0, &mut branch, budget.max_nodes, &mut nodes);
    match result {
        Some(w) => SearchOutcome::Found(w),
        None if nodes > budget.max_nodes => SearchOutcome::BudgetExhausted,
        None => SearchOutcome::Absent,
    }
}

fn choose_branch(
    host: &Graph,
    s: usize,
    candidates: &[usize],
    start: usize,
    branch: &mut Vec<usize>,
    max_nodes: u64,
    nodes: &mut u64,
) -> Option<CliqueSubdivisionWitness> {
    if *nodes > max_nodes {
        return None;
    }
    if branch.len() == s {
        let mut paths = BTreeMap::new();
        let mut used = BitSet::new(host.vertex_count());
        for &b in branch.iter() {
            used.insert(b);
        }
        let pairs: Vec<(usize, usize)> =
            (0..s).flat_map(|a| (a + 1..s).map(move |b| (a, b))).collect();
        if route_pairs(host, branch, &pairs, 0, &mut used, &mut paths, max_nodes, nodes) {
            return Some(CliqueSubdivisionWitness { s, branch: branch.clone(), paths });
        }
        return None;
    }
    for i in start..candidates.len() {
        branch.push(candidates[i]);
        if let Some(w) = choose_branch(host, s, candidates, i + 1, branch, max_nodes, nodes) {
            return Some(w);
        }
        branch.pop();
        if *nodes > max_nodes {
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn route_pairs(
    host: &Graph,
    branch: &[usize],
    pairs: &[(usize, usize)],
    idx: usize,
    used: &mut BitSet,
    paths: &mut BTreeMap<(usize, usize), Vec<usize>>,
    max_nodes: u64,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if *nodes > max_nodes {
        return false;
    }
    if idx == pairs.len() {
        return true;
    }
    let (a, b) = pairs[idx];
    let (from, to) = (branch[a], branch[b]);
    // Enumerate simple paths from..to avoiding used interiors, by increasing
    // length; branch vertices can only appear as endpoints.
    for len in 1..=host.vertex_count() {
        let mut path = vec![from];
        if extend_path(host, to, len, branch, used, &mut path, paths, pairs, idx, max_nodes, nodes) {
            return true;
        }
        if *nodes > max_nodes {
            return false;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn extend_path(
    host: &Graph,
    to: usize,
    remaining: usize,
    branch: &[usize],
    used: &mut BitSet,
    path: &mut Vec<usize>,
    paths: &mut BTreeMap<(usize, usize), Vec<usize>>,
    pairs: &[(usize, usize)],
    idx: usize,
    max_nodes: u64,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if *nodes > max_nodes {
        return false;
    }
    let cur = *path.last().unwrap();
    if remaining == 0 {
        return false;
    }
    if remaining == 1 {
        if host.has_edge(cur, to) {
            let (a, b) = pairs[idx];
            path.push(to);
            let stored = path.clone();
            let interiors: Vec<usize> = stored[1..stored.len() - 1].to_vec();
            for &x in &interiors {
                used.insert(x);
            }
            paths.insert((a, b), stored);
            if route_pairs(host, branch, pairs, idx + 1, used, paths, max_nodes, nodes) {
                return true;
            }
            paths.remove(&(a, b));
            for &x in &interiors {
                used.remove(x);
            }
            path.pop();
        }
        return false;
    }
    for &w in host.neighbors(cur) {
        if w == to || used.contains(w) || branch.contains(&w) || path.contains(&w) {
            continue;
        }
        path.push(w);
        if extend_path(host, to, remaining - 1, branch, used, path, paths, pairs, idx, max_nodes, nodes) {
            return true;
        }
        path.pop();
        if *nodes > max_nodes {
            return false;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GreenCliqueError {
    #[error("green-clique search needs a clique skeleton")]
    NotAClique,
}

/// Two-colors the pairs of branch vertices of a trim supergraph over `K_q`
/// (blue: direct path of at most `ell` edges; green: longer) and searches
/// the green graph for an `s`-clique, exactly. Returns the skeleton ids of
/// the branch vertices, lexicographically least.
pub fn green_clique_ramsey(
    t: &crate::trim::TrimSupergraph,
    ell: usize,
    s: usize,
) -> Result<Option<Vec<usize>>, GreenCliqueError> {
    let crate::trim::Skeleton::Clique { s: q } = t.skeleton else {
        return Err(GreenCliqueError::NotAClique);
    };
    let mut green_edges = Vec::new();
    for (&(a, b), p) in &t.paths {
        if p.len() - 1 > ell {
            green_edges.push((a, b));
        }
    }
    let green = Graph::from_edges(q, &green_edges).expect("pairs of skeleton vertices");
    Ok(lex_least_clique(&green, s))
}

/// Lexicographically least `s`-clique of `g`, by ascending DFS.
pub fn lex_least_clique(g: &Graph, s: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, s: usize, start: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == s {
            return true;
        }
        for v in start..g.vertex_count() {
            if cur.iter().all(|&u| g.has_edge(u, v)) {
                cur.push(v);
                if rec(g, s, v + 1, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::with_capacity(s);
    if rec(g, s, 0, &mut cur) {
        Some(cur)
    } else {
        None
    }
}

/// Shape of a branch set in a minimal model of a subdivision: the trichotomy
/// that downstream wall extraction relies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchShape {
    /// An induced path, listed end to end (singletons included).
    Path(Vec<usize>),
    /// A subdivided star with three legs, each listed from the center out
    /// (center excluded).
    Tripod { center: usize, legs: [Vec<usize>; 3] },
    /// Line graph of a tripod: a triangle with a pendant path per corner
    /// (possibly empty), listed from the corner out.
    LineTripod { corners: [usize; 3], legs: [Vec<usize>; 3] },
}

/// Classifies `host[set]` as a path, a tripod, or the line graph of a tripod.
/// `None` when the set induces anything else.
pub fn classify_branch_shape(host: &Graph, set: &[usize]) -> Option<BranchShape> {
    let (sub, map) = host.induced_subgraph(set).ok()?;
    let n = sub.vertex_count();
    if n == 0 {
        return None;
    }
    let m = sub.edge_count();
    let deg3: Vec<usize> = sub.vertices().filter(|&v| sub.degree(v) == 3).collect();
    if sub.max_degree() > 3 || !sub.is_connected() {
        return None;
    }
    if m == n - 1 {
        // A tree: path or tripod.
        if sub.max_degree() <= 2 {
            let order = trace_path(&sub)?;
            return Some(BranchShape::Path(order.into_iter().map(|v| map.to_old(v)).collect()));
        }
        if deg3.len() != 1 {
            return None;
        }
        let center = deg3[0];
        let mut legs: Vec<Vec<usize>> = Vec::new();
        for &first in sub.neighbors(center) {
            let leg = trace_leg(&sub, center, first)?;
            legs.push(leg.into_iter().map(|v| map.to_old(v)).collect());
        }
        let legs: [Vec<usize>; 3] = legs.try_into().ok()?;
        return Some(BranchShape::Tripod { center: map.to_old(center), legs });
    }
    if m == n {
        // Exactly one cycle; it must be a triangle with pendant paths.
        let tri: Vec<usize> = sub
            .vertices()
            .filter(|&v| {
                sub.neighbors(v).iter().any(|&w| {
                    w != v && sub.neighbors(v).iter().any(|&x| x != w && x != v && sub.has_edge(w, x))
                })
            })
            .collect();
        if tri.len() != 3 {
            return None;
        }
        let (a, b, c) = (tri[0], tri[1], tri[2]);
        if !(sub.has_edge(a, b) && sub.has_edge(b, c) && sub.has_edge(a, c)) {
            return None;
        }
        let mut corners = [0usize; 3];
        let mut legs: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (i, &v) in tri.iter().enumerate() {
            corners[i] = map.to_old(v);
            let out: Vec<usize> =
                sub.neighbors(v).iter().copied().filter(|w| !tri.contains(w)).collect();
            match out.len() {
                0 => {}
                1 => {
                    let leg = trace_leg(&sub, v, out[0])?;
                    legs[i] = leg.into_iter().map(|x| map.to_old(x)).collect();
                }
                _ => return None,
            }
        }
        return Some(BranchShape::LineTripod { corners, legs });
    }
    None
}

/// Orders the vertices of a path graph end to end.
fn trace_path(g: &Graph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n == 1 {
        return Some(vec![0]);
    }
    let ends: Vec<usize> = g.vertices().filter(|&v| g.degree(v) == 1).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut order = vec![ends[0]];
    let mut prev = usize::MAX;
    let mut cur = ends[0];
    while order.len() < n {
        let next = g.neighbors(cur).iter().copied().find(|&w| w != prev)?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Some(order)
}

/// Follows a degree-<=2 chain away from `from`, starting at `first`.
fn trace_leg(g: &Graph, from: usize, first: usize) -> Option<Vec<usize>> {
    let mut leg = vec![first];
    let mut prev = from;
    let mut cur = first;
    loop {
        let next: Vec<usize> = g.neighbors(cur).iter().copied().filter(|&w| w != prev).collect();
        match next.len() {
            0 => return Some(leg),
            1 => {
                leg.push(next[0]);
                prev = cur;
                cur = next[0];
            }
            _ => return None,
        }
    }
}
