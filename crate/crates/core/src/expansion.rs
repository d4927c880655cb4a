//! Exact bounded expansion `nabla_r` on tiny instances, by exhaustive
//! enumeration of depth-r minors.
//!
//! A depth-r minor picks pairwise-disjoint connected branch sets whose radius
//! *inside the branch set* is at most `r`; edge deletions never raise the
//! edge-vertex ratio, so it suffices to count all adjacencies between chosen
//! sets.

use crate::bitset::BitSet;
use crate::graph::Graph;
use crate::rational::Rational;
use std::collections::HashMap;

pub const NABLA_VERTEX_CAP: usize = 12;
pub const NABLA_RADIUS_CAP: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NablaError {
    #[error("graph has {0} vertices, above the nabla cap {1}")]
    VertexCapExceeded(usize, usize),
    #[error("radius {0} above the nabla cap {1}")]
    RadiusCapExceeded(usize, usize),
    #[error("nabla of the empty graph is undefined")]
    EmptyGraph,
}

/// Radius of `g[set]`: min over centers of the max distance inside the set.
/// `usize::MAX` when the set is disconnected.
fn subset_radius(g: &Graph, set: &[usize]) -> usize {
    let mut best = usize::MAX;
    for &center in set {
        let mut dist: HashMap<usize, usize> = HashMap::new();
        dist.insert(center, 0);
        let mut queue = std::collections::VecDeque::from([center]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if set.contains(&w) && !dist.contains_key(&w) {
                    dist.insert(w, dist[&u] + 1);
                    queue.push_back(w);
                }
            }
        }
        if dist.len() == set.len() {
            let ecc = *dist.values().max().unwrap();
            best = best.min(ecc);
        }
    }
    best
}

/// Max edge density over depth-`r` minors, exactly. Depth-0 minors are
/// subgraphs, so `nabla_0` is the density of the densest subgraph.
pub fn nabla_r(g: &Graph, r: usize) -> Result<Rational, NablaError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(NablaError::EmptyGraph);
    }
    if n > NABLA_VERTEX_CAP {
        return Err(NablaError::VertexCapExceeded(n, NABLA_VERTEX_CAP));
    }
    if r > NABLA_RADIUS_CAP {
        return Err(NablaError::RadiusCapExceeded(r, NABLA_RADIUS_CAP));
    }

    // Candidate branch sets: connected subsets of radius <= r, as bitmasks.
    let mut feasible: HashMap<u32, bool> = HashMap::new();
    let mut is_branch_set = |mask: u32| -> bool {
        *feasible.entry(mask).or_insert_with(|| {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            subset_radius(g, &set) <= r
        })
    };

    // Enumerate partitions of subsets of V into labeled-by-min-element parts:
    // each vertex in id order is discarded, joins an existing part, or opens
    // a new one. Parts are finalized at the end.
    let mut best = Rational::zero();
    let mut parts: Vec<u32> = Vec::new();
    enumerate(g, 0, n, &mut parts, &mut is_branch_set, &mut best);
    Ok(best)
}

fn enumerate(
    g: &Graph,
    v: usize,
    n: usize,
    parts: &mut Vec<u32>,
    is_branch_set: &mut impl FnMut(u32) -> bool,
    best: &mut Rational,
) {
    if v == n {
        if parts.is_empty() {
            return;
        }
        if parts.iter().any(|&m| !is_branch_set(m)) {
            return;
        }
        let masks: Vec<BitSet> = parts
            .iter()
            .map(|&m| BitSet::from_iter_with_capacity(n, (0..n).filter(|&u| m >> u & 1 == 1)))
            .collect();
        let mut edges = 0i64;
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                if g.sets_adjacent(&masks[i], &masks[j]) {
                    edges += 1;
                }
            }
        }
        let density = Rational::new(edges, parts.len() as i64).expect("parts nonempty");
        if density > *best {
            *best = density;
        }
        return;
    }
    // Discard v.
    enumerate(g, v + 1, n, parts, is_branch_set, best);
    // Join an existing part.
    for i in 0..parts.len() {
        parts[i] |= 1 << v;
        enumerate(g, v + 1, n, parts, is_branch_set, best);
        parts[i] &= !(1 << v);
    }
    // Open a new part.
    parts.push(1 << v);
    enumerate(g, v + 1, n, parts, is_branch_set, best);
    parts.pop();
}
