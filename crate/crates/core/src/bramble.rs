//! Brambles and their order: exact minimum hitting sets by branching with a
//! disjoint-set packing lower bound.

use crate::bitset::BitSet;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// A family of connected, pairwise-touching vertex sets of a host graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bramble {
    pub sets: Vec<Vec<usize>>,
}

impl Bramble {
    pub fn new(sets: Vec<Vec<usize>>) -> Bramble {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Bramble { sets }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BrambleViolation {
    #[error("bramble has no sets")]
    Empty,
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} mentions vertex {vertex} outside the host")]
    ForeignVertex { set: usize, vertex: usize },
    #[error("set {0} is not connected in the host")]
    Disconnected(usize),
    #[error("sets {0} and {1} do not touch")]
    NotTouching(usize, usize),
    #[error("instance too large for exact search: |V| * |sets| = {0} > {1}")]
    CapExceeded(usize, usize),
}

pub const DEFAULT_BRAMBLE_CAP: usize = 100_000;

/// Checks connectivity of every set and pairwise touching.
pub fn validate_bramble(g: &Graph, b: &Bramble) -> Result<(), BrambleViolation> {
    if b.sets.is_empty() {
        return Err(BrambleViolation::Empty);
    }
    let n = g.vertex_count();
    let mut masks = Vec::with_capacity(b.sets.len());
    for (i, s) in b.sets.iter().enumerate() {
        if s.is_empty() {
            return Err(BrambleViolation::EmptySet(i));
        }
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(BrambleViolation::ForeignVertex { set: i, vertex: v });
        }
        let mask = BitSet::from_iter_with_capacity(n, s.iter().copied());
        if !g.is_connected_subset(&mask) {
            return Err(BrambleViolation::Disconnected(i));
        }
        masks.push(mask);
    }
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            let touch = masks[i].intersects(&masks[j]) || g.sets_adjacent(&masks[i], &masks[j]);
            if !touch {
                return Err(BrambleViolation::NotTouching(i, j));
            }
        }
    }
    Ok(())
}

/// Exact bramble order: the minimum size of a hitting set, with a witness.
pub fn bramble_order(g: &Graph, b: &Bramble) -> Result<(usize, Vec<usize>), BrambleViolation> {
    bramble_order_with_cap(g, b, DEFAULT_BRAMBLE_CAP)
}

pub fn bramble_order_with_cap(
    g: &Graph,
    b: &Bramble,
    cap: usize,
) -> Result<(usize, Vec<usize>), BrambleViolation> {
    validate_bramble(g, b)?;
    let work = g.vertex_count() * b.sets.len();
    if work > cap {
        return Err(BrambleViolation::CapExceeded(work, cap));
    }
    let n = g.vertex_count();
    let masks: Vec<BitSet> =
        b.sets.iter().map(|s| BitSet::from_iter_with_capacity(n, s.iter().copied())).collect();

    let mut best: Option<Vec<usize>> = None;
    let mut chosen: Vec<usize> = Vec::new();
    let mut hit = vec![false; masks.len()];
    branch(&masks, &mut chosen, &mut hit, &mut best);
    let best = best.expect("the union of all sets is a hitting set");
    Ok((best.len(), best))
}

/// Lower bound: a greedy packing of pairwise-disjoint unhit sets (each needs
/// its own hitting vertex).
fn packing_bound(masks: &[BitSet], hit: &[bool], capacity: usize) -> usize {
    let mut used = BitSet::new(capacity);
    let mut count = 0;
    let mut order: Vec<usize> = (0..masks.len()).filter(|&i| !hit[i]).collect();
    order.sort_by_key(|&i| masks[i].len());
    for i in order {
        if !masks[i].intersects(&used) {
            used.union_with(&masks[i]);
            count += 1;
        }
    }
    count
}

fn branch(masks: &[BitSet], chosen: &mut Vec<usize>, hit: &mut [bool], best: &mut Option<Vec<usize>>) {
    if let Some(b) = best {
        let lb = packing_bound(masks, hit, masks.first().map(|m| m.capacity()).unwrap_or(0));
        if chosen.len() + lb >= b.len() {
            return;
        }
    }
    // Branch on the smallest unhit set.
    let next = (0..masks.len())
        .filter(|&i| !hit[i])
        .min_by_key(|&i| masks[i].len());
    let Some(next) = next else {
        if best.as_ref().map_or(true, |b| chosen.len() < b.len()) {
            *best = Some(chosen.clone());
        }
        return;
    };
    for v in masks[next].iter() {
        let flipped: Vec<usize> = (0..masks.len())
            .filter(|&i| !hit[i] && masks[i].contains(v))
            .collect();
        for &i in &flipped {
            hit[i] = true;
        }
        chosen.push(v);
        branch(masks, chosen, hit, best);
        chosen.pop();
        for &i in &flipped {
            hit[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, grid};

    #[test]
    fn singletons_of_a_triangle() {
        let g = complete(3);
        let b = Bramble::new(vec![vec![0], vec![1], vec![2]]);
        let (order, witness) = bramble_order(&g, &b).unwrap();
        assert_eq!(order, 3);
        assert_eq!(witness.len(), 3);
    }

    #[test]
    fn rows_and_columns_of_small_grid() {
        let g2 = grid(2).unwrap();
        let row = |r: usize| (0..2).map(|c| g2.index(r, c)).collect::<Vec<_>>();
        let col = |c: usize| (0..2).map(|r| g2.index(r, c)).collect::<Vec<_>>();
        let b = Bramble::new(vec![row(0), row(1), col(0), col(1)]);
        let (order, _) = bramble_order(&g2.graph, &b).unwrap();
        assert_eq!(order, 2);
    }

    /// The crosses bramble of the 3x3 grid. Its order, found by exhaustive
    /// search, certifies tw >= 3.
    #[test]
    fn crosses_bramble_of_gamma_three() {
        let g3 = grid(3).unwrap();
        let b = crate::fixtures::crosses_bramble(&g3);
        let (order, witness) = bramble_order(&g3.graph, &b).unwrap();
        assert_eq!(order, 4);
        // Duality direction: tw + 1 >= order of any bramble; here equality.
        let (tw, _) = crate::treewidth::exact_treewidth(&g3.graph).unwrap();
        assert_eq!(tw + 1, 4);
        // The witness hits every cross.
        for s in &b.sets {
            assert!(s.iter().any(|v| witness.contains(v)));
        }
    }

    #[test]
    fn violations() {
        let g = crate::constructions::path(4);
        let b = Bramble::new(vec![vec![0, 3], vec![1]]);
        assert_eq!(validate_bramble(&g, &b), Err(BrambleViolation::Disconnected(0)));
        let b = Bramble::new(vec![vec![0], vec![3]]);
        assert_eq!(validate_bramble(&g, &b), Err(BrambleViolation::NotTouching(0, 1)));
        let b = Bramble::new(vec![vec![0], vec![9]]);
        assert!(matches!(validate_bramble(&g, &b), Err(BrambleViolation::ForeignVertex { .. })));
        assert!(bramble_order_with_cap(&g, &Bramble::new(vec![vec![0, 1]]), 1).is_err());
    }
}
