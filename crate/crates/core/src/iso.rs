//! Graph isomorphism by iterated degree refinement plus backtracking.
//!
//! Only used on the small, rigid graphs this crate manipulates (walls,
//! subdivisions, line graphs); the refinement partition prunes hard enough
//! that the backtracking stays shallow there.

use crate::graph::Graph;
use std::collections::BTreeMap;

/// Color classes after iterated neighborhood-multiset refinement (1-WL).
fn refine_colors(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut colors: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    for _ in 0..n {
        let mut sigs: Vec<(u64, Vec<u64>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u64> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        // Canonical palette: color ids follow the sorted signature order, so
        // they agree across different graphs.
        let mut uniq: Vec<&(u64, Vec<u64>)> = sigs.iter().collect();
        uniq.sort();
        uniq.dedup();
        let palette: BTreeMap<&(u64, Vec<u64>), u64> =
            uniq.into_iter().enumerate().map(|(i, s)| (s, i as u64)).collect();
        let new_colors: Vec<u64> = sigs.iter().map(|s| palette[s]).collect();
        if new_colors == colors {
            break;
        }
        colors = new_colors;
    }
    colors
}

/// Exact isomorphism test.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Finds a bijection `a -> b` preserving adjacency exactly, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let ca = refine_colors(a);
    let cb = refine_colors(b);
    let mut hist_a: BTreeMap<u64, usize> = BTreeMap::new();
    let mut hist_b: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_insert(0) += 1;
    }
    for &c in &cb {
        *hist_b.entry(c).or_insert(0) += 1;
    }
    if hist_a != hist_b {
        return None;
    }

    // Map vertices of `a` in order of rarest color class first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (hist_a[&ca[v]], ca[v], v));

    let mut mapping: Vec<Option<usize>> = vec![None; n];
    let mut reverse: Vec<Option<usize>> = vec![None; n];

    fn backtrack(
        a: &Graph,
        b: &Graph,
        ca: &[u64],
        cb: &[u64],
        order: &[usize],
        depth: usize,
        mapping: &mut Vec<Option<usize>>,
        reverse: &mut Vec<Option<usize>>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'cand: for w in 0..b.vertex_count() {
            if reverse[w].is_some() || cb[w] != ca[v] || b.degree(w) != a.degree(v) {
                continue;
            }
            // Mapped neighbors of v must land on neighbors of w...
            for &x in a.neighbors(v) {
                if let Some(mx) = mapping[x] {
                    if !b.has_edge(w, mx) {
                        continue 'cand;
                    }
                }
            }
            // ...and every mapped neighbor of w must come from a neighbor of v.
            for &y in b.neighbors(w) {
                if let Some(pre) = reverse[y] {
                    if !a.has_edge(v, pre) {
                        continue 'cand;
                    }
                }
            }
            mapping[v] = Some(w);
            reverse[w] = Some(v);
            if backtrack(a, b, ca, cb, order, depth + 1, mapping, reverse) {
                return true;
            }
            mapping[v] = None;
            reverse[w] = None;
        }
        false
    }

    if backtrack(a, b, &ca, &cb, &order, 0, &mut mapping, &mut reverse) {
        Some(mapping.into_iter().map(|m| m.unwrap()).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, cycle, grid, path, wall};

    #[test]
    fn basic_positive_and_negative() {
        assert!(is_isomorphic(&cycle(6), &cycle(6)));
        assert!(!is_isomorphic(&cycle(6), &path(6)));
        assert!(!is_isomorphic(&complete(4), &cycle(4)));
        // Relabeled grid.
        let g = grid(3).unwrap().graph;
        let perm: Vec<usize> = vec![4, 7, 2, 5, 0, 8, 3, 6, 1];
        let edges: Vec<(usize, usize)> =
            g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let h = Graph::from_edges(9, &edges).unwrap();
        let m = find_isomorphism(&g, &h).expect("relabeling is an isomorphism");
        for &(u, v) in g.edges() {
            assert!(h.has_edge(m[u], m[v]));
        }
    }

    #[test]
    fn wall_two_is_c6() {
        assert!(is_isomorphic(&wall(2).unwrap().graph, &cycle(6)));
    }
}
