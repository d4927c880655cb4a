//! Sparse thinning: inside a quasi-subdivision of a big wall, keep every
//! third row and widely spaced columns to trace a subdivision of a small
//! wall. The induced subgraph is 2-connected, keeps treewidth at least w
//! (certified by a wall minor model), and its edge count is at most
//! (1+eps) n as an exact rational inequality.
//!
//! Run with: cargo run --example thin_sparse_wall

use sparsetw::constructions::{quasi_subdivide, wall, SubdivisionLengths};
use sparsetw::rational::Rational;
use sparsetw::treewidth::{tw_lower_bound_from_witness, WitnessKind};
use sparsetw::wall::{thin_to_sparse_wall, used_column_step, WallQuasiSubdivisionWitness};

fn main() {
    let cases = [
        (2usize, Rational::one(), 11usize),
        (2, Rational::new(1, 2).unwrap(), 19),
        (3, Rational::one(), 16),
    ];
    for (w, eps, big_k) in cases {
        let wk = wall(big_k).unwrap();
        let deg3: Vec<usize> =
            wk.graph.vertices().filter(|&v| wk.graph.degree(v) == 3).collect();
        let (host, spec) = quasi_subdivide(
            &wk.graph,
            &deg3,
            &SubdivisionLengths::AtLeast { floor: 1, spread: 2, seed: 3 },
        )
        .unwrap();
        let witness = WallQuasiSubdivisionWitness::from_planted(big_k, &spec);
        let out = thin_to_sparse_wall(&host, &witness, w, eps).unwrap();

        let (sub, _) = host.induced_subgraph(&out.vertex_set).unwrap();
        let bound =
            tw_lower_bound_from_witness(&sub, WitnessKind::Wall { k: w }, &out.wall_model).unwrap();
        let lhs = Rational::from_integer(sub.edge_count() as i64);
        let rhs = (Rational::one() + eps) * Rational::from_integer(sub.vertex_count() as i64);
        println!(
            "W_{big_k} host ({} vertices), target w={w}, eps={eps} (column step {}):",
            host.vertex_count(),
            used_column_step(eps),
        );
        println!(
            "  kept {} vertices, {} edges; 2-connected: {}; tw >= {bound}; density check {lhs} <= {rhs}: {}",
            sub.vertex_count(),
            sub.edge_count(),
            sub.is_two_connected(),
            lhs <= rhs,
        );
        println!(
            "  degree-3 positions q = {}, so |E| <= |V| - 1 + 2q = {}",
            out.q,
            sub.vertex_count() as i64 - 1 + 2 * out.q as i64,
        );
    }
}
