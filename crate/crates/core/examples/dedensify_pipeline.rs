//! The density-reduction pipeline on trim spanning supergraphs: split a
//! clique subdivision into a balanced biclique, dedensify by balanced
//! partitions (the expected number of surviving extra edges drops by a
//! factor h), and assemble the final sparse 2-connected witness with an
//! exact certificate.
//!
//! Run with: cargo run --example dedensify_pipeline

use sparsetw::dedensify::{
    assemble_sparse_witness, clique_to_biclique_split, dedensify_balanced,
    partition_extras_survey, DedensifyMode,
};
use sparsetw::rational::Rational;
use sparsetw::trim::{random_trim_supergraph, validate_trim, Skeleton};

fn main() {
    // A trim spanning supergraph of a (>=5)-subdivision of K_16 with some
    // planted extra edges.
    let s = 8usize;
    let t = random_trim_supergraph(Skeleton::Clique { s: 2 * s }, 5, 2, 12, 41).unwrap();
    let report = validate_trim(&t).unwrap();
    println!(
        "input: trim supergraph of a K_{} subdivision, {} vertices, {} extras, min path length {}",
        2 * s,
        t.host.vertex_count(),
        report.extra_edges.len(),
        report.min_path_length,
    );

    // Step 1: balanced bipartition of the branch vertices; dropping
    // same-side paths keeps at least half the vertices.
    let split = clique_to_biclique_split(&t, 5, 128).unwrap();
    println!(
        "split: kept {} of {} vertices across sides A={:?} B={:?}",
        split.kept_vertices, split.input_vertices, split.side_a, split.side_b,
    );

    // Step 2: dedensify. The per-draw survey shows the mean surviving-extras
    // total sits near m/h, and a qualifying cell is selected exactly.
    let h = 2usize;
    let m = split.result.extra_edges().len();
    let survey = partition_extras_survey(&split.result, h, 99, 200).unwrap();
    let mean = survey.iter().sum::<usize>() as f64 / survey.len() as f64;
    println!("dedensify: m = {m}, h = {h}; mean surviving extras over 200 draws = {mean:.2} (m/h = {:.2})", m as f64 / h as f64);
    let out = dedensify_balanced(&split.result, h, DedensifyMode::Sampled { seed: 7, draws: 256 }).unwrap();
    println!(
        "  chose cell {:?}: {} extras on {} vertices; exact bound extras*h*n <= m*n' holds: {}",
        out.chosen, out.extras, out.sub_vertices, out.bound_holds(),
    );

    // End to end with the certificate.
    let d = t.host.edge_density().unwrap();
    let eps = Rational::from_integer(4) * d / Rational::from_integer(h as i64);
    let w = s / h;
    let witness = assemble_sparse_witness(&t, w, eps, None, 23).unwrap();
    let c = &witness.certificate;
    println!();
    println!("assembled witness for w = {w}, eps = {eps}:");
    println!("  {} vertices, {} edges, {} extras, biclique side {}", c.vertices, c.edges, c.extras, c.biclique_side);
    println!("  2-connected: {}", c.two_connected);
    println!("  {}: {} <= {} -> {}", c.density.label, c.density.lhs, c.density.rhs, c.density.holds);
    println!(
        "  {}: {} <= {} -> {}",
        c.subdivision_density.label, c.subdivision_density.lhs, c.subdivision_density.rhs, c.subdivision_density.holds
    );
    println!(
        "  {}: {} <= {} -> {}",
        c.extras_density.label, c.extras_density.lhs, c.extras_density.rhs, c.extras_density.holds
    );
    println!("  treewidth lower bound {} (target {w})", c.treewidth_lower_bound);
}
