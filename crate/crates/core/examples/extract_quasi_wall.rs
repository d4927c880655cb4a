//! Extracting an induced wall quasi-subdivision from a wall induced minor
//! model: plant a (>=2)-subdivision of W_9 (whose ground-truth model is
//! known), refine the model to a minimal one, run the case analysis, and
//! validate the resulting W_3 witness. The adversarial variant plants a
//! mid-path third-neighbor touch, which forces the triangle surgery.
//!
//! Run with: cargo run --example extract_quasi_wall

use sparsetw::fixtures::{adversarial_wall_host, wall_subdivision_host};
use sparsetw::wall::{extract_wall_quasi_subdivision, validate_wall_quasi_subdivision};

fn main() {
    let (host, model) = wall_subdivision_host(9, 2, 2, 7);
    let (witness, report) = extract_wall_quasi_subdivision(&host, &model).unwrap();
    let quasi = validate_wall_quasi_subdivision(&host, &witness).unwrap();
    println!(
        "planted subdivision of W_9 ({} vertices) -> induced quasi-subdivision of W_{}",
        host.vertex_count(),
        witness.m,
    );
    println!(
        "  witness: {} vertices, {} edges, {} triangles; branch-set shapes: {} paths, {} tripods, {} line-tripods",
        quasi.vertices, quasi.edges, quasi.triangles,
        report.path_sets, report.tripod_sets, report.line_tripod_sets,
    );
    println!();

    for (label, triangle_case) in [("triangle surgery", true), ("junction surgery", false)] {
        let (host, model, attach) = adversarial_wall_host(9, triangle_case, 13);
        let (witness, report) = extract_wall_quasi_subdivision(&host, &model).unwrap();
        validate_wall_quasi_subdivision(&host, &witness).unwrap();
        println!(
            "adversarial host ({label}): {} surgeries, {} triangles; host vertex {attach} became part of the junction",
            report.surgeries, report.triangles,
        );
    }
}
