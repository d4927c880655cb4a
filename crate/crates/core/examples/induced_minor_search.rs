//! Exact containment search with three-valued outcomes: induced minors by
//! backtracking over branch-set assignments, and clique subdivisions by
//! branch-vertex choice plus disjoint path routing. Running both gives the
//! grid-or-clique dichotomy check on a concrete host.
//!
//! Run with: cargo run --example induced_minor_search

use sparsetw::constructions::{complete, cycle, grid, subdivide, SubdivisionLengths};
use sparsetw::minor::{find_clique_subdivision, find_induced_minor, Budget, SearchOutcome};

fn describe<T>(outcome: &SearchOutcome<T>) -> &'static str {
    match outcome {
        SearchOutcome::Found(_) => "found",
        SearchOutcome::Absent => "absent (certified)",
        SearchOutcome::BudgetExhausted => "budget exhausted",
    }
}

fn main() {
    let budget = Budget::default();

    // C_4 as an induced minor: present in the grid, impossible in K_4.
    let host = grid(4).unwrap().graph;
    let out = find_induced_minor(&host, &cycle(4), &budget);
    println!("C_4 in Gamma_4: {}", describe(&out));
    if let SearchOutcome::Found(model) = &out {
        println!("  branch sets: {:?}", model.branch_sets);
    }
    let out = find_induced_minor(&complete(4), &cycle(4), &budget);
    println!("C_4 in K_4:    {}", describe(&out));
    println!();

    // Clique subdivisions: K_4 planted as a 2-subdivision is recovered.
    let (host, _) = subdivide(&complete(4), &SubdivisionLengths::ExactUniform(2)).unwrap();
    let budget = Budget { max_host: 24, ..Budget::default() };
    let out = find_clique_subdivision(&host, 4, &budget);
    println!("K_4 subdivision in its own 2-subdivision: {}", describe(&out));
    if let SearchOutcome::Found(w) = &out {
        println!("  branch vertices {:?}", w.branch);
    }
    let out = find_clique_subdivision(&cycle(6), 4, &budget);
    println!("K_4 subdivision in C_6: {}", describe(&out));
    println!();

    // The dichotomy check on one host: a large grid induced minor or a large
    // clique subdivision. The 4x4 grid has the former and not the latter.
    let host = grid(4).unwrap().graph;
    let grid_side = find_induced_minor(&host, &grid(2).unwrap().graph, &budget);
    let clique_side = find_clique_subdivision(&host, 5, &budget);
    println!(
        "dichotomy on Gamma_4: Gamma_2 induced minor {} / K_5 subdivision {}",
        describe(&grid_side),
        describe(&clique_side),
    );
}
