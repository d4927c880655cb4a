//! Grids, walls, and the explicit induced minor models between them:
//! `Gamma_k` hosts a `W_{k/2}` model by vertical-domino contractions, and
//! `W_k` hosts a `Gamma_k` model by horizontal-pair contractions. Composing
//! the two realizes `Gamma_{k/2}` inside `Gamma_k`.
//!
//! Run with: cargo run --example grid_wall_models

use sparsetw::constructions::{grid, wall};
use sparsetw::minor::{compose_models, validate_model};
use sparsetw::wall::{grid_to_wall_model, wall_to_grid_model};

fn main() {
    for k in [4usize, 6, 8, 10] {
        let g = grid(k).unwrap();
        let model = grid_to_wall_model(k).unwrap();
        validate_model(&g.graph, &model).unwrap();
        let dominoes = model.branch_sets.iter().filter(|s| s.len() == 2).count();
        println!(
            "Gamma_{k} ({} vertices) hosts an induced W_{} model: {} branch sets, {} dominoes",
            g.graph.vertex_count(),
            k / 2,
            model.branch_sets.len(),
            dominoes,
        );
    }
    println!();

    for k in [2usize, 4, 7] {
        let w = wall(k).unwrap();
        let model = wall_to_grid_model(k).unwrap();
        validate_model(&w.graph, &model).unwrap();
        let singletons = model.branch_sets.iter().filter(|s| s.len() == 1).count();
        println!(
            "W_{k} ({} vertices) hosts an induced Gamma_{k} model: {} pairs, {} singletons",
            w.graph.vertex_count(),
            model.branch_sets.len() - singletons,
            singletons,
        );
    }
    println!();

    // Transitivity: Gamma_{k/2} inside Gamma_k through the wall.
    let k = 8;
    let outer = grid_to_wall_model(k).unwrap();
    let inner = wall_to_grid_model(k / 2).unwrap();
    let composed = compose_models(&inner, &outer).unwrap();
    validate_model(&grid(k).unwrap().graph, &composed).unwrap();
    println!(
        "composed: Gamma_{} as an induced minor of Gamma_{k}, largest branch set {}",
        k / 2,
        composed.branch_sets.iter().map(|s| s.len()).max().unwrap(),
    );
}
