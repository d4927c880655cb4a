//! The exact oracles: treewidth by elimination-order DP, bramble order by
//! exhaustive hitting-set search, and the duality `tw + 1 = bn` observed on
//! the 3x3 grid with its crosses bramble.
//!
//! Run with: cargo run --example treewidth_oracle

use sparsetw::bramble::bramble_order;
use sparsetw::constructions::{biclique, complete, grid};
use sparsetw::decomposition::validate_tree_decomposition;
use sparsetw::expansion::nabla_r;
use sparsetw::fixtures::crosses_bramble;
use sparsetw::treewidth::exact_treewidth;

fn main() {
    for (name, g) in [
        ("K_5", complete(5)),
        ("K_{3,3}", biclique(3, 3)),
        ("Gamma_3", grid(3).unwrap().graph),
        ("Gamma_4", grid(4).unwrap().graph),
    ] {
        let (tw, td) = exact_treewidth(&g).unwrap();
        let report = validate_tree_decomposition(&g, &td).unwrap();
        println!(
            "tw({name}) = {tw}; witnessing decomposition re-validates at width {} (adhesion {})",
            report.width, report.adhesion_size,
        );
    }
    println!();

    let g3 = grid(3).unwrap();
    let crosses = crosses_bramble(&g3);
    let (order, hitting) = bramble_order(&g3.graph, &crosses).unwrap();
    let (tw, _) = exact_treewidth(&g3.graph).unwrap();
    println!("crosses bramble of Gamma_3: order {order}, minimum hitting set {hitting:?}");
    println!("duality on Gamma_3: bramble order {order} = treewidth {tw} + 1");
    println!();

    let c6 = sparsetw::constructions::cycle(6);
    for r in 0..=2 {
        println!("nabla_{r}(C_6) = {}", nabla_r(&c6, r).unwrap());
    }
    println!("nabla_1(K_4) = {}", nabla_r(&complete(4), 1).unwrap());
}
