//! The A∞ bimodules B_k over C and the map f: B_k → C. The map with
//! vanishing linear part fails the morphism identity; the one whose linear
//! part is multiplication passes.

use std::sync::Arc;

use zigzag::bimodule::{
    bimodule_relation_check, build_bk, build_diagonal_bimodule, build_f, morphism_relation_check, LinearPart,
};
use zigzag::report::{all_passed, failures};
use zigzag::transfer::{build_contraction, transferred_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let bound = 6;
    let table = Arc::new(transferred_table(&build_contraction(n)?, bound)?);
    println!(
        "diagonal C: {}",
        all_passed(&bimodule_relation_check(&build_diagonal_bimodule(table.clone()), bound))
    );
    for k in 1..n {
        let bk = build_bk(table.clone(), k);
        let labels: Vec<&str> = bk.basis.iter().map(|b| b.label.as_str()).collect();
        println!(
            "B_{k} (dim {}): {}",
            bk.dim(),
            all_passed(&bimodule_relation_check(&bk, bound))
        );
        println!("  basis {}", labels.join(", "));
        for linear in [LinearPart::Zero, LinearPart::Multiplication] {
            let checks = morphism_relation_check(&build_f(table.clone(), k, linear), bound);
            match failures(&checks).first() {
                None => println!("  f with {linear:?} linear part: pass"),
                Some(c) => println!(
                    "  f with {linear:?} linear part: fails at {}",
                    c.witness.clone().unwrap_or_default()
                ),
            }
        }
    }
    Ok(())
}
