//! Transfer the DG structure of S onto its homology C and print the
//! nonzero higher operations.

use zigzag::report::all_passed;
use zigzag::transfer::{a_infinity_relation_check, build_contraction, transferred_table, verify_contraction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let max_arity = 6;
    let ct = build_contraction(n)?;
    let report = verify_contraction(&ct);
    println!(
        "contraction holds: {}, side conditions: {}",
        report.passed(),
        all_passed(&report.side_conditions)
    );
    let table = transferred_table(&ct, max_arity)?;
    let c = table.algebra();
    for k in 3..=max_arity {
        let layer = table.layer(k).cloned().unwrap_or_default();
        println!("m_{k}: {} nonzero values", layer.len());
        for (inputs, out) in &layer {
            println!("  m_{k}{} = {}", table.show(inputs), c.display(out));
        }
    }
    let relations = a_infinity_relation_check(&table, max_arity);
    println!("A∞ relations through arity {max_arity}: {}", all_passed(&relations));
    Ok(())
}
