//! m₃ is a Hochschild cocycle that is not a coboundary; print the size of the
//! linear system and its inconsistency certificate.

use zigzag::hochschild::{coboundary_membership, slice_obstruction, Cochain};
use zigzag::transfer::{build_contraction, transferred_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let ct = build_contraction(n)?;
    let table = transferred_table(&ct, 3)?;
    let m3 = Cochain::from_table(&table, 3);
    let r = coboundary_membership(ct.c(), &m3);
    println!(
        "δm = m_3: {} unknowns, {} equations, coboundary = {}",
        r.unknowns, r.equations, r.coboundary
    );
    for row in r.certificate.iter().flatten() {
        let ins: Vec<String> = row.inputs.iter().map(|w| w.to_string()).collect();
        println!(
            "  equation at ({}) -> {}, rhs {}",
            ins.join(", "),
            row.output,
            u8::from(row.rhs)
        );
    }
    let slice = slice_obstruction(ct.c(), n, &m3);
    println!("slice unknowns: {}", slice.unknowns.join(" "));
    for (i, eqs) in &slice.equations {
        for (terms, rhs) in eqs {
            println!("  i = {i}: {} = {}", terms.join(" + "), u8::from(*rhs));
        }
    }
    Ok(())
}
