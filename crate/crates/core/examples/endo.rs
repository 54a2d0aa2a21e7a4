//! The endomorphism algebra E′ of the resolutions: its named block bases,
//! homology, and the truncation S used for the transfer.

use zigzag::endo::{build_eprime, build_named_maps, eprime_homology, verify_generator_relations};
use zigzag::report::all_passed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let maps = build_named_maps(n)?;
    let relations = verify_generator_relations(&maps);
    println!(
        "{} generator relations hold: {}",
        relations.len(),
        all_passed(&relations)
    );
    let (ep, checks) = build_eprime(maps)?;
    println!("E′ block checks pass: {}", all_passed(&checks));
    for (&(i, j), b) in ep.blocks() {
        if b.dim() > 0 {
            let names: Vec<String> = b.names.iter().map(|e| e.to_string()).collect();
            println!("  1_{i}E′1_{j} = <{}>", names.join(", "));
        }
    }
    for ((i, j), h) in eprime_homology(&ep) {
        if !h.is_empty() {
            println!("  H(1_{i}E′1_{j}) = {h:?}");
        }
    }
    let s = ep.truncate(&(1..n).collect::<Vec<_>>());
    println!(
        "S has dimension {} and axioms pass: {}",
        s.dim(),
        all_passed(&s.check_axioms())
    );
    Ok(())
}
