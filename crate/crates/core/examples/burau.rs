//! Temperley-Lieb and Burau matrices, their relations, and the comparison
//! with the cup-cap functors on simple modules at q = -1.

use zigzag::burau::{braid_matrix, decategorification_check, tl_matrix, verify_tl_braid};
use zigzag::report::all_passed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    for i in 1..n {
        println!("u_{i} = {}", tl_matrix(n, i)?);
        println!("t_{i} = {}", braid_matrix(n, i)?);
    }
    println!("TL and braid relations: {}", all_passed(&verify_tl_braid(n)?));
    let (checks, rows) = decategorification_check(n)?;
    for r in &rows {
        println!(
            "  row {} of [U_{}] = {:?}, u_{} at q = -1 gives {:?}",
            r.i, r.i, r.row, r.i, r.expected
        );
    }
    println!("decategorification matches: {}", all_passed(&checks));
    Ok(())
}
