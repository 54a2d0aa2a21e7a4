//! The derivation on Aₙ^! and the explicit resolutions of its simple modules.

use zigzag::dgalg::{an_shriek_dg, build_resolution, verify_resolution, Side};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let dg = an_shriek_dg(n)?;
    let alg = dg.algebra();
    println!(
        "{} with d² = 0: {}, Leibniz: {}",
        alg.name(),
        dg.check_d_squared().is_none(),
        dg.check_leibniz().is_none()
    );
    for k in 0..alg.dim() {
        let d = dg.d_basis(k);
        if !d.is_zero() {
            println!("  d{} = {}", alg.basis()[k].word, alg.display(d));
        }
    }
    for side in [Side::Left, Side::Right] {
        for i in 1..=n {
            let m = build_resolution(&dg, i, side)?;
            let gens: Vec<String> = m
                .generators()
                .iter()
                .map(|g| format!("P{}[{}]", g.proj, g.shift))
                .collect();
            let r = verify_resolution(&dg, i, side)?;
            println!(
                "{side:?} L_{i}: {} homology {:?} ok={}",
                gens.join(" "),
                r.homology,
                r.passed()
            );
        }
    }
    Ok(())
}
