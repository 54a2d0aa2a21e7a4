//! Build the three named algebras and print the block bases of the zigzag
//! algebra with a few products.

use zigzag::quiver::{build_named_algebra, path, NamedAlgebra};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    for name in [NamedAlgebra::AnShriek, NamedAlgebra::An, NamedAlgebra::Zigzag] {
        let alg = build_named_algebra(name, n)?;
        println!("{}: dimension {}", alg.name(), alg.dim());
    }
    let c = build_named_algebra(NamedAlgebra::Zigzag, n)?;
    for &i in c.vertex_set() {
        for &j in c.vertex_set() {
            let words: Vec<String> = c
                .block_indices(i, j)
                .iter()
                .map(|&k| c.basis()[k].word.to_string())
                .collect();
            if !words.is_empty() {
                println!("  ({i})C({j}) = <{}>", words.join(", "));
            }
        }
    }
    let up = c.word(&path(&[1, 2]))?;
    let down = c.word(&path(&[2, 1]))?;
    println!("(1|2)·(2|1) = {}", c.display(c.multiply(&up, &down)?.coeffs()));
    println!("(2|1)·(1|2) = {}", c.display(c.multiply(&down, &up)?.coeffs()));
    Ok(())
}
