//! Local bisections of `O(Z/3)` and their product table.

use quantal::bisections::{Bisections, Product};
use quantal::catalog;

fn main() -> quantal::error::Result<()> {
    let q = catalog::cyclic_groupoid(3).quantale()?;
    let bs = Bisections::enumerate(&q)?;
    let names = bs.names();
    println!("{} bisections: {}", bs.len(), names.join(", "));
    for i in 0..bs.len() {
        let row: Vec<String> = (0..bs.len())
            .map(|j| match bs.product(i, j) {
                Product::Defined(k) => names[k].clone(),
                _ => "?".into(),
            })
            .collect();
        println!("  {} · _ = {}", names[i], row.join(" "));
    }
    let wm = bs.weak_multiplicativity();
    println!("weakly multiplicative: {}", wm.weakly_multiplicative);
    if let Some(s) = &wm.semigroup {
        println!("ℬ(Q) has {} idempotents", s.idempotents().len());
    }
    Ok(())
}
