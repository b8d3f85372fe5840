//! `L∨(I₂)` is the 16-element topology of the discrete pair groupoid.

use quantal::catalog;
use quantal::iso::{quantale_iso, semigroup_iso};
use quantal::semigroup::{lcc_completion, partial_units_semigroup};

fn main() -> quantal::error::Result<()> {
    let s = catalog::i2();
    let acp = s.acp_check();
    println!("I₂: {} elements, ACP {}", s.len(), acp.is_acp());
    let c = lcc_completion(&s)?;
    println!("|L∨(I₂)| = {}", c.quantale.len());
    for (a, &p) in c.principal.iter().enumerate() {
        println!("  ↓{} = {}", s.name(a), c.quantale.name(p));
    }
    let o = catalog::pair_discrete(2).quantale()?;
    println!("L∨(I₂) ≅ O(pair groupoid): {}", quantale_iso(&c.quantale, &o).is_some());
    let (back, _) = partial_units_semigroup(&c.quantale)?;
    println!("I(L∨(I₂)) ≅ I₂: {}", semigroup_iso(&back, &s).is_some());
    Ok(())
}
