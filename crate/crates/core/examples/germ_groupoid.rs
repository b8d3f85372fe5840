//! Germs of inverse semigroup actions, compared with `G(L∨(S))`.

use quantal::catalog;
use quantal::germ::germ_report;

fn main() -> quantal::error::Result<()> {
    for (name, a) in [
        ("I₂ on two points", catalog::i2_action()),
        ("restriction chain on Sierpiński space", catalog::chain_action()),
        ("trivial group on Sierpiński space", catalog::trivial_action(catalog::sierpinski())),
    ] {
        let (g, r) = germ_report(&a)?;
        let names: Vec<&str> = g.arrows.names().iter().map(String::as_str).collect();
        println!("{name}: {} germs [{}], natural {}", r.arrows, names.join(" "), r.natural);
        for c in &r.checks {
            println!("  {}: {:?}", c.name, c.verdict);
        }
    }
    Ok(())
}
