//! The ideal of `O(G)` below the two-point block of an equivalence groupoid.

use quantal::catalog;
use quantal::cover::ideal_check;
use quantal::tensor::DEFAULT_CAP;

fn main() -> quantal::error::Result<()> {
    let q = catalog::equivalence_groupoid(&[0, 0, 1]).quantale()?;
    let f = q.frame();
    let block = f.index_of("{11,12,21,22}").expect("catalog naming");
    let members = f.down_set(block);
    let r = ideal_check(&q, &members, DEFAULT_CAP, 0)?;
    println!("|Q| = {}, |I| = {}", q.len(), members.len());
    println!("ideal {}, involutive {}", r.ideal.holds(), r.involutive.holds());
    println!("ι ⊗ id mono {}, open {}, multiplicative {}", r.mono.holds(), r.open, r.multiplicative);
    for c in &r.checks {
        println!("  {}: {:?}", c.name, c.verdict);
    }
    Ok(())
}
