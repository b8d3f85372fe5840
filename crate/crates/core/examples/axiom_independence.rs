//! The two four-element quantales separating (R) from (U).

use quantal::catalog;
use quantal::report::{quantale_sections, Options};

fn main() -> quantal::error::Result<()> {
    for (name, q) in [("trivial involution", catalog::q_a()), ("swapping involution", catalog::q_b())] {
        let c = q.classify();
        println!("P({{a,b}}) with {name}");
        println!(
            "  B {}  O {}  R {}  U {}",
            c.balanced.holds(),
            c.open_axiom.holds(),
            c.r_axiom.holds(),
            c.u_axiom.holds()
        );
        for a in q.elements() {
            println!("  υ({}) = {}", q.name(a), q.name(q.upsilon(a)));
        }
        let flags: usize = quantale_sections(&q, &Options::default())?
            .iter()
            .flat_map(|s| &s.lines)
            .filter(|l| l.red_flag())
            .count();
        println!("  red flags: {flags}");
    }
    Ok(())
}
