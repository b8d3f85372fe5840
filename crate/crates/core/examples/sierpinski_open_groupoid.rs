//! The pair groupoid on Sierpiński space: open, not étale, multiplicative
//! without enough bisections.

use quantal::bisections::Bisections;
use quantal::catalog;
use quantal::cover::cover_report;
use quantal::tensor::{multiplicativity, DEFAULT_CAP};

fn main() -> quantal::error::Result<()> {
    let g = catalog::sierpinski_pair();
    let gc = g.classify();
    println!("{} objects, {} arrows", g.object_count(), g.arrow_count());
    println!("open {}  étale {}", gc.open.holds(), gc.etale.holds());

    let q = g.quantale()?;
    let c = q.classify();
    println!("|O(G)| = {}, semiopen {}, unital {}", q.len(), c.semiopen(), c.unital());
    println!("multiplicative {}", multiplicativity(&q).holds());

    let bs = Bisections::enumerate(&q)?;
    let wm = bs.weak_multiplicativity();
    println!("{} local bisections, weakly multiplicative {}", bs.len(), wm.weakly_multiplicative);
    let r = cover_report(&bs, &wm, DEFAULT_CAP, 0)?;
    println!("enough bisections {}", r.enough_bisections.holds());
    for name in bs.names() {
        println!("  {name}");
    }
    Ok(())
}
