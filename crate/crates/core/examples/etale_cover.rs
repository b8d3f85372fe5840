//! The étale cover `Ĝ → G`: an isomorphism for étale `G`, a proper
//! epimorphism for the mixed bundle.

use quantal::catalog;
use quantal::cover::groupoid_cover;
use quantal::tensor::DEFAULT_CAP;

fn main() -> quantal::error::Result<()> {
    for (name, g) in [
        ("Z/2", catalog::cyclic_groupoid(2)),
        ("pair groupoid", catalog::pair_discrete(2)),
        ("mixed Z/2 bundle", catalog::mixed_bundle()),
    ] {
        let r = groupoid_cover(&g, DEFAULT_CAP, 0)?;
        print!("{name}: |Q̂| = {}, enough bisections {}", r.qhat_len, r.enough_bisections.holds());
        match &r.functor {
            Some(f) => println!(
                ", Ĝ has {} arrows over {}, epi {}, iso {}",
                f.cover_arrows, f.base_arrows, f.epi, f.iso
            ),
            None => println!(", no cover functor"),
        }
    }
    Ok(())
}
