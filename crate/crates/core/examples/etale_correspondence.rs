//! Étale groupoids, their inverse quantal frames and partial units, and back.

use quantal::bisections::Bisections;
use quantal::catalog;
use quantal::groupoid::{groupoid_iso, groupoid_of};
use quantal::iso::quantale_iso;
use quantal::semigroup::{lcc_completion, partial_units_semigroup};

fn main() -> quantal::error::Result<()> {
    for (name, g) in catalog::etale_groupoids() {
        let q = g.quantale()?;
        let (i, _) = partial_units_semigroup(&q)?;
        let back = lcc_completion(&i)?.quantale;
        let xi = Bisections::enumerate(&q)?.xi()?;
        let h = groupoid_of(&q)?;
        println!(
            "{name}: |O(G)| = {}, |I(O(G))| = {}, ξ ok {}, L∨(I) ≅ O(G) {}, G(O(G)) ≅ G {}",
            q.len(),
            i.len(),
            xi.checks.iter().all(|c| c.verdict.holds()),
            quantale_iso(&back, &q).is_some(),
            groupoid_iso(&g, &h).is_some()
        );
    }
    Ok(())
}
