//! `Q ⊗_R Q` as bi-ideals, with the reduced multiplication and its adjoint.

use quantal::catalog;
use quantal::tensor::{ReducedMult, DEFAULT_CAP};

fn main() -> quantal::error::Result<()> {
    let q = catalog::sierpinski_pair().quantale()?;
    let rm = ReducedMult::new(&q)?;
    let ideals = rm.space.enumerate(DEFAULT_CAP)?;
    println!("|Q| = {}, |R(Q)| = {}, {} bi-ideals", q.len(), q.right_sided().len(), ideals.len());
    for a in q.elements() {
        let star = rm.mu0_star(a)?;
        println!("  μ₀⁎({}) has {} pairs, μ₀ of it = {}", q.name(a), star.len(), q.name(rm.mu0(&star)));
    }
    println!("multiplicative: {:?}", rm.multiplicativity()?);
    Ok(())
}
