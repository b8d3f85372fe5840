//! Axiom patterns over every involutive quantal frame on small frames.

use quantal::search::{frame_spec, search, Pattern, DEFAULT_SEARCH_CAP};

fn main() -> quantal::error::Result<()> {
    let patterns = ["B∧O∧U∧¬R", "B∧O∧R∧¬U", "unital∧open∧¬inverse", "open∧¬multiplicative", "¬B"];
    for frame in ["chain:2", "chain:3", "powerset:2"] {
        let l = frame_spec(frame)?;
        for p in patterns {
            let r = search(&l, &p.parse::<Pattern>()?, DEFAULT_SEARCH_CAP)?;
            println!("{frame:>10}  {p:<24} {:>2} of {}", r.witnesses.len(), r.structures);
        }
    }
    Ok(())
}
