#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use quantal::catalog;
use quantal::format::{Structure, StructureFile};
use quantal::lattice::FiniteLattice;
use quantal::quantale::Quantale;
use quantal::report::{self, Options, Report};
use quantal::search::{enumerate, DEFAULT_SEARCH_CAP};
use quantal::semigroup::lcc_completion;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn in_memory(name: &str, structure: Structure) -> StructureFile {
    StructureFile {
        path: format!("<{name}>"),
        title: Some(name.into()),
        expect: BTreeMap::new(),
        structure,
    }
}

pub fn report_of(name: &str, structure: Structure, roundtrip: bool) -> Report {
    let opts = Options {
        roundtrip,
        ..Options::default()
    };
    report::check(&in_memory(name, structure), &opts).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn red_flags(r: &Report) -> Vec<String> {
    r.lines()
        .filter(|l| l.red_flag())
        .map(|l| format!("{}: {} {}", r.path, l.name, l.witness.clone().unwrap_or_default()))
        .collect()
}

pub fn frames() -> Vec<(String, Arc<FiniteLattice>)> {
    let mut out = vec![("powerset:2".to_string(), Arc::new(FiniteLattice::powerset(&["a", "b"])))];
    for n in 2..=4 {
        out.push((format!("chain:{n}"), Arc::new(FiniteLattice::chain(n))));
    }
    out
}

/// Every involutive quantal frame on the search frames, up to isomorphism.
pub fn searched() -> Vec<(String, Quantale)> {
    frames()
        .into_iter()
        .flat_map(|(name, l)| {
            enumerate(&l, DEFAULT_SEARCH_CAP)
                .unwrap()
                .into_iter()
                .enumerate()
                .map(move |(k, q)| (format!("{name} #{}", k + 1), q))
        })
        .collect()
}

/// Catalog quantales, `O(G)` of catalog groupoids, and completions of the catalog ACPs.
pub fn catalog_quantales() -> Vec<(String, Quantale)> {
    let mut out = vec![
        ("qA".to_string(), catalog::q_a()),
        ("qB".to_string(), catalog::q_b()),
        ("Z2".to_string(), catalog::z2_quantale()),
        ("2-chain".to_string(), catalog::two_chain_quantale()),
    ];
    for (name, g) in catalog::etale_groupoids().into_iter().chain(catalog::open_non_etale_groupoids()) {
        out.push((format!("O({name})"), g.quantale().unwrap()));
    }
    for (name, s) in catalog::acps() {
        if let Ok(c) = lcc_completion(&s) {
            out.push((format!("L∨({name})"), c.quantale));
        }
    }
    out
}
