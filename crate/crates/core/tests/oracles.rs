//! Independent oracles: brute-force model counts and the tensor as a pullback
//! of point spaces.

mod common;

use std::sync::Arc;

use quantal::catalog;
use quantal::iso::quantale_iso;
use quantal::lattice::{Elem, FiniteLattice};
use quantal::quantale::Quantale;
use quantal::search::{enumerate, DEFAULT_SEARCH_CAP};
use quantal::semigroup::{partial_units_semigroup, InverseSemigroup};
use quantal::tensor::{TensorSpace, DEFAULT_CAP};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |k| {
                let mut q = p.clone();
                q.insert(k, n - 1);
                q
            })
        })
        .collect()
}

fn order_preserving(l: &FiniteLattice, p: &[usize]) -> bool {
    l.elements().all(|a| l.elements().all(|b| l.leq(a, b) == l.leq(p[a], p[b])))
}

fn up_to_iso(candidates: impl Iterator<Item = Quantale>) -> Vec<Quantale> {
    let mut reps: Vec<Quantale> = Vec::new();
    for q in candidates {
        if !reps.iter().any(|r| quantale_iso(r, &q).is_some()) {
            reps.push(q);
        }
    }
    reps
}

/// Every `digits`-long word over `0..base`.
fn words(base: usize, digits: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..base.pow(digits as u32)).map(move |mut k| {
        (0..digits)
            .map(|_| {
                let d = k % base;
                k /= base;
                d
            })
            .collect()
    })
}

/// Full multiplication tables, every permutation as a candidate involution.
fn brute_full(l: &Arc<FiniteLattice>) -> Vec<Quantale> {
    let n = l.len();
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| order_preserving(l, p)).collect();
    up_to_iso(
        words(n, n * n)
            .flat_map(|m| perms.iter().map(move |p| (m.clone(), p.clone())))
            .filter_map(|(m, p)| Quantale::new(l.clone(), m, p).ok()),
    )
}

/// Tables on join-irreducibles completed by distributivity.
fn brute_generators(l: &Arc<FiniteLattice>) -> Vec<Quantale> {
    let n = l.len();
    let js = l.join_irreducibles().to_vec();
    let k = js.len();
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| order_preserving(l, p)).collect();
    let pos = |a: Elem| js.iter().position(|&j| j == a).unwrap();
    up_to_iso(
        words(n, k * k)
            .flat_map(|m| perms.iter().map(move |p| (m.clone(), p.clone())))
            .filter_map(|(m, p)| Quantale::from_generators(l.clone(), |a, b| m[pos(a) * k + pos(b)], |a| p[a]).ok()),
    )
}

fn assert_same_models(found: Vec<Quantale>, brute: Vec<Quantale>, expected: usize) {
    assert_eq!(brute.len(), expected);
    assert_eq!(found.len(), brute.len());
    for q in &brute {
        assert!(found.iter().any(|r| quantale_iso(r, q).is_some()));
    }
}

#[test]
fn two_and_three_chains_match_full_tables() {
    for (n, expected) in [(2, 2), (3, 8)] {
        let l = Arc::new(FiniteLattice::chain(n));
        assert_same_models(enumerate(&l, DEFAULT_SEARCH_CAP).unwrap(), brute_full(&l), expected);
    }
}

#[test]
fn boolean_frame_matches_generator_tables() {
    let l = Arc::new(FiniteLattice::powerset(&["a", "b"]));
    assert_same_models(enumerate(&l, DEFAULT_SEARCH_CAP).unwrap(), brute_generators(&l), 20);
}

#[test]
fn four_chain_matches_generator_tables() {
    let l = Arc::new(FiniteLattice::chain(4));
    let brute = brute_generators(&l);
    let n = brute.len();
    assert_same_models(enumerate(&l, DEFAULT_SEARCH_CAP).unwrap(), brute, n);
}

/// `Q ⊗_R Q` is the frame pushout of `z ↦ z*` and `z ↦ z`, so its bi-ideals
/// are the opens of the pullback `{(p, q) : p ∈ z* ⇔ q ∈ z}` of point spaces.
#[test]
fn bi_ideals_are_opens_of_the_point_pullback() {
    let mut checked = 0;
    for (name, q) in common::catalog_quantales().into_iter().chain(common::searched()) {
        if q.len() > 16 {
            continue;
        }
        let f = q.frame();
        let js = f.join_irreducibles().to_vec();
        let pts: Vec<(Elem, Elem)> = js
            .iter()
            .flat_map(|&j| js.iter().map(move |&k| (j, k)))
            .filter(|&(j, k)| q.right_sided().iter().all(|&z| f.leq(j, q.star(z)) == f.leq(k, z)))
            .collect();
        assert!(pts.len() <= 64, "{name}");
        let rect = |x: Elem, y: Elem| {
            pts.iter()
                .enumerate()
                .filter(|&(_, &(j, k))| f.leq(j, x) && f.leq(k, y))
                .fold(0u64, |acc, (t, _)| acc | 1 << t)
        };
        let mut opens: Vec<u64> = vec![0];
        for x in f.elements() {
            for y in f.elements() {
                let r = rect(x, y);
                let grown: Vec<u64> = opens.iter().map(|&o| o | r).collect();
                opens.extend(grown);
                opens.sort_unstable();
                opens.dedup();
            }
        }
        let space = TensorSpace::over_rs(&q);
        let ideals = space.enumerate(DEFAULT_CAP).unwrap();
        let image: Vec<u64> = ideals
            .iter()
            .map(|i| space.pairs(i).fold(0, |acc, (x, y)| acc | rect(x, y)))
            .collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ideals.len(), "{name}: not injective");
        assert_eq!(sorted, opens, "{name}: not onto the pullback opens");
        for (a, i) in ideals.iter().enumerate() {
            for (b, j) in ideals.iter().enumerate() {
                assert_eq!(i.is_subset(j), image[a] & !image[b] == 0, "{name}");
            }
        }
        checked += 1;
    }
    assert!(checked > 20);
}

/// Every compatible subset of size at least two has a join, and multiplication
/// distributes over it on both sides.
fn brute_acp(s: &InverseSemigroup) -> bool {
    let n = s.len();
    (0u32..1 << n).filter(|m| m.count_ones() >= 2).all(|m| {
        let set: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        if !set.iter().all(|&a| set.iter().all(|&b| s.compatible(a, b))) {
            return true;
        }
        let Some(j) = s.join(&set) else { return false };
        (0..n).all(|t| {
            let left: Vec<usize> = set.iter().map(|&a| s.mul(t, a)).collect();
            let right: Vec<usize> = set.iter().map(|&a| s.mul(a, t)).collect();
            s.join(&left) == Some(s.mul(t, j)) && s.join(&right) == Some(s.mul(j, t))
        })
    })
}

#[test]
fn pairwise_acp_check_matches_all_compatible_subsets() {
    let mut semigroups: Vec<(String, InverseSemigroup)> = catalog::acps()
        .into_iter()
        .map(|(name, s)| (name.to_string(), s))
        .chain([("missing join".to_string(), catalog::missing_join())])
        .collect();
    for (name, q) in common::catalog_quantales().into_iter().chain(common::searched()) {
        if let Ok((s, _)) = partial_units_semigroup(&q) {
            semigroups.push((format!("I({name})"), s));
        }
    }
    let mut checked = 0;
    let mut negatives = 0;
    for (name, s) in semigroups.iter().filter(|(_, s)| s.len() <= 14) {
        let fast = s.acp_check().is_acp();
        assert_eq!(fast, brute_acp(s), "{name}");
        checked += 1;
        negatives += usize::from(!fast);
    }
    assert!(checked >= 10, "only {checked} semigroups checked");
    assert!(negatives >= 1);
}
