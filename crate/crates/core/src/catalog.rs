//! Named instances: small quantales, groupoids, inverse semigroups and actions.

use std::sync::Arc;

use crate::germ::Action;
use crate::groupoid::TopGroupoid;
use crate::lattice::FiniteLattice;
use crate::quantale::Quantale;
use crate::semigroup::InverseSemigroup;
use crate::topology::{FiniteSpace, Mask};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `P({a, b})` with `{a}² = {a}`, `{b}² = {b}`, `{a}{b} = {b}{a} = X`.
fn pab(swap: bool) -> Quantale {
    let p = Arc::new(FiniteLattice::powerset(&["a", "b"]));
    let inv = move |j| if swap { 3 - j } else { j };
    Quantale::from_generators(p, |j, k| if j == k { j } else { 3 }, inv).unwrap()
}

/// Trivial involution: (B), (O), (U) hold and (R) fails.
pub fn q_a() -> Quantale {
    pab(false)
}

/// `{a}* = {b}`: (B), (O), (R) hold and (U) fails.
pub fn q_b() -> Quantale {
    pab(true)
}

/// Group quantale of Z/2 on `P({e, g})`.
pub fn z2_quantale() -> Quantale {
    let p = Arc::new(FiniteLattice::powerset(&["e", "g"]));
    Quantale::from_generators(p, |j, k| if j == k { 1 } else { 2 }, |j| j).unwrap()
}

/// The 2-chain with multiplication `∧`.
pub fn two_chain_quantale() -> Quantale {
    Quantale::new(Arc::new(FiniteLattice::chain(2)), vec![0, 0, 0, 1], vec![0, 1]).unwrap()
}

pub fn sierpinski() -> FiniteSpace {
    FiniteSpace::new(names(&["0", "1"]), vec![0, 0b10, 0b11]).unwrap()
}

/// Pair groupoid `X × X` with the product topology; arrow `xy` goes from `x` to `y`.
pub fn pair_groupoid(objs: FiniteSpace) -> TopGroupoid {
    let k = objs.len();
    let arrow_names: Vec<String> = (0..k * k)
        .map(|t| format!("{}{}", objs.name(t / k), objs.name(t % k)))
        .collect();
    let mut sub = Vec::new();
    for &o in objs.opens() {
        let on = |f: &dyn Fn(usize) -> usize| {
            (0..k * k)
                .filter(|&t| o >> f(t) & 1 == 1)
                .fold(0 as Mask, |a, t| a | 1 << t)
        };
        sub.push(on(&|t| t / k));
        sub.push(on(&|t| t % k));
    }
    let arrows = FiniteSpace::generated(arrow_names, &sub).unwrap();
    TopGroupoid::new(
        objs,
        arrows,
        (0..k * k).map(|t| t / k).collect(),
        (0..k * k).map(|t| t % k).collect(),
        (0..k * k).map(|t| (t % k) * k + t / k).collect(),
        (0..k).map(|p| p * k + p).collect(),
        |x, y| Some((x / k) * k + y % k),
    )
    .unwrap()
}

/// Pair groupoid on the discrete space `{1, .., n}`.
pub fn pair_discrete(n: usize) -> TopGroupoid {
    let objs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    pair_groupoid(FiniteSpace::discrete(objs).unwrap())
}

/// Pair groupoid on the Sierpiński space: open, not étale.
pub fn sierpinski_pair() -> TopGroupoid {
    pair_groupoid(sierpinski())
}

/// The cyclic group Z/n as a discrete one-object groupoid.
pub fn cyclic_groupoid(n: usize) -> TopGroupoid {
    let arrows: Vec<String> = (0..n).map(|k| if k == 0 { "e".into() } else { format!("g{k}") }).collect();
    TopGroupoid::new(
        FiniteSpace::discrete(names(&["*"])).unwrap(),
        FiniteSpace::discrete(arrows).unwrap(),
        vec![0; n],
        vec![0; n],
        (0..n).map(|k| (n - k) % n).collect(),
        vec![0],
        |x, y| Some((x + y) % n),
    )
    .unwrap()
}

/// A space viewed as a groupoid with identity arrows only.
pub fn unit_groupoid(x: FiniteSpace) -> TopGroupoid {
    let n = x.len();
    let id: Vec<usize> = (0..n).collect();
    TopGroupoid::new(x.clone(), x, id.clone(), id.clone(), id.clone(), id, |a, b| {
        (a == b).then_some(a)
    })
    .unwrap()
}

fn shifted_opens(x: &FiniteSpace, by: usize) -> Vec<Mask> {
    x.opens().iter().map(|&o| o << by).collect()
}

/// Disjoint union `G ⊔ H`; names of `H` clashing with names of `G` get primes.
pub fn disjoint_union(g: &TopGroupoid, h: &TopGroupoid) -> TopGroupoid {
    let (k, n) = (g.object_count(), g.arrow_count());
    let cat = |a: &FiniteSpace, b: &FiniteSpace| -> Vec<String> {
        let mut out: Vec<String> = a.names().to_vec();
        for name in b.names() {
            let mut fresh = name.clone();
            while out.contains(&fresh) {
                fresh.push('′');
            }
            out.push(fresh);
        }
        out
    };
    let mut sub0 = shifted_opens(&g.objects, 0);
    sub0.extend(shifted_opens(&h.objects, k));
    let mut sub1 = shifted_opens(&g.arrows, 0);
    sub1.extend(shifted_opens(&h.arrows, n));
    let objects = FiniteSpace::generated(cat(&g.objects, &h.objects), &sub0).unwrap();
    let arrows = FiniteSpace::generated(cat(&g.arrows, &h.arrows), &sub1).unwrap();
    let join = |a: &[usize], b: &[usize], off: usize| -> Vec<usize> {
        a.iter().copied().chain(b.iter().map(|&x| x + off)).collect()
    };
    TopGroupoid::new(
        objects,
        arrows,
        join(&g.d, &h.d, k),
        join(&g.r, &h.r, k),
        join(&g.i, &h.i, n),
        join(&g.u, &h.u, n),
        |x, y| match (x < n, y < n) {
            (true, true) => g.m(x, y),
            (false, false) => h.m(x - n, y - n).map(|z| z + n),
            _ => None,
        },
    )
    .unwrap()
}

/// Discrete equivalence-relation groupoid on `{1, .., n}`; `class[p]` labels the class of point `p + 1`.
pub fn equivalence_groupoid(class: &[usize]) -> TopGroupoid {
    let k = class.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| class[a] == class[b])
        .collect();
    let idx = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
    let objs: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let arrows: Vec<String> = pairs.iter().map(|&(a, b)| format!("{}{}", a + 1, b + 1)).collect();
    TopGroupoid::new(
        FiniteSpace::discrete(objs).unwrap(),
        FiniteSpace::discrete(arrows).unwrap(),
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
        pairs.iter().map(|&(a, b)| idx((b, a)).unwrap()).collect(),
        (0..k).map(|p| idx((p, p)).unwrap()).collect(),
        |x, y| idx((pairs[x].0, pairs[y].1)),
    )
    .unwrap()
}

/// Z/2 bundle over the Sierpiński space whose arrow topology separates the
/// two arrows over the closed point only through the open point.
///
/// Open and not étale, with enough bisections: the seven local bisections
/// generate a cover with six arrows over these four.
pub fn mixed_bundle() -> TopGroupoid {
    // arrows: e0 g0 e1 g1
    let sub: Vec<Mask> = vec![0b0100, 0b1000, 0b1101, 0b1110];
    TopGroupoid::new(
        sierpinski(),
        FiniteSpace::generated(names(&["e0", "g0", "e1", "g1"]), &sub).unwrap(),
        vec![0, 0, 1, 1],
        vec![0, 0, 1, 1],
        vec![0, 1, 2, 3],
        vec![0, 2],
        |x, y| Some((x & 2) | ((x ^ y) & 1)),
    )
    .unwrap()
}

/// Étale instances with their labels.
pub fn etale_groupoids() -> Vec<(&'static str, TopGroupoid)> {
    vec![
        ("pair groupoid on 2 points", pair_discrete(2)),
        ("Z/2", cyclic_groupoid(2)),
        ("Z/3", cyclic_groupoid(3)),
        ("pair(2) ⊔ Z/2", disjoint_union(&pair_discrete(2), &cyclic_groupoid(2))),
        ("equivalence {1,2},{3}", equivalence_groupoid(&[0, 0, 1])),
        ("Sierpiński space", unit_groupoid(sierpinski())),
    ]
}

/// Open groupoids that are not étale.
pub fn open_non_etale_groupoids() -> Vec<(&'static str, TopGroupoid)> {
    vec![
        ("Sierpiński pair groupoid", sierpinski_pair()),
        ("mixed Z/2 bundle", mixed_bundle()),
    ]
}

/// Partial injections of `{1, 2}`; `a·b` applies `a` first.
pub fn i2() -> InverseSemigroup {
    let maps: Vec<[usize; 2]> = vec![[0, 0], [1, 0], [0, 2], [2, 0], [0, 1], [1, 2], [2, 1]];
    let nm = ["0", "1↦1", "2↦2", "1↦2", "2↦1", "id", "swap"];
    let find = |m: [usize; 2]| maps.iter().position(|&x| x == m).unwrap();
    InverseSemigroup::from_fn(
        names(&nm),
        |a, b| {
            let (fa, fb) = (maps[a], maps[b]);
            let step = |x: usize| if fa[x - 1] == 0 { 0 } else { fb[fa[x - 1] - 1] };
            find([step(1), step(2)])
        },
        |a| {
            let f = maps[a];
            let mut g = [0, 0];
            for x in 1..=2 {
                if f[x - 1] != 0 {
                    g[f[x - 1] - 1] = x;
                }
            }
            find(g)
        },
    )
    .unwrap()
}

/// Z/n as an inverse semigroup.
pub fn cyclic_group(n: usize) -> InverseSemigroup {
    let nm: Vec<String> = (0..n).map(|k| if k == 0 { "e".into() } else { format!("g{k}") }).collect();
    InverseSemigroup::from_fn(nm, |a, b| (a + b) % n, |a| (n - a) % n).unwrap()
}

/// Z/n with an adjoined zero, the partial units of its group quantale.
pub fn cyclic_group_with_zero(n: usize) -> InverseSemigroup {
    let mut nm = vec!["0".to_string()];
    nm.extend((0..n).map(|k| if k == 0 { "e".into() } else { format!("g{k}") }));
    InverseSemigroup::from_fn(
        nm,
        |a, b| if a == 0 || b == 0 { 0 } else { (a - 1 + b - 1) % n + 1 },
        |a| if a == 0 { 0 } else { (n - (a - 1)) % n + 1 },
    )
    .unwrap()
}

/// The chain `0 < 1 < .. < n-1` as a semilattice under `min`.
pub fn chain_semilattice(n: usize) -> InverseSemigroup {
    let nm: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    InverseSemigroup::from_fn(nm, |a, b| a.min(b), |a| a).unwrap()
}

/// `{0, a, b}` with `a`, `b` incomparable idempotents and no join.
pub fn missing_join() -> InverseSemigroup {
    InverseSemigroup::from_fn(names(&["0", "a", "b"]), |x, y| if x == y { x } else { 0 }, |x| x)
        .unwrap()
}

/// The ACPs used for completion round trips.
pub fn acps() -> Vec<(&'static str, InverseSemigroup)> {
    vec![
        ("I₂", i2()),
        ("trivial group", cyclic_group(1)),
        ("Z/2", cyclic_group(2)),
        ("Z/2 with zero", cyclic_group_with_zero(2)),
        ("3-chain", chain_semilattice(3)),
    ]
}

/// `I₂` acting on the discrete two-point space by its own partial maps.
pub fn i2_action() -> Action {
    let maps = [[0, 0], [1, 0], [0, 2], [2, 0], [0, 1], [1, 2], [2, 1]]
        .iter()
        .map(|f| f.iter().map(|&y| (y > 0).then(|| y - 1)).collect())
        .collect();
    let x = FiniteSpace::discrete(names(&["1", "2"])).unwrap();
    Action::new(i2(), x, maps).unwrap()
}

/// The trivial group acting by the identity.
pub fn trivial_action(x: FiniteSpace) -> Action {
    let id = (0..x.len()).map(Some).collect();
    Action::new(cyclic_group(1), x, vec![id]).unwrap()
}

/// `{0 < f < 1}` acting on Sierpiński space by restriction, `dom f = {1}`.
pub fn chain_action() -> Action {
    let maps = vec![vec![None, None], vec![None, Some(1)], vec![Some(0), Some(1)]];
    Action::new(chain_semilattice(3), sierpinski(), maps).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples_are_four_element() {
        assert_eq!(q_a().len(), 4);
        assert_eq!(q_b().star(1), 2);
    }

    #[test]
    fn etale_catalog_shapes() {
        let sizes: Vec<(usize, usize)> = etale_groupoids()
            .iter()
            .map(|(_, g)| (g.object_count(), g.arrow_count()))
            .collect();
        assert_eq!(sizes, [(2, 4), (1, 2), (1, 3), (3, 6), (3, 5), (2, 2)]);
        for (name, g) in etale_groupoids() {
            assert!(g.classify().etale.holds(), "{name}");
        }
    }

    #[test]
    fn non_etale_catalog() {
        for (name, g) in open_non_etale_groupoids() {
            let c = g.classify();
            assert!(c.open.holds() && c.etale.fails(), "{name}");
        }
    }

    #[test]
    fn mixed_bundle_topology() {
        let g = mixed_bundle();
        assert_eq!(g.arrows.opens().len(), 7);
        assert!(g.quantale().unwrap().classify().open());
    }
}
