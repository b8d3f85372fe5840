//! Groupoids of germs of inverse semigroup actions on finite spaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{groupoid_iso, groupoid_of, TopGroupoid};
use crate::semigroup::{lcc_completion, InverseSemigroup};
use crate::topology::{bits, FiniteSpace, Mask};
use crate::verdict::{TheoremCheck, Verdict};

/// `S` acting on `X` by partial homeomorphisms between opens; `maps[s][x]`
/// is `φ_s(x)`. Products act left to right: `φ_{st} = φ_t ∘ φ_s`.
#[derive(Clone, Debug)]
pub struct Action {
    pub semigroup: InverseSemigroup,
    pub space: FiniteSpace,
    pub maps: Vec<Vec<Option<usize>>>,
}

impl Action {
    pub fn new(semigroup: InverseSemigroup, space: FiniteSpace, maps: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let a = Action {
            semigroup,
            space,
            maps,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn dom(&self, s: usize) -> Mask {
        self.maps[s]
            .iter()
            .enumerate()
            .filter(|(_, y)| y.is_some())
            .fold(0, |acc, (x, _)| acc | 1 << x)
    }

    fn image(&self, s: usize, m: Mask) -> Mask {
        bits(m).filter_map(|x| self.maps[s][x]).fold(0, |acc, y| acc | 1 << y)
    }

    fn validate(&self) -> Result<()> {
        let s = &self.semigroup;
        let x = &self.space;
        let bad = |msg: String| Err(Error::BadAction(msg));
        if self.maps.len() != s.len() || self.maps.iter().any(|m| m.len() != x.len()) {
            return bad("one map per semigroup element, defined on every point".into());
        }
        for a in 0..s.len() {
            let dom = self.dom(a);
            let img = self.image(a, dom);
            if !x.is_open(dom) || !x.is_open(img) || img.count_ones() != dom.count_ones() {
                return bad(format!("`{}` is not a bijection between opens", s.name(a)));
            }
            // homeomorphism onto its image: opens inside dom correspond to opens inside img
            for &o in x.opens() {
                if !x.is_open(self.image(a, o & dom)) {
                    return bad(format!("`{}` is not an open map", s.name(a)));
                }
                let pre = bits(dom)
                    .filter(|&p| o >> self.maps[a][p].unwrap() & 1 == 1)
                    .fold(0, |acc, p| acc | 1 << p);
                if !x.is_open(pre) {
                    return bad(format!("`{}` is not continuous", s.name(a)));
                }
            }
            for b in 0..s.len() {
                let ab = s.mul(a, b);
                let composed: Vec<Option<usize>> = (0..x.len())
                    .map(|p| self.maps[a][p].and_then(|q| self.maps[b][q]))
                    .collect();
                if composed != self.maps[ab] {
                    return bad(format!("φ_{{{}·{}}} ≠ φ_{} ∘ φ_{}", s.name(a), s.name(b), s.name(b), s.name(a)));
                }
            }
        }
        Ok(())
    }

    /// `e ↦ dom(e)` is an order embedding of `E(S)` whose image, with `∅`,
    /// is the whole topology. A zero must act as the empty map.
    pub fn is_natural(&self) -> bool {
        let s = &self.semigroup;
        if s.len() > 1 && s.zero().is_some_and(|z| self.dom(z) != 0) {
            return false;
        }
        let idem = s.idempotents();
        let embeds = idem
            .iter()
            .all(|&e| idem.iter().all(|&f| s.leq(e, f) == (self.dom(e) & !self.dom(f) == 0)));
        let mut doms: Vec<Mask> = idem.iter().map(|&e| self.dom(e)).collect();
        doms.push(0);
        doms.sort_unstable();
        doms.dedup();
        let mut opens = self.space.opens().to_vec();
        opens.sort_unstable();
        embeds && doms == opens
    }
}

/// The germ groupoid computed directly: `[s, x] = [t, x]` when some idempotent
/// `e` with `x ∈ dom e` has `es = et`; basic opens are `{[s, x] : x ∈ U}` for
/// open `U ⊆ dom s`.
pub fn germ_groupoid(a: &Action) -> Result<TopGroupoid> {
    let s = &a.semigroup;
    let x = &a.space;
    let idem = s.idempotents();
    let same = |p: usize, q: usize, pt: usize| {
        idem.iter()
            .any(|&e| a.dom(e) >> pt & 1 == 1 && s.mul(e, p) == s.mul(e, q))
    };
    // germ representatives: (s, x) pairs, deduplicated
    let mut germs: Vec<(usize, usize)> = Vec::new();
    let mut class: Vec<Vec<Option<usize>>> = vec![vec![None; x.len()]; s.len()];
    for pt in 0..x.len() {
        for p in 0..s.len() {
            if a.dom(p) >> pt & 1 == 0 {
                continue;
            }
            let k = germs
                .iter()
                .position(|&(q, y)| y == pt && same(p, q, pt))
                .unwrap_or_else(|| {
                    germs.push((p, pt));
                    germs.len() - 1
                });
            class[p][pt] = Some(k);
        }
    }
    if let Some(pt) = (0..x.len()).find(|&pt| idem.iter().all(|&e| a.dom(e) >> pt & 1 == 0)) {
        return Err(Error::BadAction(format!("no idempotent is defined at {}", x.name(pt))));
    }
    let germ = |p: usize, pt: usize| class[p][pt].expect("x ∈ dom s");
    let mut basis = Vec::new();
    for p in 0..s.len() {
        for &o in x.opens() {
            if o & !a.dom(p) == 0 {
                basis.push(bits(o).fold(0 as Mask, |acc, pt| acc | 1 << germ(p, pt)));
            }
        }
    }
    let names: Vec<String> = germs
        .iter()
        .map(|&(p, pt)| format!("[{},{}]", s.name(p), x.name(pt)))
        .collect();
    let arrows = FiniteSpace::generated(names, &basis)?;
    let d: Vec<usize> = germs.iter().map(|g| g.1).collect();
    let r: Vec<usize> = germs.iter().map(|&(p, pt)| a.maps[p][pt].unwrap()).collect();
    let i: Vec<usize> = germs.iter().map(|&(p, pt)| germ(s.inv(p), a.maps[p][pt].unwrap())).collect();
    let u: Vec<usize> = (0..x.len())
        .map(|pt| {
            let e = *idem.iter().find(|&&e| a.dom(e) >> pt & 1 == 1).unwrap();
            germ(e, pt)
        })
        .collect();
    TopGroupoid::new(x.clone(), arrows, d, r, i, u, |g, h| {
        let (p, pt) = germs[g];
        let (q, _) = germs[h];
        let st = s.mul(p, q);
        (a.dom(st) >> pt & 1 == 1).then(|| germ(st, pt))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GermReport {
    pub arrows: usize,
    pub natural: bool,
    pub checks: Vec<TheoremCheck>,
}

/// Direct germs versus `G(L∨(S))` for natural actions.
pub fn germ_report(a: &Action) -> Result<(TopGroupoid, GermReport)> {
    let g = germ_groupoid(a)?;
    let natural = a.is_natural();
    let via = if natural {
        let c = lcc_completion(&a.semigroup)?;
        let h = groupoid_of(&c.quantale)?;
        Verdict::from_bool(groupoid_iso(&g, &h).is_some())
    } else {
        Verdict::skipped("action is not the natural one on E(S)")
    };
    let report = GermReport {
        arrows: g.arrow_count(),
        natural,
        checks: vec![TheoremCheck::new("germs agree with G(L∨(S))", via)],
    };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn i2_on_two_points_gives_pair_groupoid() {
        let a = catalog::i2_action();
        assert!(a.is_natural());
        let (g, r) = germ_report(&a).unwrap();
        assert!(groupoid_iso(&g, &catalog::pair_discrete(2)).is_some());
        assert!(r.checks[0].verdict.holds());
    }

    #[test]
    fn trivial_group_gives_unit_groupoid() {
        let a = catalog::trivial_action(catalog::sierpinski());
        assert!(!a.is_natural());
        let (g, _) = germ_report(&a).unwrap();
        assert!(groupoid_iso(&g, &catalog::unit_groupoid(catalog::sierpinski())).is_some());
    }

    #[test]
    fn restriction_chain_gives_sierpinski() {
        let (g, r) = germ_report(&catalog::chain_action()).unwrap();
        assert!(r.natural && r.checks[0].verdict.holds());
        assert!(groupoid_iso(&g, &catalog::unit_groupoid(catalog::sierpinski())).is_some());
    }

    #[test]
    fn zero_must_act_emptily() {
        let s = catalog::chain_semilattice(2);
        let a = Action::new(s, catalog::sierpinski(), vec![vec![None, Some(1)], vec![Some(0), Some(1)]]).unwrap();
        assert!(!a.is_natural());
        let (g, _) = germ_report(&a).unwrap();
        assert_eq!(g.arrow_count(), 2);
    }

    #[test]
    fn non_open_domain_is_rejected() {
        let s = catalog::chain_semilattice(2);
        let e = Action::new(s, catalog::sierpinski(), vec![vec![Some(0), None], vec![Some(0), Some(1)]]);
        assert!(matches!(e, Err(Error::BadAction(_))));
    }
}
