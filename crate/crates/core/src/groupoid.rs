//! Finite T0 topological groupoids, `O(G)`, points, and `G(Q)`.
//!
//! Composition `m(x, y)` is defined iff `r(x) = d(y)`; then `d(m) = d(x)` and
//! `r(m) = r(y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::quantale::Quantale;
use crate::tensor::{multiplicativity, TensorSpace};
use crate::topology::{bits, FiniteSpace, Mask};
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopGroupoid {
    pub objects: FiniteSpace,
    pub arrows: FiniteSpace,
    pub d: Vec<usize>,
    pub r: Vec<usize>,
    pub i: Vec<usize>,
    pub u: Vec<usize>,
    m: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidClassification {
    pub open: Verdict,
    pub etale: Verdict,
    pub m_open: Verdict,
    pub u_open: Verdict,
}

impl TopGroupoid {
    /// Builds and validates a groupoid; `m` is called only on composable pairs.
    pub fn new(
        objects: FiniteSpace,
        arrows: FiniteSpace,
        d: Vec<usize>,
        r: Vec<usize>,
        i: Vec<usize>,
        u: Vec<usize>,
        m: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = arrows.len();
        let k = objects.len();
        let shape = |what: &str| Error::GroupoidLaw {
            law: "shape",
            witness: what.to_string(),
        };
        if d.len() != n || r.len() != n || i.len() != n || u.len() != k {
            return Err(shape("structure map lengths"));
        }
        if d.iter().chain(&r).any(|&p| p >= k) || i.iter().chain(&u).any(|&x| x >= n) {
            return Err(shape("structure map values out of range"));
        }
        let mut table = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if r[x] == d[y] {
                    match m(x, y) {
                        Some(z) if z < n => table[x * n + y] = Some(z),
                        _ => {
                            return Err(Error::GroupoidLaw {
                                law: "composition defined on composable pairs",
                                witness: format!("({}, {})", arrows.name(x), arrows.name(y)),
                            })
                        }
                    }
                }
            }
        }
        let g = TopGroupoid {
            objects,
            arrows,
            d,
            r,
            i,
            u,
            m: table,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn m(&self, x: usize, y: usize) -> Option<usize> {
        self.m[x * self.arrows.len() + y]
    }

    /// Composable pairs `G₂`.
    pub fn composable(&self) -> Vec<(usize, usize)> {
        let n = self.arrows.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.r[x] == self.d[y])
            .collect()
    }

    fn law(&self, law: &'static str, w: &[usize]) -> Error {
        Error::GroupoidLaw {
            law,
            witness: w
                .iter()
                .map(|&x| self.arrows.name(x).to_string())
                .collect::<Vec<_>>()
                .join(", "),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.arrows.len();
        self.objects.require_t0()?;
        self.arrows.require_t0()?;
        for p in 0..self.objects.len() {
            let e = self.u[p];
            if self.d[e] != p || self.r[e] != p {
                return Err(Error::GroupoidLaw {
                    law: "d(u(p)) = r(u(p)) = p",
                    witness: self.objects.name(p).to_string(),
                });
            }
        }
        for (x, y) in self.composable() {
            let z = self.m(x, y).unwrap();
            if self.d[z] != self.d[x] || self.r[z] != self.r[y] {
                return Err(self.law("d(m(x,y)) = d(x), r(m(x,y)) = r(y)", &[x, y]));
            }
            for w in 0..n {
                if self.r[y] == self.d[w] {
                    let lhs = self.m(z, w).unwrap();
                    let rhs = self.m(x, self.m(y, w).unwrap()).unwrap();
                    if lhs != rhs {
                        return Err(self.law("associativity", &[x, y, w]));
                    }
                }
            }
        }
        for x in 0..n {
            if self.m(self.u[self.d[x]], x) != Some(x) || self.m(x, self.u[self.r[x]]) != Some(x)
            {
                return Err(self.law("unit laws", &[x]));
            }
            let ix = self.i[x];
            if self.i[ix] != x || self.d[ix] != self.r[x] {
                return Err(self.law("i(i(x)) = x, d(i(x)) = r(x)", &[x]));
            }
            if self.m(x, ix) != Some(self.u[self.d[x]]) || self.m(ix, x) != Some(self.u[self.r[x]])
            {
                return Err(self.law("inverse laws", &[x]));
            }
        }
        let (g0, g1) = (&self.objects, &self.arrows);
        for (name, f) in [("d", &self.d), ("r", &self.r)] {
            if let Some(x) = g1.continuity_failure(g0, f) {
                return Err(Error::GroupoidLaw {
                    law: "continuity",
                    witness: format!("{name} at {}", g1.name(x)),
                });
            }
        }
        if let Some(x) = g1.continuity_failure(g1, &self.i) {
            return Err(Error::GroupoidLaw {
                law: "continuity",
                witness: format!("i at {}", g1.name(x)),
            });
        }
        if let Some(p) = g0.continuity_failure(g1, &self.u) {
            return Err(Error::GroupoidLaw {
                law: "continuity",
                witness: format!("u at {}", g0.name(p)),
            });
        }
        for (x, y) in self.composable() {
            let z = self.m(x, y).unwrap();
            for (x2, y2) in self.g2_nbhd(x, y) {
                if g1.nbhd(z) >> self.m(x2, y2).unwrap() & 1 == 0 {
                    return Err(Error::GroupoidLaw {
                        law: "continuity",
                        witness: format!("m at ({}, {})", g1.name(x), g1.name(y)),
                    });
                }
            }
        }
        Ok(())
    }

    /// Minimal neighbourhood of `(x, y)` in `G₂ ⊆ G₁ × G₁`.
    fn g2_nbhd(&self, x: usize, y: usize) -> Vec<(usize, usize)> {
        let g1 = &self.arrows;
        bits(g1.nbhd(x))
            .flat_map(|a| bits(g1.nbhd(y)).map(move |b| (a, b)))
            .filter(|&(a, b)| self.r[a] == self.d[b])
            .collect()
    }

    pub fn classify(&self) -> GroupoidClassification {
        let (g0, g1) = (&self.objects, &self.arrows);
        let named = |x: Option<usize>| Verdict::from_failure(x.map(|x| vec![x]));
        let m_fail = self.composable().into_iter().find(|&(x, y)| {
            let img = self
                .g2_nbhd(x, y)
                .into_iter()
                .fold(0 as Mask, |acc, (a, b)| acc | 1 << self.m(a, b).unwrap());
            !g1.is_open(img)
        });
        GroupoidClassification {
            open: named(g1.openness_failure(g0, &self.d)),
            etale: named(g1.local_homeo_failure(g0, &self.d)),
            m_open: Verdict::from_failure(m_fail.map(|(x, y)| vec![x, y])),
            u_open: named(g0.openness_failure(g1, &self.u)),
        }
    }

    /// `U·V = {m(x, y) : x ∈ U, y ∈ V}` on arrow sets.
    pub fn product(&self, a: Mask, b: Mask) -> Mask {
        let mut out = 0;
        for x in bits(a) {
            for y in bits(b) {
                if let Some(z) = self.m(x, y) {
                    out |= 1 << z;
                }
            }
        }
        out
    }

    pub fn inverse_set(&self, a: Mask) -> Mask {
        self.arrows.image(&self.i, a)
    }

    /// The quantale `O(G)`; element ids are positions in `arrows.opens()`.
    pub fn quantale(&self) -> Result<Quantale> {
        let opens = self.arrows.opens();
        let n = opens.len();
        let mut mult = vec![0; n * n];
        for (ia, &a) in opens.iter().enumerate() {
            for (ib, &b) in opens.iter().enumerate() {
                let p = self.product(a, b);
                mult[ia * n + ib] = self.arrows.open_index(p).ok_or_else(|| {
                    Error::MultiplicationNotOpen(format!(
                        "{} · {} = {}",
                        self.arrows.set_name(a),
                        self.arrows.set_name(b),
                        self.arrows.set_name(p)
                    ))
                })?;
            }
        }
        let inv = opens
            .iter()
            .map(|&a| self.arrows.open_index(self.inverse_set(a)).expect("i is a homeomorphism"))
            .collect();
        Quantale::new(self.arrows.frame(), mult, inv)
    }

    /// `d_!` on opens: `U ↦ d(U)` as an object set.
    pub fn d_image(&self, a: Mask) -> Mask {
        self.objects.image(&self.d, a)
    }
}

/// Points of a finite frame: its join-irreducibles `j`, with `ext(a) = {j ≤ a}`.
pub fn points(l: &FiniteLattice) -> Result<(FiniteSpace, Vec<Elem>)> {
    let js = l.join_irreducibles().to_vec();
    if js.len() > 64 {
        return Err(Error::TooLarge(format!("{} points", js.len())));
    }
    let ext = |a: Elem| {
        js.iter()
            .enumerate()
            .filter(|&(_, &j)| l.leq(j, a))
            .fold(0 as Mask, |acc, (t, _)| acc | 1 << t)
    };
    let opens: Vec<Mask> = l.elements().map(ext).collect();
    let injective = {
        let mut s = opens.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == opens.len()
    };
    if !injective {
        return Err(Error::NotSpatial("a ↦ ext(a) is not injective".into()));
    }
    let names = js.iter().map(|&j| l.name(j).to_string()).collect();
    Ok((FiniteSpace::new(names, opens)?, js))
}

/// The minimal neighbourhood map `x ↦ N(x)` identifies `X` with the points of `O(X)`.
pub fn sober_map(x: &FiniteSpace) -> Result<Vec<usize>> {
    let frame = x.frame();
    let (pts, js) = points(&frame)?;
    let map: Vec<usize> = (0..x.len())
        .map(|p| {
            let idx = x.open_index(x.nbhd(p)).expect("neighbourhoods are open");
            js.iter().position(|&j| j == idx).expect("N(x) is join-irreducible")
        })
        .collect();
    if !x.is_homeomorphism(&pts, &map) {
        return Err(Error::NotSpatial("points(O(X)) is not homeomorphic to X".into()));
    }
    Ok(map)
}

/// `G(Q)` for a multiplicative semiopen quantal frame.
pub fn groupoid_of(q: &Quantale) -> Result<TopGroupoid> {
    let cls = q.classify();
    if !cls.semiopen() {
        return Err(Error::Hypothesis("G(Q) needs a semiopen quantal frame".into()));
    }
    match multiplicativity(q) {
        Verdict::Holds => {}
        _ => return Err(Error::Hypothesis("G(Q) needs a multiplicative quantal frame".into())),
    }
    let f = q.frame();
    let (g1, js) = points(f)?;
    let rl = q.rs_lattice();
    let (g0, ks) = points(rl)?;
    let rs = q.right_sided();
    let kelem: Vec<Elem> = ks.iter().map(|&k| rs[k]).collect();
    let point_of = |filter: &dyn Fn(Elem) -> bool, what: &str| -> Result<usize> {
        let least = f.meet_all(f.elements().filter(|&a| filter(a)));
        let principal = f.elements().all(|a| filter(a) == f.leq(least, a));
        match js.iter().position(|&j| j == least) {
            Some(p) if principal => Ok(p),
            _ => Err(Error::Inconsistency(format!("{what} is not a point"))),
        }
    };
    let object_of = |filter: &dyn Fn(Elem) -> bool, what: &str| -> Result<usize> {
        let least = f.meet_all(rs.iter().copied().filter(|&z| filter(z)));
        let principal = rs.iter().all(|&z| filter(z) == f.leq(least, z));
        match kelem.iter().position(|&k| k == least) {
            Some(p) if principal => Ok(p),
            _ => Err(Error::Inconsistency(format!("{what} is not a point"))),
        }
    };
    let mut d = Vec::new();
    let mut r = Vec::new();
    let mut i = Vec::new();
    for &j in &js {
        d.push(object_of(&|z| f.leq(j, z), "d(p)")?);
        r.push(object_of(&|z| f.leq(j, q.star(z)), "r(p)")?);
        i.push(point_of(&|a| f.leq(j, q.star(a)), "i(p)")?);
    }
    let mut u = Vec::new();
    for &k in &kelem {
        u.push(point_of(&|a| f.leq(k, q.upsilon(a)), "u(p)")?);
    }
    let space = TensorSpace::over_rs(q);
    let n = js.len();
    let mut m = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            if r[x] != d[y] {
                continue;
            }
            let (jx, jy) = (js[x], js[y]);
            let outside = f
                .elements()
                .flat_map(|a| f.elements().map(move |b| (a, b)))
                .filter(|&(a, b)| !f.leq(jx, a) || !f.leq(jy, b));
            let c = space.from_pairs(outside);
            if space.closure_failure(&c).is_some() {
                return Err(Error::NotSpatial(format!(
                    "({}, {}) is not a point of the tensor",
                    f.name(jx),
                    f.name(jy)
                )));
            }
            let prod = q.mul(jx, jy);
            m[x * n + y] = Some(point_of(&|a| f.leq(prod, a), "m(p, q)")?);
        }
    }
    TopGroupoid::new(g0, g1, d, r, i, u, |x, y| m[x * n + y])
}

/// An isomorphism `g → h`: object and arrow bijections commuting with all
/// structure maps, both homeomorphisms.
pub fn groupoid_iso(g: &TopGroupoid, h: &TopGroupoid) -> Option<(Vec<usize>, Vec<usize>)> {
    if g.object_count() != h.object_count()
        || g.arrow_count() != h.arrow_count()
        || g.arrows.opens().len() != h.arrows.opens().len()
        || g.objects.opens().len() != h.objects.opens().len()
    {
        return None;
    }
    let k = g.object_count();
    let mut f0 = vec![usize::MAX; k];
    let mut used0 = vec![false; k];
    let mut out = None;
    objects_rec(g, h, 0, &mut f0, &mut used0, &mut out);
    out
}

fn objects_rec(
    g: &TopGroupoid,
    h: &TopGroupoid,
    p: usize,
    f0: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    if out.is_some() {
        return;
    }
    if p == f0.len() {
        if !g.objects.is_homeomorphism(&h.objects, f0) {
            return;
        }
        let n = g.arrow_count();
        let mut f1 = vec![usize::MAX; n];
        let mut used1 = vec![false; n];
        if arrows_rec(g, h, 0, f0, &mut f1, &mut used1) {
            *out = Some((f0.clone(), f1));
        }
        return;
    }
    let fiber = |gg: &TopGroupoid, q: usize| (0..gg.arrow_count()).filter(|&x| gg.d[x] == q).count();
    for q in 0..f0.len() {
        if !used[q] && fiber(g, p) == fiber(h, q) {
            used[q] = true;
            f0[p] = q;
            objects_rec(g, h, p + 1, f0, used, out);
            used[q] = false;
        }
    }
}

fn arrows_rec(
    g: &TopGroupoid,
    h: &TopGroupoid,
    x: usize,
    f0: &[usize],
    f1: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let n = f1.len();
    if x == n {
        return g.arrows.is_homeomorphism(&h.arrows, f1)
            && (0..f0.len()).all(|p| f1[g.u[p]] == h.u[f0[p]])
            && (0..n).all(|y| f1[g.i[y]] == h.i[f1[y]]);
    }
    for y in 0..n {
        if used[y] || h.d[y] != f0[g.d[x]] || h.r[y] != f0[g.r[x]] {
            continue;
        }
        f1[x] = y;
        let consistent = (0..=x).all(|a| {
            (0..=x).all(|b| match g.m(a, b) {
                Some(c) if c <= x => h.m(f1[a], f1[b]) == Some(f1[c]),
                _ => true,
            })
        });
        if consistent {
            used[y] = true;
            if arrows_rec(g, h, x + 1, f0, f1, used) {
                return true;
            }
            used[y] = false;
        }
    }
    f1[x] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Pair groupoid on a space with the product topology on arrows.
    fn pair(objs: FiniteSpace) -> TopGroupoid {
        let k = objs.len();
        let arrow_names: Vec<String> = (0..k * k)
            .map(|t| format!("{}{}", objs.name(t / k), objs.name(t % k)))
            .collect();
        let mut sub = Vec::new();
        for &o in objs.opens() {
            let dpre = (0..k * k).filter(|t| o >> (t / k) & 1 == 1).fold(0, |a, t| a | 1 << t);
            let rpre = (0..k * k).filter(|t| o >> (t % k) & 1 == 1).fold(0, |a, t| a | 1 << t);
            sub.push(dpre);
            sub.push(rpre);
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

    fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(names(&["0", "1"]), vec![0, 0b10, 0b11]).unwrap()
    }

    #[test]
    fn discrete_pair_groupoid_is_etale() {
        let g = pair(FiniteSpace::discrete(names(&["1", "2"])).unwrap());
        let c = g.classify();
        assert!(c.open.holds() && c.etale.holds() && c.u_open.holds());
        let q = g.quantale().unwrap();
        assert_eq!(q.len(), 16);
        let e = q.unit().unwrap();
        assert_eq!(q.name(e), "{11,22}");
        assert!(q.classify().inverse());
    }

    #[test]
    fn sierpinski_pair_groupoid() {
        let g = pair(sierpinski());
        let c = g.classify();
        assert!(c.open.holds());
        assert!(c.etale.fails());
        assert!(c.u_open.fails());
        let q = g.quantale().unwrap();
        assert_eq!(q.len(), 6);
        let b = q.frame().index_of("{01,11}").unwrap();
        let cc = q.frame().index_of("{10,11}").unwrap();
        assert_eq!(q.mul(b, cc), q.one());
        assert_eq!(q.right_sided().len(), 3);
        let cls = q.classify();
        assert!(cls.open() && !cls.unital());
    }

    #[test]
    fn empty_set_annihilates() {
        let q = pair(sierpinski()).quantale().unwrap();
        for v in q.elements() {
            assert_eq!(q.mul(q.bot(), v), q.bot());
        }
    }

    #[test]
    fn points_of_product_sierpinski() {
        let g = pair(sierpinski());
        let (pts, _) = points(&g.arrows.frame()).unwrap();
        assert_eq!(pts.len(), 4);
        sober_map(&g.arrows).unwrap();
        let p = FiniteLattice::powerset(&["a", "b"]);
        assert_eq!(points(&p).unwrap().0.len(), 2);
    }

    #[test]
    fn roundtrips() {
        for g in [
            pair(sierpinski()),
            pair(FiniteSpace::discrete(names(&["1", "2"])).unwrap()),
        ] {
            let q = g.quantale().unwrap();
            let h = groupoid_of(&q).unwrap();
            assert!(groupoid_iso(&g, &h).is_some());
        }
    }

    #[test]
    fn broken_inverse_rejected() {
        let objs = FiniteSpace::discrete(names(&["1", "2"])).unwrap();
        let g = pair(objs.clone());
        let err = TopGroupoid::new(
            objs,
            g.arrows.clone(),
            g.d.clone(),
            g.r.clone(),
            (0..4).collect(),
            g.u.clone(),
            |x, y| g.m(x, y),
        )
        .unwrap_err();
        assert!(matches!(err, Error::GroupoidLaw { .. }));
    }
}
