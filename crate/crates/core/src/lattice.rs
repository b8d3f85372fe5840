//! Finite lattices, frames and maps between them.
//!
//! Every lattice is stored as dense tables over element ids `0..n`, so all
//! downstream checks reduce to lookups.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = usize;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bot: Elem,
    top: Elem,
    covers: Vec<Vec<Elem>>,
    jirr: Vec<Elem>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("n", &self.len())
            .field("names", &self.names)
            .finish()
    }
}

impl FiniteLattice {
    /// Builds a lattice from a full order matrix `leq[a][b]`.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotPartialOrder("no elements".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::NotPartialOrder("order matrix has wrong shape".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::NotPartialOrder(format!("`{}` ≰ itself", names[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::NotPartialOrder(format!(
                        "`{}` and `{}` are mutually below each other",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::NotPartialOrder(format!(
                            "not transitive at `{}` ≤ `{}` ≤ `{}`",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let flat: Vec<bool> = leq.into_iter().flatten().collect();
        let le = |a: Elem, b: Elem| flat[a * n + b];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let ups: Vec<Elem> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
                let j = ups
                    .iter()
                    .copied()
                    .find(|&c| ups.iter().all(|&d| le(c, d)))
                    .ok_or_else(|| Error::MissingBound {
                        a: names[a].clone(),
                        b: names[b].clone(),
                        kind: "join",
                    })?;
                let downs: Vec<Elem> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                let m = downs
                    .iter()
                    .copied()
                    .find(|&c| downs.iter().all(|&d| le(d, c)))
                    .ok_or_else(|| Error::MissingBound {
                        a: names[a].clone(),
                        b: names[b].clone(),
                        kind: "meet",
                    })?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let bot = (0..n).find(|&a| (0..n).all(|b| le(a, b))).unwrap();
        let top = (0..n).find(|&a| (0..n).all(|b| le(b, a))).unwrap();
        let mut l = FiniteLattice {
            names,
            leq: flat,
            join,
            meet,
            bot,
            top,
            covers: Vec::new(),
            jirr: Vec::new(),
        };
        l.covers = (0..n).map(|a| l.compute_lower_covers(a)).collect();
        l.jirr = (0..n).filter(|&a| l.covers[a].len() == 1).collect();
        Ok(l)
    }

    /// Builds a lattice from covering (or any generating) pairs `lo < hi`.
    pub fn from_covers(names: Vec<String>, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::NotPartialOrder("pair index out of range".into()));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if leq[a][k] {
                    for b in 0..n {
                        if leq[k][b] {
                            leq[a][b] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(names, leq)
    }

    /// The family of point sets `masks` ordered by inclusion.
    pub fn from_sets(names: Vec<String>, masks: &[u64]) -> Result<Self> {
        let leq = masks
            .iter()
            .map(|&a| masks.iter().map(|&b| a & !b == 0).collect())
            .collect();
        Self::from_order(names, leq)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Self::from_order(names, leq).expect("chains are lattices")
    }

    /// The powerset of an `k`-element set, element id = bitmask.
    pub fn powerset(points: &[&str]) -> Self {
        let k = points.len();
        let masks: Vec<u64> = (0..1u64 << k).collect();
        let names = masks.iter().map(|&m| set_name(m, points)).collect();
        Self::from_sets(names, &masks).expect("powersets are lattices")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|s| s == name)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn lower_covers(&self, a: Elem) -> &[Elem] {
        &self.covers[a]
    }

    fn compute_lower_covers(&self, a: Elem) -> Vec<Elem> {
        let below: Vec<Elem> = self.elements().filter(|&b| b != a && self.leq(b, a)).collect();
        below
            .iter()
            .copied()
            .filter(|&b| !below.iter().any(|&c| c != b && self.leq(b, c)))
            .collect()
    }

    /// Completely join-irreducible elements: exactly one lower cover.
    pub fn join_irreducibles(&self) -> &[Elem] {
        &self.jirr
    }

    pub fn down_set(&self, a: Elem) -> Vec<Elem> {
        self.elements().filter(|&b| self.leq(b, a)).collect()
    }

    /// Heyting implication `a → b = ⋁{c : c ∧ a ≤ b}`; meaningful on frames.
    pub fn implies(&self, a: Elem, b: Elem) -> Elem {
        self.join_all(self.elements().filter(|&c| self.leq(self.meet(c, a), b)))
    }

    /// Sub-poset on `keep`, renumbered in the given order.
    pub fn restrict(&self, keep: &[Elem]) -> Result<Self> {
        let names = keep.iter().map(|&a| self.names[a].clone()).collect();
        let leq = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| self.leq(a, b)).collect())
            .collect();
        Self::from_order(names, leq)
    }

    /// Checks `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`, returning the first failing triple.
    pub fn distributivity_failure(&self) -> Option<[Elem; 3]> {
        for a in self.elements() {
            for b in self.elements() {
                for c in b + 1..self.len() {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    pub fn require_frame(&self) -> Result<()> {
        match self.distributivity_failure() {
            None => Ok(()),
            Some([a, b, c]) => Err(Error::NotAFrame(
                self.names[a].clone(),
                self.names[b].clone(),
                self.names[c].clone(),
            )),
        }
    }
}

/// Human-readable name of a point set, e.g. `{a,b}`.
pub fn set_name(mask: u64, points: &[&str]) -> String {
    if mask == 0 {
        return "∅".into();
    }
    let inner: Vec<&str> = (0..points.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| points[i])
        .collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameWitness {
    pub lattice: Arc<FiniteLattice>,
    pub distributive: bool,
    pub witness: Option<[Elem; 3]>,
}

pub fn validate_frame(l: &Arc<FiniteLattice>) -> FrameWitness {
    let witness = l.distributivity_failure();
    FrameWitness {
        lattice: l.clone(),
        distributive: witness.is_none(),
        witness,
    }
}

/// Why a map fails to be a homomorphism of some kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapFailure {
    Monotone(Elem, Elem),
    Bot,
    Top,
    Join(Elem, Elem),
    Meet(Elem, Elem),
}

impl MapFailure {
    pub fn elems(&self) -> Vec<Elem> {
        match *self {
            MapFailure::Monotone(a, b) | MapFailure::Join(a, b) | MapFailure::Meet(a, b) => vec![a, b],
            MapFailure::Bot | MapFailure::Top => Vec::new(),
        }
    }

    pub fn describe(&self, src: &FiniteLattice) -> String {
        match *self {
            MapFailure::Monotone(a, b) => {
                format!("{} ≤ {} but images are not ordered", src.name(a), src.name(b))
            }
            MapFailure::Bot => "bottom not preserved".into(),
            MapFailure::Top => "top not preserved".into(),
            MapFailure::Join(a, b) => format!("join of {} and {}", src.name(a), src.name(b)),
            MapFailure::Meet(a, b) => format!("meet of {} and {}", src.name(a), src.name(b)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub src: Arc<FiniteLattice>,
    pub dst: Arc<FiniteLattice>,
    pub table: Vec<Elem>,
}

impl LatticeMap {
    pub fn new(src: Arc<FiniteLattice>, dst: Arc<FiniteLattice>, table: Vec<Elem>) -> Self {
        assert_eq!(table.len(), src.len(), "map table length");
        debug_assert!(table.iter().all(|&b| b < dst.len()));
        LatticeMap { src, dst, table }
    }

    pub fn from_fn(
        src: Arc<FiniteLattice>,
        dst: Arc<FiniteLattice>,
        f: impl Fn(Elem) -> Elem,
    ) -> Self {
        let table = src.elements().map(f).collect();
        Self::new(src, dst, table)
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        Self::from_fn(l.clone(), l, |a| a)
    }

    pub fn constant(src: Arc<FiniteLattice>, dst: Arc<FiniteLattice>, b: Elem) -> Self {
        Self::from_fn(src, dst, |_| b)
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LatticeMap) -> LatticeMap {
        Self::from_fn(self.src.clone(), g.dst.clone(), |a| g.apply(self.apply(a)))
    }

    pub fn monotone_failure(&self) -> Option<MapFailure> {
        for a in self.src.elements() {
            for b in self.src.elements() {
                if self.src.leq(a, b) && !self.dst.leq(self.apply(a), self.apply(b)) {
                    return Some(MapFailure::Monotone(a, b));
                }
            }
        }
        None
    }

    pub fn join_failure(&self) -> Option<MapFailure> {
        if self.apply(self.src.bot()) != self.dst.bot() {
            return Some(MapFailure::Bot);
        }
        for a in self.src.elements() {
            for b in a + 1..self.src.len() {
                if self.apply(self.src.join(a, b)) != self.dst.join(self.apply(a), self.apply(b)) {
                    return Some(MapFailure::Join(a, b));
                }
            }
        }
        None
    }

    pub fn meet_failure(&self) -> Option<MapFailure> {
        if self.apply(self.src.top()) != self.dst.top() {
            return Some(MapFailure::Top);
        }
        for a in self.src.elements() {
            for b in a + 1..self.src.len() {
                if self.apply(self.src.meet(a, b)) != self.dst.meet(self.apply(a), self.apply(b)) {
                    return Some(MapFailure::Meet(a, b));
                }
            }
        }
        None
    }

    /// Frame homomorphisms between finite frames preserve bot, top, binary joins and meets.
    pub fn is_frame_hom(&self) -> std::result::Result<(), MapFailure> {
        match self.join_failure().or_else(|| self.meet_failure()) {
            None => Ok(()),
            Some(w) => Err(w),
        }
    }

    /// `f_*(b) = ⋁{a : f(a) ≤ b}`.
    pub fn right_adjoint(&self) -> Result<LatticeMap> {
        if let Some(w) = self.join_failure() {
            return Err(Error::AdjointUndefined {
                kind: "joins",
                witness: w.describe(&self.src),
            });
        }
        let src = &self.src;
        Ok(Self::from_fn(self.dst.clone(), src.clone(), |b| {
            src.join_all(src.elements().filter(|&a| self.dst.leq(self.apply(a), b)))
        }))
    }

    /// `g_!(a) = ⋀{b : a ≤ g(b)}`.
    pub fn left_adjoint(&self) -> Result<LatticeMap> {
        if let Some(w) = self.meet_failure() {
            return Err(Error::AdjointUndefined {
                kind: "meets",
                witness: w.describe(&self.src),
            });
        }
        let src = &self.src;
        Ok(Self::from_fn(self.dst.clone(), src.clone(), |a| {
            src.meet_all(src.elements().filter(|&b| self.dst.leq(a, self.apply(b))))
        }))
    }

    pub fn injectivity_failure(&self) -> Option<(Elem, Elem)> {
        for a in self.src.elements() {
            for b in a + 1..self.src.len() {
                if self.apply(a) == self.apply(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_bijective(&self) -> bool {
        self.src.len() == self.dst.len() && self.injectivity_failure().is_none()
    }
}

/// All frame homomorphisms `src → dst` between finite distributive lattices.
///
/// Such maps correspond to monotone maps `φ : J(dst) → J(src)` via
/// `h(a) = ⋁{k : φ(k) ≤ a}`. `allowed[i]` restricts the candidates for the
/// `i`-th join-irreducible of `dst`.
pub fn frame_homs(
    src: &Arc<FiniteLattice>,
    dst: &Arc<FiniteLattice>,
    allowed: impl Fn(Elem) -> Vec<Elem>,
) -> Vec<LatticeMap> {
    let jd = dst.join_irreducibles().to_vec();
    let cands: Vec<Vec<Elem>> = jd.iter().map(|&k| allowed(k)).collect();
    let mut out = Vec::new();
    let mut phi = vec![0; jd.len()];
    fn rec(
        i: usize,
        jd: &[Elem],
        cands: &[Vec<Elem>],
        phi: &mut Vec<Elem>,
        src: &Arc<FiniteLattice>,
        dst: &Arc<FiniteLattice>,
        out: &mut Vec<LatticeMap>,
    ) {
        if i == jd.len() {
            let table = src
                .elements()
                .map(|a| {
                    dst.join_all(
                        (0..jd.len())
                            .filter(|&t| src.leq(phi[t], a))
                            .map(|t| jd[t]),
                    )
                })
                .collect();
            out.push(LatticeMap::new(src.clone(), dst.clone(), table));
            return;
        }
        for &c in &cands[i] {
            let ok = (0..i).all(|t| {
                (!dst.leq(jd[t], jd[i]) || src.leq(phi[t], c))
                    && (!dst.leq(jd[i], jd[t]) || src.leq(c, phi[t]))
            });
            if ok {
                phi[i] = c;
                rec(i + 1, jd, cands, phi, src, dst, out);
            }
        }
    }
    rec(0, &jd, &cands, &mut phi, src, dst, &mut out);
    out
}

/// Frame homomorphisms with unrestricted candidates.
pub fn all_frame_homs(src: &Arc<FiniteLattice>, dst: &Arc<FiniteLattice>) -> Vec<LatticeMap> {
    let js = src.join_irreducibles().to_vec();
    frame_homs(src, dst, |_| js.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> FiniteLattice {
        let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        FiniteLattice::from_covers(names, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .unwrap()
    }

    #[test]
    fn small_frames_are_distributive() {
        assert!(FiniteLattice::chain(2).distributivity_failure().is_none());
        assert!(FiniteLattice::powerset(&["a", "b"])
            .distributivity_failure()
            .is_none());
    }

    #[test]
    fn diamond_is_not_distributive() {
        let w = validate_frame(&Arc::new(m3()));
        assert!(!w.distributive);
        let [a, b, c] = w.witness.unwrap();
        let l = &w.lattice;
        assert_ne!(
            l.meet(a, l.join(b, c)),
            l.join(l.meet(a, b), l.meet(a, c))
        );
    }

    #[test]
    fn missing_join_is_named() {
        let names = ["0", "a", "b"].map(String::from).to_vec();
        let err = FiniteLattice::from_covers(names, &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(err, Error::MissingBound { kind: "join", .. }));
    }

    #[test]
    fn cyclic_order_rejected() {
        let names = ["a", "b"].map(String::from).to_vec();
        let err = FiniteLattice::from_covers(names, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotPartialOrder(_)));
    }

    #[test]
    fn adjoints_of_trivial_maps() {
        let c = Arc::new(FiniteLattice::chain(2));
        let id = LatticeMap::identity(c.clone());
        assert_eq!(id.right_adjoint().unwrap(), id);
        assert_eq!(id.left_adjoint().unwrap(), id);
        let bot = LatticeMap::constant(c.clone(), c.clone(), c.bot());
        assert_eq!(bot.right_adjoint().unwrap().table, vec![c.top(); 2]);
        let top = LatticeMap::constant(c.clone(), c.clone(), c.top());
        assert_eq!(top.left_adjoint().unwrap().table, vec![c.bot(); 2]);
        assert!(top.right_adjoint().is_err());
    }

    #[test]
    fn meet_with_fixed_element_is_frame_hom() {
        let p = Arc::new(FiniteLattice::powerset(&["a", "b", "c"]));
        for u in p.elements() {
            let down = Arc::new(p.restrict(&p.down_set(u)).unwrap());
            let f = LatticeMap::from_fn(p.clone(), down.clone(), |x| {
                down.index_of(p.name(p.meet(x, u))).unwrap()
            });
            assert_eq!(f.is_frame_hom(), Ok(()));
        }
    }

    #[test]
    fn birkhoff_enumeration_matches_brute_force() {
        let c3 = Arc::new(FiniteLattice::chain(3));
        let p2 = Arc::new(FiniteLattice::powerset(&["a", "b"]));
        for (s, d) in [(&c3, &p2), (&p2, &c3), (&p2, &p2), (&c3, &c3)] {
            let fast = all_frame_homs(s, d);
            let mut slow = 0;
            let n = s.len();
            let total = d.len().pow(n as u32);
            for code in 0..total {
                let mut t = Vec::with_capacity(n);
                let mut c = code;
                for _ in 0..n {
                    t.push(c % d.len());
                    c /= d.len();
                }
                let m = LatticeMap::new(s.clone(), d.clone(), t);
                if m.is_frame_hom().is_ok() {
                    slow += 1;
                    assert!(fast.contains(&m));
                }
            }
            assert_eq!(fast.len(), slow);
        }
    }

    #[test]
    fn heyting_implication_on_powerset() {
        let p = FiniteLattice::powerset(&["a", "b"]);
        for a in p.elements() {
            for b in p.elements() {
                assert_eq!(p.implies(a, b), (!a | b) & 3);
            }
        }
    }
}
