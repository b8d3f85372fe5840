//! Tensor products over `R(Q)` as lattices of bi-ideals.
//!
//! An element of `L ⊗_R M` is a set of pairs that is down-closed, closed under
//! joins in either slot, contains every pair with a bottom entry, and is
//! balanced: `(x·z, y) ∈ I ⇔ (x, z·y) ∈ I` for every base element `z`.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, LatticeMap};
use crate::quantale::Quantale;
use crate::verdict::{TheoremCheck, Verdict};

/// Default cap on the number of bi-ideals materialised by enumeration.
pub const DEFAULT_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiIdeal {
    bits: FixedBitSet,
}

impl BiIdeal {
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.count_ones(..) == 0
    }

    pub fn is_subset(&self, other: &BiIdeal) -> bool {
        self.bits.is_subset(&other.bits)
    }
}

/// One base element acting on both factors, with the right adjoints of the actions.
#[derive(Clone, Debug)]
struct BaseAction {
    left: Vec<Elem>,
    left_adj: Vec<Elem>,
    right: Vec<Elem>,
    right_adj: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct TensorSpace {
    left: Arc<FiniteLattice>,
    right: Arc<FiniteLattice>,
    actions: Vec<BaseAction>,
}

impl TensorSpace {
    /// `left ⊗_R right` where base element `t` acts by `x ↦ left_act[t][x]`
    /// on the left factor and `y ↦ right_act[t][y]` on the right factor.
    pub fn new(
        left: Arc<FiniteLattice>,
        right: Arc<FiniteLattice>,
        left_act: Vec<Vec<Elem>>,
        right_act: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let mut actions = Vec::new();
        for (l, r) in left_act.into_iter().zip(right_act) {
            let lm = LatticeMap::new(left.clone(), left.clone(), l);
            let rm = LatticeMap::new(right.clone(), right.clone(), r);
            let left_adj = lm.right_adjoint()?.table;
            let right_adj = rm.right_adjoint()?.table;
            actions.push(BaseAction {
                left: lm.table,
                left_adj,
                right: rm.table,
                right_adj,
            });
        }
        Ok(TensorSpace {
            left,
            right,
            actions,
        })
    }

    /// `Q ⊗_{R(Q)} Q` with `x·z = x ∧ z*` and `z·y = y ∧ z`.
    pub fn over_rs(q: &Quantale) -> Self {
        let f = q.frame();
        let (la, ra) = q
            .right_sided()
            .iter()
            .map(|&z| {
                let zs = q.star(z);
                (
                    f.elements().map(|x| f.meet(x, zs)).collect(),
                    f.elements().map(|y| f.meet(y, z)).collect(),
                )
            })
            .unzip();
        Self::new(f.clone(), f.clone(), la, ra).expect("meets with a fixed element preserve joins")
    }

    /// The plain sup-lattice tensor `L ⊗ M` (trivial base).
    pub fn unbalanced(left: Arc<FiniteLattice>, right: Arc<FiniteLattice>) -> Self {
        TensorSpace {
            left,
            right,
            actions: Vec::new(),
        }
    }

    pub fn left(&self) -> &Arc<FiniteLattice> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteLattice> {
        &self.right
    }

    pub fn base_len(&self) -> usize {
        self.actions.len()
    }

    pub fn left_action(&self, t: usize, x: Elem) -> Elem {
        self.actions[t].left[x]
    }

    pub fn right_action(&self, t: usize, y: Elem) -> Elem {
        self.actions[t].right[y]
    }

    #[inline]
    fn idx(&self, x: Elem, y: Elem) -> usize {
        x * self.right.len() + y
    }

    fn empty(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.left.len() * self.right.len())
    }

    pub fn contains(&self, i: &BiIdeal, x: Elem, y: Elem) -> bool {
        i.bits.contains(self.idx(x, y))
    }

    pub fn pairs<'a>(&'a self, i: &'a BiIdeal) -> impl Iterator<Item = (Elem, Elem)> + 'a {
        let m = self.right.len();
        i.bits.ones().map(move |k| (k / m, k % m))
    }

    fn check_base(&self, i: &BiIdeal) -> Result<()> {
        if i.bits.len() != self.left.len() * self.right.len() {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// Smallest bi-ideal containing `seed`.
    pub fn closure<I: IntoIterator<Item = (Elem, Elem)>>(&self, seed: I) -> BiIdeal {
        let mut bits = self.empty();
        let mut queue = VecDeque::new();
        self.push_bottom_pairs(&mut bits, &mut queue);
        for (x, y) in seed {
            push(&mut bits, &mut queue, self.idx(x, y), (x, y));
        }
        self.saturate(bits, queue)
    }

    /// Smallest bi-ideal containing the bi-ideal `base` and `seed`; only the
    /// new pairs are expanded.
    fn extend<I: IntoIterator<Item = (Elem, Elem)>>(&self, base: &BiIdeal, seed: I) -> BiIdeal {
        let mut bits = base.bits.clone();
        let mut queue = VecDeque::new();
        for (x, y) in seed {
            push(&mut bits, &mut queue, self.idx(x, y), (x, y));
        }
        self.saturate(bits, queue)
    }

    fn saturate(&self, mut bits: FixedBitSet, mut queue: VecDeque<(Elem, Elem)>) -> BiIdeal {
        while let Some(p) = queue.pop_front() {
            self.expand(p, &mut bits, &mut |bits, k, pair| {
                if !bits.contains(k) {
                    bits.insert(k);
                    queue.push_back(pair);
                }
            });
        }
        BiIdeal { bits }
    }

    /// Same closure with the worklist processed in random order.
    pub fn closure_shuffled<R: Rng>(&self, seed: &[(Elem, Elem)], rng: &mut R) -> BiIdeal {
        let mut bits = self.empty();
        let mut queue = VecDeque::new();
        self.push_bottom_pairs(&mut bits, &mut queue);
        for &(x, y) in seed {
            push(&mut bits, &mut queue, self.idx(x, y), (x, y));
        }
        let mut pending: Vec<(Elem, Elem)> = queue.into_iter().collect();
        while !pending.is_empty() {
            pending.shuffle(rng);
            let p = pending.pop().unwrap();
            self.expand(p, &mut bits, &mut |bits, k, pair| {
                if !bits.contains(k) {
                    bits.insert(k);
                    pending.push(pair);
                }
            });
        }
        BiIdeal { bits }
    }

    fn push_bottom_pairs(&self, bits: &mut FixedBitSet, queue: &mut VecDeque<(Elem, Elem)>) {
        let (lb, rb) = (self.left.bot(), self.right.bot());
        for y in self.right.elements() {
            push(bits, queue, self.idx(lb, y), (lb, y));
        }
        for x in self.left.elements() {
            push(bits, queue, self.idx(x, rb), (x, rb));
        }
    }

    fn expand(
        &self,
        (p, q): (Elem, Elem),
        bits: &mut FixedBitSet,
        add: &mut dyn FnMut(&mut FixedBitSet, usize, (Elem, Elem)),
    ) {
        let (l, r) = (&self.left, &self.right);
        for &p2 in l.lower_covers(p) {
            add(bits, self.idx(p2, q), (p2, q));
        }
        for &q2 in r.lower_covers(q) {
            add(bits, self.idx(p, q2), (p, q2));
        }
        for x in l.elements() {
            if bits.contains(self.idx(x, q)) {
                let j = l.join(x, p);
                add(bits, self.idx(j, q), (j, q));
            }
        }
        for y in r.elements() {
            if bits.contains(self.idx(p, y)) {
                let j = r.join(y, q);
                add(bits, self.idx(p, j), (p, j));
            }
        }
        for a in &self.actions {
            let (x, y) = (a.left_adj[p], a.right[q]);
            add(bits, self.idx(x, y), (x, y));
            let (x, y) = (a.left[p], a.right_adj[q]);
            add(bits, self.idx(x, y), (x, y));
        }
    }

    pub fn pure(&self, a: Elem, b: Elem) -> BiIdeal {
        self.closure([(a, b)])
    }

    pub fn bottom(&self) -> BiIdeal {
        self.closure([])
    }

    pub fn top(&self) -> BiIdeal {
        self.pure(self.left.top(), self.right.top())
    }

    pub fn join(&self, i: &BiIdeal, j: &BiIdeal) -> Result<BiIdeal> {
        self.check_base(i)?;
        self.check_base(j)?;
        let mut union = i.bits.clone();
        union.union_with(&j.bits);
        if union == i.bits || union == j.bits {
            return Ok(BiIdeal { bits: union });
        }
        let (small, big) = if i.len() <= j.len() { (i, j) } else { (j, i) };
        let fresh: Vec<(Elem, Elem)> = self.pairs(small).filter(|&(x, y)| !self.contains(big, x, y)).collect();
        Ok(self.extend(big, fresh))
    }

    pub fn meet(&self, i: &BiIdeal, j: &BiIdeal) -> Result<BiIdeal> {
        self.check_base(i)?;
        self.check_base(j)?;
        let mut bits = i.bits.clone();
        bits.intersect_with(&j.bits);
        Ok(BiIdeal { bits })
    }

    /// Wraps a raw pair set, which must already be closed.
    pub fn from_pairs(&self, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> BiIdeal {
        let mut bits = self.empty();
        for (x, y) in pairs {
            bits.insert(self.idx(x, y));
        }
        BiIdeal { bits }
    }

    /// First closure rule violated by a raw pair set, if any.
    pub fn closure_failure(&self, i: &BiIdeal) -> Option<&'static str> {
        let c = self.closure(self.pairs(i).collect::<Vec<_>>());
        if c == *i {
            None
        } else {
            Some("set is not closed under the bi-ideal rules")
        }
    }

    /// Every bi-ideal, generated as joins of `pure(j, k)` over join-irreducibles.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<BiIdeal>> {
        let mut gens: Vec<BiIdeal> = Vec::new();
        for &j in self.left.join_irreducibles() {
            for &k in self.right.join_irreducibles() {
                let g = self.pure(j, k);
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
        let bottom = self.bottom();
        let mut seen: HashSet<BiIdeal> = HashSet::new();
        seen.insert(bottom.clone());
        let mut order = vec![bottom.clone()];
        let mut frontier = vec![bottom];
        while let Some(i) = frontier.pop() {
            for g in &gens {
                if g.is_subset(&i) {
                    continue;
                }
                let n = self.join(&i, g)?;
                if seen.insert(n.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(format!(
                            "tensor lattice has more than {cap} bi-ideals"
                        )));
                    }
                    order.push(n.clone());
                    frontier.push(n);
                }
            }
        }
        order.sort_by_key(|i| (i.len(), i.bits.ones().collect::<Vec<_>>()));
        Ok(order)
    }
}

fn push(bits: &mut FixedBitSet, queue: &mut VecDeque<(Elem, Elem)>, k: usize, p: (Elem, Elem)) {
    if !bits.contains(k) {
        bits.insert(k);
        queue.push_back(p);
    }
}

/// `f ⊗ id : src → dst` for a module map `f` on the left factors.
#[derive(Clone, Debug)]
pub struct TensorMap<'a> {
    pub src: &'a TensorSpace,
    pub dst: &'a TensorSpace,
    pub f: Vec<Elem>,
}

impl<'a> TensorMap<'a> {
    pub fn new(src: &'a TensorSpace, dst: &'a TensorSpace, f: Vec<Elem>) -> Result<Self> {
        if src.right.len() != dst.right.len()
            || src.actions.len() != dst.actions.len()
            || f.len() != src.left.len()
        {
            return Err(Error::BaseMismatch);
        }
        let map = LatticeMap::new(src.left.clone(), dst.left.clone(), f.clone());
        if let Some(w) = map.join_failure() {
            return Err(Error::AdjointUndefined {
                kind: "joins",
                witness: w.describe(&src.left),
            });
        }
        for (t, a) in src.actions.iter().enumerate() {
            for x in src.left.elements() {
                if f[a.left[x]] != dst.actions[t].left[f[x]] {
                    return Err(Error::Hypothesis(format!(
                        "left factor map is not a module map at {}",
                        src.left.name(x)
                    )));
                }
            }
        }
        Ok(TensorMap { src, dst, f })
    }

    pub fn apply(&self, i: &BiIdeal) -> BiIdeal {
        let seed: Vec<_> = self.src.pairs(i).map(|(x, y)| (self.f[x], y)).collect();
        self.dst.closure(seed)
    }

    /// Right adjoint `M ↦ {(x, y) : (f(x), y) ∈ M}`.
    pub fn adjoint(&self, m: &BiIdeal) -> BiIdeal {
        let pairs = self
            .src
            .left
            .elements()
            .flat_map(|x| self.src.right.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| self.dst.contains(m, self.f[x], y));
        self.src.from_pairs(pairs)
    }

    /// `f ⊗ id` is injective iff `adjoint ∘ apply` fixes every element.
    pub fn mono_failure<'b>(&self, elems: impl IntoIterator<Item = &'b BiIdeal>) -> Option<BiIdeal> {
        elems
            .into_iter()
            .find(|i| self.adjoint(&self.apply(i)) != **i)
            .cloned()
    }
}

/// `μ₀`, its right adjoint, and the checks built from them.
pub struct ReducedMult<'q> {
    pub q: &'q Quantale,
    pub space: TensorSpace,
}

impl<'q> ReducedMult<'q> {
    /// Requires (B) and `R(Q) = Q1`.
    pub fn new(q: &'q Quantale) -> Result<Self> {
        if q.balanced_failure().is_some() {
            return Err(Error::Hypothesis("reduced multiplication needs (B)".into()));
        }
        if !q.rs_equals_q_one() {
            return Err(Error::Hypothesis(
                "reduced multiplication needs R(Q) = Q1".into(),
            ));
        }
        Ok(ReducedMult {
            q,
            space: TensorSpace::over_rs(q),
        })
    }

    pub fn mu0(&self, i: &BiIdeal) -> Elem {
        self.q
            .frame()
            .join_all(self.space.pairs(i).map(|(x, y)| self.q.mul(x, y)))
    }

    /// `{(x, y) : xy ≤ a}`.
    pub fn mu0_star_raw(&self, a: Elem) -> BiIdeal {
        let q = self.q;
        let pairs = q
            .elements()
            .flat_map(|x| q.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| q.leq(q.mul(x, y), a));
        self.space.from_pairs(pairs)
    }

    /// As [`Self::mu0_star_raw`], asserting the result is a bi-ideal.
    pub fn mu0_star(&self, a: Elem) -> Result<BiIdeal> {
        let i = self.mu0_star_raw(a);
        match self.space.closure_failure(&i) {
            None => Ok(i),
            Some(msg) => Err(Error::Inconsistency(format!(
                "mu0_star({}): {msg}",
                self.q.name(a)
            ))),
        }
    }

    /// `μ₀⁎` preserves binary joins and the empty join.
    pub fn multiplicativity(&self) -> Result<Verdict> {
        let q = self.q;
        let stars: Vec<BiIdeal> = q.elements().map(|a| self.mu0_star(a)).collect::<Result<_>>()?;
        if stars[q.bot()] != self.space.bottom() {
            return Ok(Verdict::Fails(vec![q.bot()]));
        }
        for a in q.elements() {
            for b in a + 1..q.len() {
                if stars[q.join(a, b)] != self.space.join(&stars[a], &stars[b])? {
                    return Ok(Verdict::Fails(vec![a, b]));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// `(μ₀)⁎∘d* = π₁*∘d*` and `(μ₀)⁎∘r* = π₂*∘r*` on `R(Q)`, and both are frame maps.
    pub fn semicategory_checks(&self) -> Result<Vec<TheoremCheck>> {
        let q = self.q;
        let rs = q.right_sided();
        let one = q.one();
        let mut d_fail = None;
        let mut r_fail = None;
        let mut dvals = Vec::new();
        let mut rvals = Vec::new();
        for &z in rs {
            let dz = self.mu0_star(z)?;
            let rz = self.mu0_star(q.star(z))?;
            if d_fail.is_none() && dz != self.space.pure(z, one) {
                d_fail = Some(vec![z]);
            }
            if r_fail.is_none() && rz != self.space.pure(one, q.star(z)) {
                r_fail = Some(vec![z]);
            }
            dvals.push(dz);
            rvals.push(rz);
        }
        let rl = q.rs_lattice();
        let hom_fail = |vals: &[BiIdeal]| -> Result<Option<Vec<Elem>>> {
            if vals[rl.bot()] != self.space.bottom() || vals[rl.top()] != self.space.top() {
                return Ok(Some(Vec::new()));
            }
            for i in rl.elements() {
                for j in i + 1..rl.len() {
                    if vals[rl.join(i, j)] != self.space.join(&vals[i], &vals[j])?
                        || vals[rl.meet(i, j)] != self.space.meet(&vals[i], &vals[j])?
                    {
                        return Ok(Some(vec![rs[i], rs[j]]));
                    }
                }
            }
            Ok(None)
        };
        Ok(vec![
            TheoremCheck::new(
                "(μ₀)⁎∘d* = π₁*∘d*",
                Verdict::from_failure(d_fail),
            ),
            TheoremCheck::new(
                "(μ₀)⁎∘r* = π₂*∘r*",
                Verdict::from_failure(r_fail),
            ),
            TheoremCheck::new(
                "(μ₀)⁎∘d* is a frame homomorphism",
                Verdict::from_failure(hom_fail(&dvals)?),
            ),
            TheoremCheck::new(
                "(μ₀)⁎∘r* is a frame homomorphism",
                Verdict::from_failure(hom_fail(&rvals)?),
            ),
        ])
    }
}

/// `is_multiplicative`, or skipped when the reduced multiplication is undefined.
pub fn multiplicativity(q: &Quantale) -> Verdict {
    match ReducedMult::new(q) {
        Err(Error::Hypothesis(why)) => Verdict::Skipped(why),
        Err(e) => Verdict::Skipped(e.to_string()),
        Ok(rm) => rm
            .multiplicativity()
            .unwrap_or_else(|e| Verdict::Skipped(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qa() -> Quantale {
        let p = Arc::new(FiniteLattice::powerset(&["a", "b"]));
        Quantale::from_generators(p, |j, k| if j == k { j } else { 3 }, |j| j).unwrap()
    }

    #[test]
    fn trivial_elements() {
        let q = qa();
        let t = TensorSpace::over_rs(&q);
        assert_eq!(t.top().len(), 16);
        for b in q.elements() {
            assert_eq!(t.pure(q.bot(), b), t.bottom());
        }
        let i = t.pure(1, 2);
        assert_eq!(t.join(&i, &t.bottom()).unwrap(), i);
        assert_eq!(t.join(&i, &t.top()).unwrap(), t.top());
    }

    #[test]
    fn slot_joins_of_pure_tensors() {
        let q = qa();
        let t = TensorSpace::over_rs(&q);
        for a in q.elements() {
            for a2 in q.elements() {
                for b in q.elements() {
                    let lhs = t.join(&t.pure(a, b), &t.pure(a2, b)).unwrap();
                    assert_eq!(lhs, t.pure(q.join(a, a2), b));
                }
            }
        }
    }

    #[test]
    fn mu0_on_pure_tensors() {
        let q = qa();
        let rm = ReducedMult::new(&q).unwrap();
        for a in q.elements() {
            for b in q.elements() {
                assert_eq!(rm.mu0(&rm.space.pure(a, b)), q.mul(a, b));
            }
        }
        assert_eq!(rm.mu0(&rm.space.bottom()), q.bot());
        assert_eq!(rm.mu0(&rm.space.top()), q.mul(q.one(), q.one()));
        assert_eq!(rm.mu0_star(q.one()).unwrap(), rm.space.top());
    }

    #[test]
    fn closure_is_order_independent() {
        let q = qa();
        let t = TensorSpace::over_rs(&q);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in [vec![(1, 2)], vec![(3, 1), (2, 2)], vec![]] {
            let a = t.closure(seed.clone());
            for _ in 0..5 {
                assert_eq!(t.closure_shuffled(&seed, &mut rng), a);
            }
        }
    }

    #[test]
    fn unbalanced_tensor_of_powersets_is_powerset_of_product() {
        let p = Arc::new(FiniteLattice::powerset(&["a", "b"]));
        let t = TensorSpace::unbalanced(p.clone(), p);
        assert_eq!(t.enumerate(DEFAULT_CAP).unwrap().len(), 16);
    }

    #[test]
    fn identity_tensor_map_is_mono() {
        let q = qa();
        let t = TensorSpace::over_rs(&q);
        let m = TensorMap::new(&t, &t, q.elements().collect()).unwrap();
        let all = t.enumerate(DEFAULT_CAP).unwrap();
        assert!(m.mono_failure(&all).is_none());
    }
}
