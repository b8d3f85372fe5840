//! Finite inverse semigroups, abstract complete pseudogroups, and the join
//! completion `L∨(S)`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{set_name, Elem, FiniteLattice};
use crate::quantale::Quantale;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSemigroup {
    names: Vec<String>,
    mult: Vec<usize>,
    inv: Vec<usize>,
    idempotent: Vec<bool>,
    leq: Vec<bool>,
    compat: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcpReport {
    /// Every nonempty compatible subset has a join; witness is the subset.
    pub complete: Verdict,
    /// `s(⋁A) = ⋁sA` and `(⋁A)s = ⋁As`; witness is `[s, ..A]`.
    pub distributive: Verdict,
    pub pairs_checked: usize,
}

impl AcpReport {
    pub fn is_acp(&self) -> bool {
        self.complete.holds() && self.distributive.holds()
    }
}

impl InverseSemigroup {
    pub fn new(names: Vec<String>, mult: Vec<usize>, inv: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if mult.len() != n * n || inv.len() != n || mult.iter().chain(&inv).any(|&x| x >= n) {
            return Err(Error::SemigroupLaw {
                law: "table shape",
                witness: format!("expected {n}x{n} multiplication and {n} inverses"),
            });
        }
        let m = |a: usize, b: usize| mult[a * n + b];
        let law = |law: &'static str, w: &[usize]| Error::SemigroupLaw {
            law,
            witness: w.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(", "),
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(law("associativity", &[a, b, c]));
                    }
                }
            }
        }
        for s in 0..n {
            let t = inv[s];
            if m(m(s, t), s) != s || m(m(t, s), t) != t {
                return Err(law("s s⁻¹ s = s", &[s]));
            }
            for t2 in 0..n {
                if t2 != t && m(m(s, t2), s) == s && m(m(t2, s), t2) == t2 {
                    return Err(law("inverses are unique", &[s, t, t2]));
                }
            }
        }
        let idempotent: Vec<bool> = (0..n).map(|s| m(s, s) == s).collect();
        for e in 0..n {
            for f in 0..n {
                if idempotent[e] && idempotent[f] && m(e, f) != m(f, e) {
                    return Err(law("idempotents commute", &[e, f]));
                }
            }
        }
        let mut leq = vec![false; n * n];
        let mut compat = vec![false; n * n];
        for s in 0..n {
            for t in 0..n {
                leq[s * n + t] = m(m(s, inv[s]), t) == s;
                compat[s * n + t] = idempotent[m(inv[s], t)] && idempotent[m(s, inv[t])];
            }
        }
        Ok(InverseSemigroup {
            names,
            mult,
            inv,
            idempotent,
            leq,
            compat,
        })
    }

    pub fn from_fn(
        names: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
        inv: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let n = names.len();
        let mult = (0..n * n).map(|k| mul(k / n, k % n)).collect();
        let inv = (0..n).map(inv).collect();
        Self::new(names, mult, inv)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.mult[s * self.len() + t]
    }

    pub fn inv(&self, s: usize) -> usize {
        self.inv[s]
    }

    pub fn mult_table(&self) -> &[usize] {
        &self.mult
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.idempotent[s]
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.idempotent[s]).collect()
    }

    /// Natural order: `s ≤ t` iff `s = ss⁻¹t`.
    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.leq[s * self.len() + t]
    }

    pub fn compatible(&self, s: usize, t: usize) -> bool {
        self.compat[s * self.len() + t]
    }

    pub fn zero(&self) -> Option<usize> {
        (0..self.len()).find(|&z| (0..self.len()).all(|s| self.mul(z, s) == z && self.mul(s, z) == z))
    }

    pub fn down_set(&self, s: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.leq(t, s)).collect()
    }

    /// Least upper bound in the natural order, if any.
    pub fn join(&self, set: &[usize]) -> Option<usize> {
        let n = self.len();
        let mut ub = FixedBitSet::with_capacity(n);
        ub.insert_range(..);
        for &a in set {
            for t in 0..n {
                if !self.leq(a, t) {
                    ub.set(t, false);
                }
            }
        }
        ub.ones()
            .find(|&c| ub.ones().all(|t| self.leq(c, t)))
    }

    /// Completeness over nonempty compatible subsets and infinite distributivity.
    ///
    /// Checked on compatible pairs. Multiplication distributes over every join
    /// that exists, so if `a ∨ b` exists and `c` is compatible with both, then
    /// `(a ∨ b)⁻¹c = a⁻¹c ∨ b⁻¹c` is idempotent and `a ∨ b` is compatible with
    /// `c`; by induction every finite compatible set has a join, and
    /// distributivity over pairs extends to it.
    pub fn acp_check(&self) -> AcpReport {
        let n = self.len();
        let mut complete = None;
        let mut distributive = None;
        let mut pairs = 0;
        'outer: for a in 0..n {
            for b in a + 1..n {
                if !self.compatible(a, b) {
                    continue;
                }
                pairs += 1;
                let Some(j) = self.join(&[a, b]) else {
                    complete = Some(vec![a, b]);
                    break 'outer;
                };
                if distributive.is_some() {
                    continue;
                }
                for s in 0..n {
                    let left = self.join(&[self.mul(s, a), self.mul(s, b)]);
                    let right = self.join(&[self.mul(a, s), self.mul(b, s)]);
                    if left != Some(self.mul(s, j)) || right != Some(self.mul(j, s)) {
                        distributive = Some(vec![s, a, b]);
                        break;
                    }
                }
            }
        }
        let complete = Verdict::from_failure(complete);
        let distributive = if complete.holds() {
            Verdict::from_failure(distributive)
        } else {
            Verdict::skipped("joins missing")
        };
        AcpReport {
            complete,
            distributive,
            pairs_checked: pairs,
        }
    }

    /// `S` if it has a zero (and more than one element), else `S` with a zero
    /// adjoined. `I(L∨(S))` recovers this semigroup.
    pub fn with_zero(&self) -> Self {
        let n = self.len();
        if n > 1 && self.zero().is_some() {
            return self.clone();
        }
        let zero = if self.index_of("0").is_some() { "⊥" } else { "0" };
        let mut names = vec![zero.to_string()];
        names.extend(self.names.iter().cloned());
        Self::from_fn(
            names,
            |a, b| if a == 0 || b == 0 { 0 } else { self.mul(a - 1, b - 1) + 1 },
            |a| if a == 0 { 0 } else { self.inv(a - 1) + 1 },
        )
        .expect("adjoining a zero keeps the inverse semigroup laws")
    }

    /// The subsemigroup on `keep`, which must be closed under products and inverses.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let look = |s: usize| {
            pos.get(&s).copied().ok_or_else(|| Error::SemigroupLaw {
                law: "closure of the subset",
                witness: self.names[s].clone(),
            })
        };
        let mut mult = Vec::with_capacity(keep.len() * keep.len());
        for &a in keep {
            for &b in keep {
                mult.push(look(self.mul(a, b))?);
            }
        }
        let inv = keep.iter().map(|&a| look(self.inv(a))).collect::<Result<_>>()?;
        Self::new(keep.iter().map(|&a| self.names[a].clone()).collect(), mult, inv)
    }
}

/// `L∨(S)`: closed down-sets of an ACP, with the principal embedding.
#[derive(Clone, Debug)]
pub struct Completion {
    pub quantale: Quantale,
    /// Element `k` of the quantale is the set `sets[k]` of semigroup elements.
    pub sets: Vec<u64>,
    /// `s ↦ ↓s` as quantale element ids.
    pub principal: Vec<Elem>,
}

impl Completion {
    pub fn element_of(&self, set: u64) -> Option<Elem> {
        self.sets.iter().position(|&m| m == set)
    }
}

fn closure(s: &InverseSemigroup, seed: u64) -> u64 {
    let n = s.len();
    let mut x = seed;
    loop {
        let mut next = x;
        for a in crate::topology::bits(x) {
            for t in 0..n {
                if s.leq(t, a) {
                    next |= 1 << t;
                }
            }
        }
        for a in crate::topology::bits(next) {
            for b in crate::topology::bits(next) {
                if a < b && s.compatible(a, b) {
                    if let Some(j) = s.join(&[a, b]) {
                        next |= 1 << j;
                    }
                }
            }
        }
        if next == x {
            return x;
        }
        x = next;
    }
}

/// The join completion of an ACP into an inverse quantal frame.
pub fn lcc_completion(s: &InverseSemigroup) -> Result<Completion> {
    let n = s.len();
    if n > 64 {
        return Err(Error::TooLarge(format!("{n} semigroup elements (completion supports 64)")));
    }
    let report = s.acp_check();
    if !report.is_acp() {
        let why = match (&report.complete, &report.distributive) {
            (Verdict::Fails(w), _) => format!(
                "compatible set {{{}}} has no join",
                w.iter().map(|&x| s.name(x)).collect::<Vec<_>>().join(", ")
            ),
            (_, Verdict::Fails(w)) => format!("multiplication by `{}` does not distribute", s.name(w[0])),
            _ => "unknown".into(),
        };
        return Err(Error::NotAcp(why));
    }
    let principal_sets: Vec<u64> = (0..n).map(|a| closure(s, 1 << a)).collect();
    // The trivial semigroup's only element is formally a zero; it completes to
    // the 2-chain like any group, with the empty set as bottom.
    let bottom = match s.zero() {
        Some(z) if n > 1 => 1u64 << z,
        _ => 0,
    };
    let mut sets = vec![bottom];
    let mut seen: HashMap<u64, ()> = HashMap::from([(bottom, ())]);
    let mut queue: VecDeque<u64> = VecDeque::from([bottom]);
    while let Some(x) = queue.pop_front() {
        for &p in &principal_sets {
            let y = closure(s, x | p);
            if seen.insert(y, ()).is_none() {
                sets.push(y);
                queue.push_back(y);
            }
        }
    }
    sets.sort_by_key(|&m| (m.count_ones(), m));
    let pts: Vec<&str> = s.names().iter().map(String::as_str).collect();
    let names: Vec<String> = sets.iter().map(|&m| set_name(m, &pts)).collect();
    let frame = Arc::new(FiniteLattice::from_sets(names, &sets)?);
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let k = sets.len();
    let mut mult = Vec::with_capacity(k * k);
    for &x in &sets {
        for &y in &sets {
            let mut prod = 0u64;
            for a in crate::topology::bits(x) {
                for b in crate::topology::bits(y) {
                    prod |= 1 << s.mul(a, b);
                }
            }
            mult.push(index[&closure(s, prod)]);
        }
    }
    let inv = sets
        .iter()
        .map(|&x| index[&crate::topology::bits(x).fold(0u64, |acc, a| acc | 1 << s.inv(a))])
        .collect();
    let quantale = Quantale::new(frame, mult, inv)?;
    let principal = principal_sets.iter().map(|m| index[m]).collect();
    Ok(Completion {
        quantale,
        sets,
        principal,
    })
}

/// `I(Q)` as an inverse semigroup; the second component lists the quantale
/// element behind each semigroup element.
pub fn partial_units_semigroup(q: &Quantale) -> Result<(InverseSemigroup, Vec<Elem>)> {
    if !q.classify().inverse() {
        return Err(Error::Hypothesis("partial units semigroup needs an inverse quantal frame".into()));
    }
    let pu = q.partial_units()?;
    let pos: HashMap<Elem, usize> = pu.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let names = pu.iter().map(|&a| q.name(a).to_string()).collect();
    let s = InverseSemigroup::from_fn(names, |a, b| pos[&q.mul(pu[a], pu[b])], |a| pos[&q.star(pu[a])])?;
    Ok((s, pu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{quantale_iso, semigroup_iso};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Partial injections of {1, 2} encoded as `[f(1), f(2)]` with 0 = undefined.
    pub(crate) fn i2() -> InverseSemigroup {
        let maps: Vec<[usize; 2]> = vec![[0, 0], [1, 0], [0, 2], [2, 0], [0, 1], [1, 2], [2, 1]];
        let nm = ["0", "1↦1", "2↦2", "1↦2", "2↦1", "id", "swap"];
        let find = |m: [usize; 2]| maps.iter().position(|&x| x == m).unwrap();
        InverseSemigroup::from_fn(
            names(&nm),
            |a, b| {
                // `a·b` = first apply `a`, then `b`
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

    #[test]
    fn i2_is_an_acp() {
        let s = i2();
        assert_eq!(s.idempotents().len(), 4);
        assert_eq!(s.zero(), Some(0));
        let r = s.acp_check();
        assert!(r.is_acp());
        let j = s.join(&[1, 2]).unwrap();
        assert_eq!(s.name(j), "id");
        assert!(!s.compatible(1, 3));
    }

    #[test]
    fn left_zero_semigroup_rejected() {
        let e = InverseSemigroup::from_fn(names(&["a", "b"]), |a, _| a, |a| a).unwrap_err();
        assert!(matches!(e, Error::SemigroupLaw { .. }));
    }

    #[test]
    fn missing_join_is_not_complete() {
        // 0 < a, 0 < b with a, b incomparable
        let s = InverseSemigroup::from_fn(
            names(&["0", "a", "b"]),
            |x, y| if x == y { x } else { 0 },
            |x| x,
        )
        .unwrap();
        let r = s.acp_check();
        assert_eq!(r.complete, Verdict::Fails(vec![1, 2]));
        assert!(matches!(lcc_completion(&s), Err(Error::NotAcp(_))));
    }

    #[test]
    fn completion_of_i2() {
        let c = lcc_completion(&i2()).unwrap();
        let q = &c.quantale;
        assert_eq!(q.len(), 16);
        assert!(q.classify().inverse());
        let e = q.unit().unwrap();
        assert_eq!(c.sets[e].count_ones(), 4);
        let (pu, _) = partial_units_semigroup(q).unwrap();
        assert!(semigroup_iso(&pu, &i2()).is_some());
    }

    #[test]
    fn trivial_group_completes_to_two_chain() {
        let s = InverseSemigroup::from_fn(names(&["1"]), |_, _| 0, |_| 0).unwrap();
        let c = lcc_completion(&s).unwrap();
        assert_eq!(c.quantale.len(), 2);
        let chain = Arc::new(FiniteLattice::chain(2));
        let two = Quantale::new(chain, vec![0, 0, 0, 1], vec![0, 1]).unwrap();
        assert!(quantale_iso(&c.quantale, &two).is_some());
    }

    #[test]
    fn semilattice_completion_is_down_set_frame() {
        // chain 0 < e < 1 as a meet semilattice
        let s = InverseSemigroup::from_fn(names(&["0", "e", "1"]), |a, b| a.min(b), |a| a).unwrap();
        let c = lcc_completion(&s).unwrap();
        // the zero is the bottom: {0}, {0,e}, {0,e,1}
        assert_eq!(c.quantale.len(), 3);
        for a in c.quantale.elements() {
            for b in c.quantale.elements() {
                assert_eq!(c.quantale.mul(a, b), c.quantale.meet(a, b));
            }
        }
    }

    #[test]
    fn groups_complete_with_an_adjoined_zero() {
        let z2 = InverseSemigroup::from_fn(names(&["e", "g"]), |a, b| a ^ b, |a| a).unwrap();
        let c = lcc_completion(&z2).unwrap();
        let (back, _) = partial_units_semigroup(&c.quantale).unwrap();
        assert_eq!(back.len(), 3);
        assert!(semigroup_iso(&back, &z2.with_zero()).is_some());
        assert!(semigroup_iso(&i2().with_zero(), &i2()).is_some());
    }
}
