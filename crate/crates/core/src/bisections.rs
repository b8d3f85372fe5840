//! Local bisections of open quantal frames, their products and actions, weak
//! multiplicativity, and the semigroup `ℬ(Q)`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::TopGroupoid;
use crate::lattice::{frame_homs, Elem};
use crate::quantale::Quantale;
use crate::semigroup::InverseSemigroup;
use crate::topology::{bits, FiniteSpace, Mask};
use crate::verdict::{TheoremCheck, Verdict};

/// A local bisection `(U, s)`, stored through `s* : Q → ↓U ∩ R(Q)` and the
/// derived codomain `V` and `t* : Q → ↓V ∩ R(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bisection {
    pub u: Elem,
    pub v: Elem,
    pub sstar: Vec<Elem>,
    pub tstar: Vec<Elem>,
}

/// Why a candidate pair `(U, s*)` is not a local bisection.
pub type Rejection = String;

/// Validates `(U, s*)` and derives `V` and `t*`.
pub fn bisection(q: &Quantale, u: Elem, sstar: Vec<Elem>) -> std::result::Result<Bisection, Rejection> {
    let f = q.frame();
    let rs = q.right_sided();
    if !q.is_right_sided(u) {
        return Err(format!("domain {} is not right-sided", q.name(u)));
    }
    if sstar.len() != q.len() {
        return Err("table length".into());
    }
    if let Some(a) = q.elements().find(|&a| !q.is_right_sided(sstar[a]) || !q.leq(sstar[a], u)) {
        return Err(format!("s*({}) is not a right-sided element below U", q.name(a)));
    }
    if sstar[q.bot()] != q.bot() || sstar[q.one()] != u {
        return Err("s* does not preserve bottom and top".into());
    }
    for a in q.elements() {
        for b in a + 1..q.len() {
            if sstar[f.join(a, b)] != f.join(sstar[a], sstar[b]) || sstar[f.meet(a, b)] != f.meet(sstar[a], sstar[b]) {
                return Err(format!("s* is not a frame map at ({}, {})", q.name(a), q.name(b)));
            }
        }
    }
    if let Some(&z) = rs.iter().find(|&&z| sstar[z] != f.meet(z, u)) {
        return Err(format!("section law fails at {}", q.name(z)));
    }
    // (r∘s)*(z) = s*(z*) must factor as restriction to ↓V followed by an iso ↓V ≅ ↓U.
    let phi = |z: Elem| sstar[q.star(z)];
    let v = f.meet_all(rs.iter().copied().filter(|&z| phi(z) == u));
    if let Some(&z) = rs.iter().find(|&&z| phi(z) != phi(f.meet(z, v))) {
        return Err(format!("r∘s does not factor through V at {}", q.name(z)));
    }
    let below_v: Vec<Elem> = rs.iter().copied().filter(|&z| q.leq(z, v)).collect();
    let below_u: Vec<Elem> = rs.iter().copied().filter(|&z| q.leq(z, u)).collect();
    let mut inverse: HashMap<Elem, Elem> = HashMap::new();
    for &z in &below_v {
        if inverse.insert(phi(z), z).is_some() {
            return Err(format!("r∘s is not a monomorphism at {}", q.name(z)));
        }
    }
    if below_u.len() != below_v.len() {
        return Err("r∘s is not onto its image".into());
    }
    let tstar = q.elements().map(|a| inverse[&sstar[a]]).collect();
    Ok(Bisection { u, v, sstar, tstar })
}

/// Outcome of multiplying two bisections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Product {
    Defined(usize),
    /// The map `f` fails to preserve joins at the given pair (or `[⊥]`).
    NotJoinPreserving(Vec<Elem>),
    /// `f` preserves joins but does not yield a bisection. Contradicts a proved lemma.
    Invalid(String),
}

impl Product {
    pub fn index(&self) -> Option<usize> {
        match self {
            Product::Defined(i) => Some(*i),
            _ => None,
        }
    }
}

/// All bisections of an open quantal frame, with residuals cached for the
/// product and action formulas.
#[derive(Clone, Debug)]
pub struct Bisections<'q> {
    pub q: &'q Quantale,
    pub list: Vec<Bisection>,
    index: HashMap<(Elem, Vec<Elem>), usize>,
    /// `lres[a·n + y] = ⋁{x : xy ≤ a}`.
    lres: Vec<Elem>,
    /// `rres[x·n + a] = ⋁{y : xy ≤ a}`.
    rres: Vec<Elem>,
}

fn join_failure(q: &Quantale, f: &[Elem]) -> Option<Vec<Elem>> {
    let fr = q.frame();
    if f[q.bot()] != q.bot() {
        return Some(vec![q.bot()]);
    }
    for a in q.elements() {
        for b in a + 1..q.len() {
            if f[fr.join(a, b)] != fr.join(f[a], f[b]) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

impl<'q> Bisections<'q> {
    /// Enumerates `ℬ(Q)`. Requires `Q` open.
    pub fn enumerate(q: &'q Quantale) -> Result<Self> {
        if !q.classify().open() {
            return Err(Error::Hypothesis("bisections need an open quantal frame".into()));
        }
        let f = q.frame();
        let rs = q.right_sided();
        // Least right-sided element above each join-irreducible.
        let cl = |a: Elem| f.meet_all(rs.iter().copied().filter(|&z| f.leq(a, z)));
        let js = f.join_irreducibles().to_vec();
        let mut list = Vec::new();
        for &u in rs {
            let keep: Vec<Elem> = rs.iter().copied().filter(|&z| f.leq(z, u)).collect();
            let dst = Arc::new(f.restrict(&keep)?);
            let homs = frame_homs(f, &dst, |k| js.iter().copied().filter(|&j| cl(j) == keep[k]).collect());
            for h in homs {
                let sstar = h.table.iter().map(|&k| keep[k]).collect();
                if let Ok(b) = bisection(q, u, sstar) {
                    list.push(b);
                }
            }
        }
        list.sort_by(|a, b| (a.u, &a.sstar).cmp(&(b.u, &b.sstar)));
        Ok(Self::from_list(q, list))
    }

    fn from_list(q: &'q Quantale, list: Vec<Bisection>) -> Self {
        let n = q.len();
        let f = q.frame();
        let mut lres = vec![0; n * n];
        let mut rres = vec![0; n * n];
        for a in 0..n {
            for y in 0..n {
                lres[a * n + y] = f.join_all((0..n).filter(|&x| q.leq(q.mul(x, y), a)));
                rres[y * n + a] = f.join_all((0..n).filter(|&x| q.leq(q.mul(y, x), a)));
            }
        }
        let index = list
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.u, b.sstar.clone()), i))
            .collect();
        Bisections {
            q,
            list,
            index,
            lres,
            rres,
        }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &Bisection {
        &self.list[i]
    }

    pub fn find(&self, u: Elem, sstar: &[Elem]) -> Option<usize> {
        self.index.get(&(u, sstar.to_vec())).copied()
    }

    /// `s_!(U) = ⋀{a : s*(a) = U}`, the least element the bisection lies in.
    pub fn graph(&self, i: usize) -> Elem {
        let b = &self.list[i];
        self.q
            .frame()
            .meet_all(self.q.elements().filter(|&a| b.sstar[a] == b.u))
    }

    /// Display names built from graphs, disambiguated when graphs collide.
    pub fn names(&self) -> Vec<String> {
        let mut count: HashMap<Elem, usize> = HashMap::new();
        (0..self.len())
            .map(|i| {
                let g = self.graph(i);
                let c = count.entry(g).or_default();
                *c += 1;
                let base = format!("⟨{}⟩", self.q.name(g));
                if *c > 1 {
                    format!("{base}#{c}")
                } else {
                    base
                }
            })
            .collect()
    }

    /// The bisection with `U = ⊥`.
    pub fn empty(&self) -> usize {
        self.find(self.q.bot(), &vec![self.q.bot(); self.q.len()])
            .expect("the empty bisection always exists")
    }

    /// `ε = (1, υ)`, present when `υ` preserves joins.
    pub fn epsilon(&self) -> Option<usize> {
        self.find(self.q.one(), self.q.upsilon_table())
    }

    /// `σ⁻¹ = (V, a ↦ t*(a*))`.
    pub fn inverse_parts(&self, i: usize) -> (Elem, Vec<Elem>) {
        let b = &self.list[i];
        (b.v, self.q.elements().map(|a| b.tstar[self.q.star(a)]).collect())
    }

    pub fn inverse(&self, i: usize) -> Result<usize> {
        let (v, s) = self.inverse_parts(i);
        self.find(v, &s)
            .ok_or_else(|| Error::Inconsistency(format!("inverse of bisection {i} is not a bisection")))
    }

    /// `f(a) = ⋁_{xy≤a} s*_σ(x ∧ s*_τ(y)*)`.
    pub fn product_map(&self, i: usize, j: usize) -> Vec<Elem> {
        let q = self.q;
        let f = q.frame();
        let n = q.len();
        let (s, t) = (&self.list[i].sstar, &self.list[j].sstar);
        (0..n)
            .map(|a| f.join_all((0..n).map(|y| s[f.meet(self.lres[a * n + y], q.star(t[y]))])))
            .collect()
    }

    pub fn product(&self, i: usize, j: usize) -> Product {
        let fmap = self.product_map(i, j);
        if let Some(w) = join_failure(self.q, &fmap) {
            return Product::NotJoinPreserving(w);
        }
        let w = self.list[i].sstar[self.q.star(self.list[j].u)];
        match bisection(self.q, w, fmap) {
            Err(why) => Product::Invalid(why),
            Ok(b) => match self.find(b.u, &b.sstar) {
                Some(k) => Product::Defined(k),
                None => Product::Invalid("product missing from the enumeration".into()),
            },
        }
    }

    /// `σ·a = ⋁_{x*y≤a} s*(x) ∧ y`.
    pub fn action(&self, i: usize, a: Elem) -> Elem {
        let q = self.q;
        let f = q.frame();
        let n = q.len();
        let s = &self.list[i].sstar;
        f.join_all((0..n).map(|x| f.meet(s[x], self.rres[q.star(x) * n + a])))
    }

    /// `a·σ⁻¹ = ⋁_{xy≤a} x ∧ s*(y)*`.
    pub fn action_right_inv(&self, i: usize, a: Elem) -> Elem {
        let q = self.q;
        let f = q.frame();
        let n = q.len();
        let s = &self.list[i].sstar;
        f.join_all((0..n).map(|y| f.meet(self.lres[a * n + y], q.star(s[y]))))
    }

    /// Bisection `i` acts join-preservingly; witness `[a, b]` or `[⊥]`.
    pub fn action_join_failure(&self, i: usize) -> Option<Vec<Elem>> {
        let table: Vec<Elem> = self.q.elements().map(|a| self.action(i, a)).collect();
        join_failure(self.q, &table)
    }

    /// Per-bisection formula lemmas, inverses, and product identities.
    pub fn formula_checks(&self) -> Vec<TheoremCheck> {
        let q = self.q;
        let f = q.frame();
        let rs = q.right_sided();
        let mut fails: Vec<(&'static str, Option<Vec<Elem>>)> = vec![
            ("s*(a) = a ∧ U on R(Q)", None),
            ("U = s*(1) = s*(V*)", None),
            ("s*(x) = s*(x ∧ V*)", None),
            ("t*(a*) = a ∧ V on R(Q)", None),
            ("V = t*(1) = t*(U)", None),
            ("t*(x) = t*(x ∧ U)", None),
            ("α_!(a) = t*(a) for a ≤ U", None),
            ("(σ⁻¹)⁻¹ = σ", None),
            ("(σ·a)* = a*·σ⁻¹", None),
        ];
        let mut note = |k: usize, w: Vec<Elem>| {
            if fails[k].1.is_none() {
                fails[k].1 = Some(w);
            }
        };
        for (i, b) in self.list.iter().enumerate() {
            let (s, t, u, v) = (&b.sstar, &b.tstar, b.u, b.v);
            for &z in rs {
                if s[z] != f.meet(z, u) {
                    note(0, vec![i, z]);
                }
                if t[q.star(z)] != f.meet(z, v) {
                    note(3, vec![i, z]);
                }
                // α* : ↓V → ↓U is a ↦ s*(a*); α_! is its inverse.
                if q.leq(z, u) && s[q.star(t[z])] != z {
                    note(6, vec![i, z]);
                }
            }
            if s[q.one()] != u || s[q.star(v)] != u {
                note(1, vec![i]);
            }
            if t[q.one()] != v || t[u] != v {
                note(4, vec![i]);
            }
            for x in q.elements() {
                if s[x] != s[f.meet(x, q.star(v))] {
                    note(2, vec![i, x]);
                }
                if t[x] != t[f.meet(x, u)] {
                    note(5, vec![i, x]);
                }
                if q.star(self.action(i, x)) != self.action_right_inv(i, q.star(x)) {
                    note(8, vec![i, x]);
                }
            }
            match self.inverse(i).and_then(|k| self.inverse(k)) {
                Ok(back) if back == i => {}
                _ => note(7, vec![i]),
            }
        }
        let mut out: Vec<TheoremCheck> = fails
            .into_iter()
            .map(|(name, w)| TheoremCheck::new(name, Verdict::from_failure(w)))
            .collect();
        out.extend(self.product_identities());
        out
    }

    fn product_identities(&self) -> Vec<TheoremCheck> {
        let q = self.q;
        let f = q.frame();
        let n = self.len();
        let mut meets = None;
        let mut lower = None;
        let mut valid = None;
        let mut inv_rule = None;
        for i in 0..n {
            for j in 0..n {
                let fm = self.product_map(i, j);
                if meets.is_none() {
                    'm: for a in q.elements() {
                        for b in a + 1..q.len() {
                            if fm[f.meet(a, b)] != f.meet(fm[a], fm[b]) {
                                meets = Some(vec![i, j, a, b]);
                                break 'm;
                            }
                        }
                    }
                }
                let (s, t) = (&self.list[i].sstar, &self.list[j].sstar);
                if lower.is_none() {
                    if let Some(&a) = q
                        .right_sided()
                        .iter()
                        .find(|&&a| !q.leq(s[q.star(t[q.star(a)])], fm[q.star(a)]))
                    {
                        lower = Some(vec![i, j, a]);
                    }
                }
                match self.product(i, j) {
                    Product::Invalid(_) => {
                        valid.get_or_insert(vec![i, j]);
                    }
                    Product::Defined(k) => {
                        let lhs = self.inverse(k).ok();
                        let rhs = match (self.inverse(j), self.inverse(i)) {
                            (Ok(jj), Ok(ii)) => self.product(jj, ii).index(),
                            _ => None,
                        };
                        if lhs.is_none() || lhs != rhs {
                            inv_rule.get_or_insert(vec![i, j]);
                        }
                    }
                    Product::NotJoinPreserving(_) => {}
                }
            }
        }
        vec![
            TheoremCheck::new("f preserves binary meets", Verdict::from_failure(meets)),
            TheoremCheck::new("f(a*) ≥ s*_σ(s*_τ(a*)*) on R(Q)", Verdict::from_failure(lower)),
            TheoremCheck::new("join-preserving f yields a bisection", Verdict::from_failure(valid)),
            TheoremCheck::new("(στ)⁻¹ = τ⁻¹σ⁻¹", Verdict::from_failure(inv_rule)),
        ]
    }

    /// Weak multiplicativity and, when it holds, the semigroup `ℬ(Q)` with
    /// the consequences of the ACP theorem.
    pub fn weak_multiplicativity(&self) -> WeakMultReport {
        let q = self.q;
        let n = self.len();
        let upsilon_joins = Verdict::from_failure(join_failure(q, q.upsilon_table()));
        let actions_join = Verdict::from_failure(
            (0..n).find_map(|i| self.action_join_failure(i).map(|mut w| {
                w.insert(0, i);
                w
            })),
        );
        let mut table = vec![None; n * n];
        let mut undefined = None;
        for i in 0..n {
            for j in 0..n {
                match self.product(i, j) {
                    Product::Defined(k) => table[i * n + j] = Some(k),
                    _ => {
                        undefined.get_or_insert(vec![i, j]);
                    }
                }
            }
        }
        let products_defined = Verdict::from_failure(undefined);
        let associative = if products_defined.holds() {
            let m = |a: usize, b: usize| table[a * n + b].unwrap();
            let mut w = None;
            'a: for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if m(m(a, b), c) != m(a, m(b, c)) {
                            w = Some(vec![a, b, c]);
                            break 'a;
                        }
                    }
                }
            }
            Verdict::from_failure(w)
        } else {
            Verdict::skipped("some products undefined")
        };
        let holds = upsilon_joins.holds() && actions_join.holds() && associative.holds();
        let mut report = WeakMultReport {
            upsilon_joins,
            actions_join,
            products_defined,
            associative,
            weakly_multiplicative: holds,
            table: table.iter().map(|x| x.unwrap_or(usize::MAX)).collect(),
            semigroup: None,
            consequences: Vec::new(),
        };
        if holds {
            self.consequences(&mut report);
        }
        report
    }

    fn consequences(&self, report: &mut WeakMultReport) {
        let q = self.q;
        let f = q.frame();
        let n = self.len();
        let inv: Vec<usize> = match (0..n).map(|i| self.inverse(i)).collect::<Result<_>>() {
            Ok(v) => v,
            Err(e) => {
                report.consequences.push(
                    TheoremCheck::new("ℬ(Q) is an inverse semigroup", Verdict::Fails(Vec::new()))
                        .with_detail(e.to_string()),
                );
                return;
            }
        };
        let s = match InverseSemigroup::new(self.names(), report.table.clone(), inv) {
            Ok(s) => s,
            Err(e) => {
                report.consequences.push(
                    TheoremCheck::new("ℬ(Q) is an inverse semigroup", Verdict::Fails(Vec::new()))
                        .with_detail(e.to_string()),
                );
                return;
            }
        };
        let mut checks = vec![TheoremCheck::new("ℬ(Q) is an inverse semigroup", Verdict::Holds)];
        let r = s.acp_check();
        checks.push(TheoremCheck::new(
            "ℬ(Q) is complete and infinitely distributive",
            if r.is_acp() {
                Verdict::Holds
            } else {
                Verdict::Fails(r.complete.witness().or(r.distributive.witness()).unwrap_or(&[]).to_vec())
            },
        ));
        let eps = self.epsilon();
        let unit_fail = match eps {
            None => Some(Vec::new()),
            Some(e) => q.elements().find(|&a| {
                self.action(e, a) != a || q.star(self.action(e, q.star(a))) != a
            }).map(|a| vec![a]),
        };
        checks.push(TheoremCheck::new("ε·a = a·ε = a", Verdict::from_failure(unit_fail)));
        let restricts = |a: usize, b: usize| {
            let (x, y) = (&self.list[a], &self.list[b]);
            q.leq(x.u, y.u) && q.elements().all(|w| x.sstar[w] == f.meet(y.sstar[w], x.u))
        };
        let order_fail = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| s.leq(a, b) != restricts(a, b))
            .map(|(a, b)| vec![a, b]);
        checks.push(TheoremCheck::new("natural order is restriction", Verdict::from_failure(order_fail)));
        let idem = s.idempotents();
        let mut doms: Vec<Elem> = idem.iter().map(|&e| self.list[e].u).collect();
        let order_iso = idem.iter().all(|&a| {
            idem.iter().all(|&b| s.leq(a, b) == q.leq(self.list[a].u, self.list[b].u))
        });
        doms.sort_unstable();
        checks.push(TheoremCheck::new(
            "E(ℬ(Q)) ≅ R(Q)",
            Verdict::from_bool(order_iso && doms == q.right_sided()),
        ));
        let mono_fail = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| s.leq(a, b))
            .find_map(|(a, b)| {
                q.elements()
                    .find(|&w| !q.leq(self.action(a, w), self.action(b, w)))
                    .map(|w| vec![a, b, w])
            });
        checks.push(TheoremCheck::new("σ ≤ τ ⇒ σ·a ≤ τ·a", Verdict::from_failure(mono_fail)));
        let ss_fail = (0..n).find(|&i| {
            let b = &self.list[i];
            let k = s.mul(i, s.inv(i));
            let c = &self.list[k];
            c.u != b.u || q.elements().any(|a| c.sstar[a] != f.meet(q.upsilon(a), b.u))
        });
        checks.push(TheoremCheck::new(
            "σσ⁻¹ = (U_σ, u∘k_U)",
            Verdict::from_failure(ss_fail.map(|i| vec![i])),
        ));
        let right_unit = eps.and_then(|e| (0..n).find(|&i| s.mul(i, e) != i));
        checks.push(TheoremCheck::new(
            "σε = σ",
            if eps.is_some() {
                Verdict::from_failure(right_unit.map(|i| vec![i]))
            } else {
                Verdict::Fails(Vec::new())
            },
        ));
        let gelfand = (0..n).find(|&i| s.mul(i, s.mul(s.inv(i), i)) != i);
        checks.push(TheoremCheck::new("σ(σ⁻¹σ) = σ", Verdict::from_failure(gelfand.map(|i| vec![i]))));
        report.consequences = checks;
        report.semigroup = Some(s);
    }

    /// The sufficient-condition theorem and its T1 corollary.
    pub fn sufficient_condition(&self, wm: &WeakMultReport) -> SufficientReport {
        let q = self.q;
        let n = self.len();
        let mut hyp = None;
        'h: for i in 0..n {
            for j in 0..n {
                let (s, t) = (&self.list[i].sstar, &self.list[j].sstar);
                for &a in q.right_sided() {
                    let lhs = s[self.action_right_inv(j, q.star(a))];
                    let rhs = s[q.star(t[q.star(a)])];
                    if !q.leq(lhs, rhs) {
                        hyp = Some(vec![i, j, a]);
                        break 'h;
                    }
                }
            }
        }
        let hypothesis = Verdict::from_failure(hyp);
        let rl = q.rs_lattice();
        let discrete = rl.elements().all(|z| rl.elements().any(|c| rl.meet(z, c) == rl.bot() && rl.join(z, c) == rl.top()));
        let route = hypothesis.holds() && wm.actions_join.holds();
        let mut checks = Vec::new();
        checks.push(TheoremCheck::new(
            "hypothesis ⇒ associative product",
            if route {
                Verdict::from_bool(wm.products_defined.holds() && wm.associative.holds())
            } else {
                Verdict::skipped("hypothesis unmet")
            },
        ));
        let corollary = discrete && wm.upsilon_joins.holds() && wm.actions_join.holds();
        checks.push(
            TheoremCheck::new(
                "T1 R(Q) ⇒ weakly multiplicative",
                if corollary {
                    Verdict::from_bool(wm.weakly_multiplicative && hypothesis.holds())
                } else {
                    Verdict::skipped("R(Q) not discrete or joins not preserved")
                },
            )
            .with_detail("T1 read as discrete R(Q), the finite case"),
        );
        SufficientReport {
            hypothesis,
            r_discrete: discrete,
            route_applies: route && wm.upsilon_joins.holds(),
            checks,
        }
    }

    /// `ξ(σ) = s_!(U)` onto `I(Q)` and its inverse `ζ`, for inverse `Q`.
    pub fn xi(&self) -> Result<XiReport> {
        let q = self.q;
        let f = q.frame();
        if !q.classify().inverse() {
            return Err(Error::Hypothesis("ξ needs an inverse quantal frame".into()));
        }
        let e = q.unit().expect("inverse frames are unital");
        let one = q.one();
        let xi: Vec<Elem> = (0..self.len()).map(|i| self.graph(i)).collect();
        let mut pu = q.partial_units()?;
        let mut img = xi.clone();
        img.sort_unstable();
        pu.sort_unstable();
        let bijective = img == pu && {
            let mut d = img.clone();
            d.dedup();
            d.len() == img.len()
        };
        let n = self.len();
        let mut mult = None;
        for i in 0..n {
            for j in 0..n {
                if let Product::Defined(k) = self.product(i, j) {
                    if xi[k] != q.mul(xi[i], xi[j]) {
                        mult.get_or_insert(vec![i, j]);
                    }
                } else {
                    mult.get_or_insert(vec![i, j]);
                }
            }
        }
        let invol = (0..n).find(|&i| self.inverse(i).map(|k| xi[k]) != Ok(q.star(xi[i])));
        let spp = |a: Elem| f.meet(q.mul(a, one), e);
        let zeta = |a: Elem| -> Option<usize> {
            let u = q.mul(spp(a), one);
            let s: Vec<Elem> = q.elements().map(|x| q.mul(spp(f.meet(x, a)), one)).collect();
            self.find(u, &s)
        };
        let zeta_fail = pu.iter().copied().find(|&a| zeta(a).map(|k| xi[k]) != Some(a));
        let back_fail = (0..n).find(|&i| zeta(xi[i]) != Some(i));
        let eps_ok = self.epsilon().map(|k| xi[k]) == Some(e);
        let checks = vec![
            TheoremCheck::new("ξ is a bijection onto I(Q)", Verdict::from_bool(bijective)),
            TheoremCheck::new("ξ(στ) = ξ(σ)ξ(τ)", Verdict::from_failure(mult)),
            TheoremCheck::new("ξ(σ⁻¹) = ξ(σ)*", Verdict::from_failure(invol.map(|i| vec![i]))),
            TheoremCheck::new("ξ∘ζ = id", Verdict::from_failure(zeta_fail.map(|a| vec![a]))),
            TheoremCheck::new("ζ∘ξ = id", Verdict::from_failure(back_fail.map(|i| vec![i]))),
            TheoremCheck::new("ξ(ε) = e", Verdict::from_bool(eps_ok)),
            TheoremCheck::new("ξ(∅) = ⊥", Verdict::from_bool(xi[self.empty()] == q.bot())),
        ];
        Ok(XiReport { xi, checks })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakMultReport {
    pub upsilon_joins: Verdict,
    /// Witness `[σ, a, b]` or `[σ, ⊥]`.
    pub actions_join: Verdict,
    pub products_defined: Verdict,
    pub associative: Verdict,
    pub weakly_multiplicative: bool,
    /// Product table, `usize::MAX` where undefined.
    pub table: Vec<usize>,
    #[serde(skip)]
    pub semigroup: Option<InverseSemigroup>,
    pub consequences: Vec<TheoremCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SufficientReport {
    /// `s*_σ(a*·τ⁻¹) ≤ s*_σ(s*_τ(a*)*)` for all `σ, τ` and right-sided `a`.
    pub hypothesis: Verdict,
    pub r_discrete: bool,
    pub route_applies: bool,
    pub checks: Vec<TheoremCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub xi: Vec<Elem>,
    pub checks: Vec<TheoremCheck>,
}

/// A continuous local bisection of a finite groupoid: `s` is defined on the
/// open object set `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpatialBisection {
    pub u: Mask,
    pub s: Vec<Option<usize>>,
}

/// Continuous local sections `s` of `d` over opens of `G₀` with `r∘s` an open embedding.
pub fn spatial_bisections(g: &TopGroupoid) -> Vec<SpatialBisection> {
    let g0 = &g.objects;
    let mut out = Vec::new();
    for &u in g0.opens() {
        let pts: Vec<usize> = bits(u).collect();
        let fibers: Vec<Vec<usize>> = pts
            .iter()
            .map(|&p| (0..g.arrow_count()).filter(|&x| g.d[x] == p).collect())
            .collect();
        let mut choice = vec![0usize; pts.len()];
        loop {
            let mut s = vec![None; g0.len()];
            for (k, &p) in pts.iter().enumerate() {
                s[p] = Some(fibers[k][choice[k]]);
            }
            if is_spatial_bisection(g, u, &s) {
                out.push(SpatialBisection { u, s });
            }
            // advance the mixed-radix counter
            let mut k = 0;
            while k < pts.len() {
                choice[k] += 1;
                if choice[k] < fibers[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == pts.len() {
                break;
            }
        }
    }
    out
}

fn is_spatial_bisection(g: &TopGroupoid, u: Mask, s: &[Option<usize>]) -> bool {
    let g0 = &g.objects;
    let g1 = &g.arrows;
    let at = |p: usize| s[p].expect("defined on u");
    let image = |w: Mask| bits(w).fold(0 as Mask, |acc, p| acc | 1 << at(p));
    let rs_image = |w: Mask| bits(w).fold(0 as Mask, |acc, p| acc | 1 << g.r[at(p)]);
    bits(u).all(|p| {
        let w = g0.nbhd(p);
        image(w) & !g1.nbhd(at(p)) == 0 && g0.is_open(rs_image(w))
    }) && rs_image(u).count_ones() == u.count_ones()
}

impl SpatialBisection {
    /// `s*(W) = d⁻¹(s⁻¹(W))` as an open of arrows.
    pub fn sstar_mask(&self, g: &TopGroupoid, w: Mask) -> Mask {
        let pre = bits(self.u)
            .filter(|&p| w >> self.s[p].unwrap() & 1 == 1)
            .fold(0 as Mask, |acc, p| acc | 1 << p);
        FiniteSpace::preimage(&g.d, pre)
    }

    /// `σ·W = {s(x)y : x ∈ U, y ∈ W}` computed pointwise.
    pub fn act(&self, g: &TopGroupoid, w: Mask) -> Mask {
        let sx: Mask = bits(self.u).fold(0, |acc, p| acc | 1 << self.s[p].unwrap());
        g.product(sx, w)
    }

    pub fn product(&self, other: &SpatialBisection, g: &TopGroupoid) -> SpatialBisection {
        let mut s = vec![None; self.s.len()];
        let mut u = 0;
        for p in bits(self.u) {
            let x = self.s[p].unwrap();
            if let Some(y) = other.s[g.r[x]] {
                s[p] = g.m(x, y);
                u |= 1 << p;
            }
        }
        SpatialBisection { u, s }
    }
}

/// Compares the bisections of `O(G)` with the continuous local bisections of `G`.
pub fn spatial_oracle(g: &TopGroupoid, bs: &Bisections) -> Vec<TheoremCheck> {
    let opens = g.arrows.opens();
    let sp = spatial_bisections(g);
    let to_index = |sb: &SpatialBisection| -> Option<usize> {
        let u = g.arrows.open_index(FiniteSpace::preimage(&g.d, sb.u))?;
        let sstar: Option<Vec<Elem>> = opens
            .iter()
            .map(|&w| g.arrows.open_index(sb.sstar_mask(g, w)))
            .collect();
        bs.find(u, &sstar?)
    };
    let idx: Vec<Option<usize>> = sp.iter().map(to_index).collect();
    let mut hit = vec![false; bs.len()];
    for &k in idx.iter().flatten() {
        hit[k] = true;
    }
    let bijective = idx.iter().all(Option::is_some) && hit.iter().all(|&h| h) && sp.len() == bs.len();
    let mut action = None;
    let mut product = None;
    if bijective {
        for (a, sa) in sp.iter().enumerate() {
            let i = idx[a].unwrap();
            for (w_id, &w) in opens.iter().enumerate() {
                let pointwise = sa.act(g, w);
                if g.arrows.open_index(pointwise) != Some(bs.action(i, w_id)) {
                    action.get_or_insert(vec![i, w_id]);
                }
            }
            for (b, sb) in sp.iter().enumerate() {
                let j = idx[b].unwrap();
                let spatial = to_index(&sa.product(sb, g));
                if spatial != bs.product(i, j).index() {
                    product.get_or_insert(vec![i, j]);
                }
            }
        }
    }
    vec![
        TheoremCheck::new("ℬ(O(G)) ↔ continuous local bisections of G", Verdict::from_bool(bijective)),
        TheoremCheck::new(
            "σ·W agrees with the pointwise action",
            if bijective { Verdict::from_failure(action) } else { Verdict::skipped("no bijection") },
        ),
        TheoremCheck::new(
            "products agree with pointwise composition",
            if bijective { Verdict::from_failure(product) } else { Verdict::skipped("no bijection") },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::iso::semigroup_iso;

    #[test]
    fn discrete_pair_groupoid() {
        let g = catalog::pair_discrete(2);
        let q = g.quantale().unwrap();
        let bs = Bisections::enumerate(&q).unwrap();
        assert_eq!(bs.len(), 7);
        assert!(bs.formula_checks().iter().all(|c| c.verdict.holds()));
        let wm = bs.weak_multiplicativity();
        assert!(wm.weakly_multiplicative);
        assert!(wm.consequences.iter().all(|c| c.verdict.holds()), "{:?}", wm.consequences);
        let s = wm.semigroup.as_ref().unwrap();
        assert!(semigroup_iso(s, &catalog::i2()).is_some());
        assert!(bs.xi().unwrap().checks.iter().all(|c| c.verdict.holds()));
        let suff = bs.sufficient_condition(&wm);
        assert!(suff.hypothesis.holds() && suff.r_discrete);
        assert!(spatial_oracle(&g, &bs).iter().all(|c| c.verdict.holds()));
    }

    #[test]
    fn arrow_bisections_invert() {
        let g = catalog::pair_discrete(2);
        let q = g.quantale().unwrap();
        let bs = Bisections::enumerate(&q).unwrap();
        let names = bs.names();
        let at = |s: &str| names.iter().position(|n| n == s).unwrap();
        let (a12, a21) = (at("⟨{12}⟩"), at("⟨{21}⟩"));
        assert_eq!(bs.inverse(a12).unwrap(), a21);
        let prod = bs.product(a12, a21).index().unwrap();
        assert_eq!(names[prod], "⟨{11}⟩");
        let e = bs.epsilon().unwrap();
        assert_eq!(bs.inverse(e).unwrap(), e);
        assert_eq!(bs.inverse(bs.empty()).unwrap(), bs.empty());
    }

    #[test]
    fn sierpinski_pair_groupoid() {
        let g = catalog::sierpinski_pair();
        let q = g.quantale().unwrap();
        let bs = Bisections::enumerate(&q).unwrap();
        let mut names = bs.names();
        names.sort();
        // the diagonal is not open; its least open neighbourhood is all of G₁
        assert_eq!(names, ["⟨{00,01,10,11}⟩", "⟨{11}⟩", "⟨∅⟩"]);
        let wm = bs.weak_multiplicativity();
        assert!(wm.weakly_multiplicative);
        let diag = bs.epsilon().unwrap();
        for a in q.elements() {
            assert_eq!(bs.action(diag, a), a);
            assert_eq!(bs.action(bs.empty(), a), q.bot());
        }
        assert!(!bs.sufficient_condition(&wm).r_discrete);
        assert!(spatial_oracle(&g, &bs).iter().all(|c| c.verdict.holds()));
    }

    #[test]
    fn two_chain() {
        let q = catalog::two_chain_quantale();
        let bs = Bisections::enumerate(&q).unwrap();
        assert_eq!(bs.len(), 2);
    }

    #[test]
    fn not_open_is_rejected() {
        assert!(matches!(Bisections::enumerate(&catalog::q_b()), Err(Error::Hypothesis(_))));
    }
}
