//! Involutive quantal frames and their axioms.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, LatticeMap};
use crate::verdict::{TheoremCheck, Verdict};

/// Cap on candidate maps explored when searching for supports.
pub const SUPPORT_SEARCH_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantale {
    frame: Arc<FiniteLattice>,
    mult: Vec<Elem>,
    inv: Vec<Elem>,
    rs: Vec<Elem>,
    rs_pos: Vec<Option<usize>>,
    rs_lattice: Arc<FiniteLattice>,
    upsilon: Vec<Elem>,
    unit: Option<Elem>,
}

impl Quantale {
    /// Validates full tables: `mult[a * n + b] = a·b`, `inv[a] = a*`.
    pub fn new(frame: Arc<FiniteLattice>, mult: Vec<Elem>, inv: Vec<Elem>) -> Result<Self> {
        frame.require_frame()?;
        let n = frame.len();
        if mult.len() != n * n || inv.len() != n {
            return Err(Error::QuantaleLaw {
                law: "table shape",
                witness: format!("expected {n}x{n} multiplication and {n} involution entries"),
            });
        }
        if mult.iter().chain(&inv).any(|&x| x >= n) {
            return Err(Error::QuantaleLaw {
                law: "table range",
                witness: "entry out of range".into(),
            });
        }
        let f = &frame;
        let nm = |a: Elem| f.name(a).to_string();
        let law = |law: &'static str, w: &[Elem]| Error::QuantaleLaw {
            law,
            witness: w.iter().map(|&a| nm(a)).collect::<Vec<_>>().join(", "),
        };
        let m = |a: Elem, b: Elem| mult[a * n + b];
        for a in 0..n {
            if m(a, f.bot()) != f.bot() || m(f.bot(), a) != f.bot() {
                return Err(law("multiplication preserves bottom", &[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(f.join(a, b), c) != f.join(m(a, c), m(b, c)) {
                        return Err(law("right distributivity", &[a, b, c]));
                    }
                    if m(c, f.join(a, b)) != f.join(m(c, a), m(c, b)) {
                        return Err(law("left distributivity", &[c, a, b]));
                    }
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(law("associativity", &[a, b, c]));
                    }
                }
            }
        }
        for a in 0..n {
            if inv[inv[a]] != a {
                return Err(law("involution is involutive", &[a]));
            }
            for b in 0..n {
                if f.leq(a, b) != f.leq(inv[a], inv[b]) {
                    return Err(law("involution is an order isomorphism", &[a, b]));
                }
                if inv[m(a, b)] != m(inv[b], inv[a]) {
                    return Err(law("(ab)* = b*a*", &[a, b]));
                }
            }
        }
        let top = f.top();
        let rs: Vec<Elem> = (0..n).filter(|&a| f.leq(m(a, top), a)).collect();
        let mut rs_pos = vec![None; n];
        for (i, &z) in rs.iter().enumerate() {
            rs_pos[z] = Some(i);
        }
        let rs_lattice = Arc::new(f.restrict(&rs)?);
        let upsilon = (0..n)
            .map(|a| f.join_all((0..n).filter(|&x| f.leq(m(x, inv[x]), a))))
            .collect();
        let unit = (0..n).find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a));
        Ok(Quantale {
            frame,
            mult,
            inv,
            rs,
            rs_pos,
            rs_lattice,
            upsilon,
            unit,
        })
    }

    /// Completes products given on join-irreducibles by join-distributivity.
    pub fn from_generators(
        frame: Arc<FiniteLattice>,
        gen_mult: impl Fn(Elem, Elem) -> Elem,
        gen_inv: impl Fn(Elem) -> Elem,
    ) -> Result<Self> {
        let n = frame.len();
        let js = frame.join_irreducibles().to_vec();
        let below: Vec<Vec<Elem>> = (0..n)
            .map(|a| js.iter().copied().filter(|&j| frame.leq(j, a)).collect())
            .collect();
        let mut mult = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let prods = below[a]
                    .iter()
                    .flat_map(|&j| below[b].iter().map(move |&k| (j, k)))
                    .map(|(j, k)| gen_mult(j, k));
                mult[a * n + b] = frame.join_all(prods);
            }
        }
        let inv = (0..n)
            .map(|a| frame.join_all(below[a].iter().map(|&j| gen_inv(j))))
            .collect();
        Self::new(frame, mult, inv)
    }

    pub fn frame(&self) -> &Arc<FiniteLattice> {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.frame.elements()
    }

    pub fn name(&self, a: Elem) -> &str {
        self.frame.name(a)
    }

    pub fn names_of(&self, w: &[Elem]) -> String {
        w.iter()
            .map(|&a| self.name(a).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a * self.len() + b]
    }

    #[inline]
    pub fn star(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.frame.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.frame.join(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.frame.meet(a, b)
    }

    pub fn bot(&self) -> Elem {
        self.frame.bot()
    }

    pub fn one(&self) -> Elem {
        self.frame.top()
    }

    pub fn mult_table(&self) -> &[Elem] {
        &self.mult
    }

    pub fn inv_table(&self) -> &[Elem] {
        &self.inv
    }

    pub fn is_right_sided(&self, a: Elem) -> bool {
        self.rs_pos[a].is_some()
    }

    /// `R(Q)`, in increasing id order.
    pub fn right_sided(&self) -> &[Elem] {
        &self.rs
    }

    /// `R(Q)` as a lattice; its ids index into [`Self::right_sided`].
    pub fn rs_lattice(&self) -> &Arc<FiniteLattice> {
        &self.rs_lattice
    }

    pub fn rs_index(&self, z: Elem) -> Option<usize> {
        self.rs_pos[z]
    }

    pub fn upsilon(&self, a: Elem) -> Elem {
        self.upsilon[a]
    }

    pub fn upsilon_table(&self) -> &[Elem] {
        &self.upsilon
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    /// `Q1 = {a1}`.
    pub fn q_one(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.elements().map(|a| self.mul(a, self.one())).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn rs_equals_q_one(&self) -> bool {
        self.q_one() == self.rs
    }

    pub fn lattice_map(&self, f: impl Fn(Elem) -> Elem) -> LatticeMap {
        LatticeMap::from_fn(self.frame.clone(), self.frame.clone(), f)
    }

    /// Representatives `(a, a1)` for each distinct value of `a1`.
    fn a_one_reps(&self) -> Vec<(Elem, Elem)> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for a in self.elements() {
            let z = self.mul(a, self.one());
            if !seen[z] {
                seen[z] = true;
                out.push((a, z));
            }
        }
        out
    }

    /// (B): `b(a1 ∧ c) ≤ (b ∧ 1a*)c`, witness `[a, b, c]`.
    pub fn balanced_failure(&self) -> Option<Vec<Elem>> {
        for (a, z) in self.a_one_reps() {
            let zs = self.star(z);
            for b in self.elements() {
                for c in self.elements() {
                    let lhs = self.mul(b, self.meet(z, c));
                    let rhs = self.mul(self.meet(b, zs), c);
                    if !self.leq(lhs, rhs) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// (O): `(a1 ∧ b)c = a1 ∧ bc`, witness `[a, b, c]`.
    pub fn open_failure(&self) -> Option<Vec<Elem>> {
        for (a, z) in self.a_one_reps() {
            for b in self.elements() {
                for c in self.elements() {
                    if self.mul(self.meet(z, b), c) != self.meet(z, self.mul(b, c)) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// (R): `υ(a) ∈ R(Q)`, witness `[a]`.
    pub fn r_failure(&self) -> Option<Vec<Elem>> {
        self.elements()
            .find(|&a| !self.is_right_sided(self.upsilon(a)))
            .map(|a| vec![a])
    }

    /// `⋁{x : xx*x ≤ a}`.
    pub fn u_join(&self, a: Elem) -> Elem {
        self.frame.join_all(
            self.elements()
                .filter(|&x| self.leq(self.mul(self.mul(x, self.star(x)), x), a)),
        )
    }

    /// (U): `⋁{x : xx*x ≤ a} = a`, witness `[a]`.
    pub fn u_failure(&self) -> Option<Vec<Elem>> {
        self.elements().find(|&a| self.u_join(a) != a).map(|a| vec![a])
    }

    /// `I(Q) = {s : ss* ≤ e, s*s ≤ e}`.
    pub fn partial_units(&self) -> Result<Vec<Elem>> {
        let e = self.unit.ok_or(Error::NotUnital)?;
        Ok(self
            .elements()
            .filter(|&s| {
                self.leq(self.mul(s, self.star(s)), e) && self.leq(self.mul(self.star(s), s), e)
            })
            .collect())
    }

    pub fn partial_units_cover(&self) -> Result<bool> {
        let pu = self.partial_units()?;
        Ok(self.frame.join_all(pu) == self.one())
    }

    /// The candidate support `ς(a) = a1 ∧ e`, checked against all conditions.
    pub fn support_check(&self) -> Result<std::result::Result<Vec<Elem>, SupportFailure>> {
        let e = self.unit.ok_or(Error::NotUnital)?;
        let sp: Vec<Elem> = self
            .elements()
            .map(|a| self.meet(self.mul(a, self.one()), e))
            .collect();
        Ok(self.validate_support(&sp).map(|_| sp))
    }

    fn validate_support(&self, sp: &[Elem]) -> std::result::Result<(), SupportFailure> {
        let e = self.unit.expect("unital");
        let map = self.lattice_map(|a| sp[a]);
        if let Some(w) = map.join_failure() {
            return Err(SupportFailure::new("join preservation", w.describe(&self.frame)));
        }
        for a in self.elements() {
            if !self.leq(sp[a], e) {
                return Err(SupportFailure::at("ς(a) ≤ e", vec![a]));
            }
            if !self.leq(sp[a], self.mul(a, self.star(a))) {
                return Err(SupportFailure::at("ς(a) ≤ aa*", vec![a]));
            }
            if !self.leq(a, self.mul(sp[a], a)) {
                return Err(SupportFailure::at("a ≤ ς(a)a", vec![a]));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                if sp[self.mul(a, b)] != sp[self.mul(a, sp[b])] {
                    return Err(SupportFailure::at("ς(ab) = ς(aς(b))", vec![a, b]));
                }
            }
        }
        Ok(())
    }

    /// Every join-preserving `ς` with `ς(a) ≤ e`, `ς(a) ≤ aa*`, `a ≤ ς(a)a`.
    ///
    /// Such a map is fixed by its monotone values on join-irreducibles, and
    /// the three conditions reduce to conditions on those values.
    pub fn all_supports(&self, cap: usize) -> Result<Vec<Vec<Elem>>> {
        let e = self.unit.ok_or(Error::NotUnital)?;
        let f = &self.frame;
        let js = f.join_irreducibles().to_vec();
        let cands: Vec<Vec<Elem>> = js
            .iter()
            .map(|&j| {
                f.elements()
                    .filter(|&v| {
                        f.leq(v, e)
                            && f.leq(v, self.mul(j, self.star(j)))
                            && f.leq(j, self.mul(v, j))
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut vals = vec![0; js.len()];
        let mut visited = 0usize;
        self.support_rec(0, &js, &cands, &mut vals, &mut out, &mut visited, cap)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn support_rec(
        &self,
        i: usize,
        js: &[Elem],
        cands: &[Vec<Elem>],
        vals: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
        visited: &mut usize,
        cap: usize,
    ) -> Result<()> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::CapExceeded(format!(
                "support search explored more than {cap} partial assignments"
            )));
        }
        let f = &self.frame;
        if i == js.len() {
            let sp: Vec<Elem> = f
                .elements()
                .map(|a| f.join_all((0..js.len()).filter(|&t| f.leq(js[t], a)).map(|t| vals[t])))
                .collect();
            if self.validate_support_core(&sp) {
                out.push(sp);
            }
            return Ok(());
        }
        for &v in &cands[i] {
            let mono = (0..i).all(|t| {
                (!f.leq(js[t], js[i]) || f.leq(vals[t], v)) && (!f.leq(js[i], js[t]) || f.leq(v, vals[t]))
            });
            if mono {
                vals[i] = v;
                self.support_rec(i + 1, js, cands, vals, out, visited, cap)?;
            }
        }
        Ok(())
    }

    fn validate_support_core(&self, sp: &[Elem]) -> bool {
        let e = self.unit.expect("unital");
        self.elements().all(|a| {
            self.leq(sp[a], e)
                && self.leq(sp[a], self.mul(a, self.star(a)))
                && self.leq(a, self.mul(sp[a], a))
        })
    }

    pub fn classify(&self) -> Classification {
        let balanced = Verdict::from_failure(self.balanced_failure());
        let open_axiom = Verdict::from_failure(self.open_failure());
        let r_axiom = Verdict::from_failure(self.r_failure());
        let u_axiom = Verdict::from_failure(self.u_failure());
        let (support, cover) = match self.unit {
            None => (
                Verdict::skipped("not unital"),
                Verdict::skipped("not unital"),
            ),
            Some(_) => {
                let support = match self.support_check().expect("unital") {
                    Ok(_) => Verdict::Holds,
                    Err(fail) => match self.all_supports(SUPPORT_SEARCH_CAP) {
                        Ok(found) if !found.is_empty() => Verdict::Holds,
                        Ok(_) => Verdict::Fails(fail.witness),
                        Err(_) => Verdict::skipped("support search cap exceeded"),
                    },
                };
                let cover = Verdict::from_bool(self.partial_units_cover().expect("unital"));
                (support, cover)
            }
        };
        Classification {
            balanced,
            open_axiom,
            r_axiom,
            u_axiom,
            unit: self.unit,
            support,
            cover,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportFailure {
    pub condition: &'static str,
    pub witness: Vec<Elem>,
    pub detail: Option<String>,
}

impl SupportFailure {
    fn at(condition: &'static str, witness: Vec<Elem>) -> Self {
        SupportFailure {
            condition,
            witness,
            detail: None,
        }
    }

    fn new(condition: &'static str, detail: String) -> Self {
        SupportFailure {
            condition,
            witness: Vec::new(),
            detail: Some(detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub balanced: Verdict,
    pub open_axiom: Verdict,
    pub r_axiom: Verdict,
    pub u_axiom: Verdict,
    pub unit: Option<Elem>,
    pub support: Verdict,
    /// `⋁I(Q) = 1`.
    pub cover: Verdict,
}

impl Classification {
    pub fn semiopen(&self) -> bool {
        self.balanced.holds() && self.r_axiom.holds() && self.u_axiom.holds()
    }

    pub fn open(&self) -> bool {
        self.semiopen() && self.open_axiom.holds()
    }

    pub fn unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn inverse(&self) -> bool {
        self.unital() && self.support.holds() && self.cover.holds()
    }
}

/// Per-instance checks of the lemmas about `υ`, `R(Q)` and the associated
/// graph. Each is run only when its hypotheses hold on `q`.
pub fn lemma_suite(q: &Quantale, cls: &Classification) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    let all = || q.elements();

    let two_forms = all().find(|&a| {
        let v = q.frame().join_all(all().flat_map(|x| {
            all()
                .filter(move |&y| q.leq(q.mul(x, q.star(y)), a))
                .map(move |y| q.meet(x, y))
        }));
        v != q.upsilon(a) || q.upsilon(q.star(a)) != q.upsilon(a)
    });
    out.push(TheoremCheck::new(
        "upsilon: ⋁{x∧y : xy*≤a} = ⋁{x : xx*≤a} = υ(a*)",
        Verdict::from_failure(two_forms.map(|a| vec![a])),
    ));

    let meets = all()
        .flat_map(|a| all().map(move |b| (a, b)))
        .find(|&(a, b)| q.upsilon(q.meet(a, b)) != q.meet(q.upsilon(a), q.upsilon(b)))
        .map(|(a, b)| vec![a, b])
        .or_else(|| (q.upsilon(q.one()) != q.one()).then(|| vec![q.one()]));
    out.push(TheoremCheck::new(
        "upsilon preserves finite meets",
        Verdict::from_failure(meets),
    ));

    let ulemma_rhs = |a: Elem| {
        q.frame().join_all(all().flat_map(|x| {
            all()
                .filter(move |&y| q.leq(q.mul(x, y), a))
                .map(move |y| q.meet(q.upsilon(x), y))
        }))
    };
    let alt_u = all().find(|&a| ulemma_rhs(a) != a);
    let bicond = cls.u_axiom.holds() == alt_u.is_none();
    let mut check = TheoremCheck::new(
        "(U) iff ⋁{υ(x)∧y : xy≤a} = a",
        Verdict::from_failure((!bicond).then(|| alt_u.into_iter().collect())),
    );
    if !bicond {
        check = check.with_detail(format!(
            "(U) {} but the alternative form {}",
            if cls.u_axiom.holds() { "holds" } else { "fails" },
            if alt_u.is_none() { "holds" } else { "fails" }
        ));
    }
    out.push(check);

    let gate = |ok: bool, why: &str, f: &dyn Fn() -> Option<Vec<Elem>>| {
        if ok {
            Verdict::from_failure(f())
        } else {
            Verdict::skipped(why)
        }
    };
    let u = cls.u_axiom.holds();
    let rs = q.right_sided().to_vec();

    out.push(TheoremCheck::new(
        "(U) ⇒ R(Q) = Q1",
        gate(u, "(U) fails", &|| (!q.rs_equals_q_one()).then(Vec::new)),
    ));
    out.push(TheoremCheck::new(
        "(U) ⇒ q ≤ qq*q ≤ q1 and q ≤ qq*q ≤ 1q",
        gate(u, "(U) fails", &|| {
            all()
                .find(|&a| {
                    let t = q.mul(q.mul(a, q.star(a)), a);
                    !(q.leq(a, t) && q.leq(t, q.mul(a, q.one())) && q.leq(t, q.mul(q.one(), a)))
                })
                .map(|a| vec![a])
        }),
    ));
    out.push(TheoremCheck::new(
        "(U) ⇒ z = zz*z on R(Q)",
        gate(u, "(U) fails", &|| {
            rs.iter()
                .copied()
                .find(|&z| q.mul(q.mul(z, q.star(z)), z) != z)
                .map(|z| vec![z])
        }),
    ));
    out.push(TheoremCheck::new(
        "(U) ⇒ υ(z) = z on R(Q)",
        gate(u, "(U) fails", &|| {
            rs.iter().copied().find(|&z| q.upsilon(z) != z).map(|z| vec![z])
        }),
    ));
    out.push(TheoremCheck::new(
        "(U) ⇒ υ(z*) = z on R(Q)",
        gate(u, "(U) fails", &|| {
            rs.iter()
                .copied()
                .find(|&z| q.upsilon(q.star(z)) != z)
                .map(|z| vec![z])
        }),
    ));

    let open = cls.open();
    out.push(TheoremCheck::new(
        "open ⇒ υ(a) ≤ a1 ≤ υ(aa*)",
        gate(open, "not open", &|| {
            all()
                .find(|&a| {
                    let a1 = q.mul(a, q.one());
                    !(q.leq(q.upsilon(a), a1) && q.leq(a1, q.upsilon(q.mul(a, q.star(a)))))
                })
                .map(|a| vec![a])
        }),
    ));
    out.push(TheoremCheck::new(
        "open ⇒ υ(a) ∧ b ≤ ab",
        gate(open, "not open", &|| {
            all()
                .flat_map(|a| all().map(move |b| (a, b)))
                .find(|&(a, b)| !q.leq(q.meet(q.upsilon(a), b), q.mul(a, b)))
                .map(|(a, b)| vec![a, b])
        }),
    ));

    let semiopen = cls.semiopen();
    let (d_star, r_star) = graph_maps(q);
    let d_shriek = d_star.left_adjoint().ok();
    let r_shriek = r_star.left_adjoint().ok();
    out.push(TheoremCheck::new(
        "semiopen ⇒ d_!(a) = a1 and r_!(a) = a*1",
        gate(semiopen, "not semiopen", &|| {
            let (Some(ds), Some(rsh)) = (&d_shriek, &r_shriek) else {
                return Some(Vec::new());
            };
            all()
                .find(|&a| {
                    rs[ds.apply(a)] != q.mul(a, q.one())
                        || rs[rsh.apply(a)] != q.mul(q.star(a), q.one())
                })
                .map(|a| vec![a])
        }),
    ));
    out.push(TheoremCheck::new(
        "open ⇒ d_!(z ∧ a) = z ∧ d_!(a)",
        gate(open, "not open", &|| {
            let ds = d_shriek.as_ref()?;
            rs.iter()
                .flat_map(|&z| all().map(move |a| (z, a)))
                .find(|&(z, a)| rs[ds.apply(q.meet(z, a))] != q.meet(z, rs[ds.apply(a)]))
                .map(|(z, a)| vec![z, a])
        }),
    ));

    let inverse = cls.inverse();
    out.push(TheoremCheck::new(
        "unital ∧ open ⇔ inverse",
        Verdict::from_bool((cls.unital() && open) == inverse),
    ));

    if inverse {
        let verdict = match (q.support_check(), q.all_supports(SUPPORT_SEARCH_CAP)) {
            (Ok(Ok(sp)), Ok(found)) => Verdict::from_bool(found == vec![sp]),
            (_, Err(_)) => Verdict::skipped("support search cap exceeded"),
            _ => Verdict::Fails(Vec::new()),
        };
        out.push(TheoremCheck::new("inverse ⇒ unique stable support a1 ∧ e", verdict));
        out.push(TheoremCheck::new(
            "inverse ⇒ R(Q) ≅ ↓e via ς and b ↦ b1",
            Verdict::from_failure(support_iso_failure(q)),
        ));
    } else {
        out.push(TheoremCheck::new(
            "inverse ⇒ unique stable support a1 ∧ e",
            Verdict::skipped("not inverse"),
        ));
        out.push(TheoremCheck::new(
            "inverse ⇒ R(Q) ≅ ↓e via ς and b ↦ b1",
            Verdict::skipped("not inverse"),
        ));
    }
    out
}

fn support_iso_failure(q: &Quantale) -> Option<Vec<Elem>> {
    let e = q.unit()?;
    let sp = |a: Elem| q.meet(q.mul(a, q.one()), e);
    for &z in q.right_sided() {
        if q.mul(sp(z), q.one()) != z {
            return Some(vec![z]);
        }
    }
    for b in q.elements().filter(|&b| q.leq(b, e)) {
        if sp(q.mul(b, q.one())) != b {
            return Some(vec![b]);
        }
    }
    None
}

/// `d*` (inclusion) and `r*` (`z ↦ z*`) as maps `R(Q) → Q`.
pub fn graph_maps(q: &Quantale) -> (LatticeMap, LatticeMap) {
    let rl = q.rs_lattice().clone();
    let rs = q.right_sided();
    let d = LatticeMap::from_fn(rl.clone(), q.frame().clone(), |i| rs[i]);
    let r = LatticeMap::from_fn(rl, q.frame().clone(), |i| q.star(rs[i]));
    (d, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two quantales on `P({a,b})` with `{a}² = {a}`, `{b}² = {b}`,
    /// `{a}{b} = {b}{a} = X`; `swap` selects the involution exchanging `a`, `b`.
    fn pab(swap: bool) -> Quantale {
        let p = Arc::new(FiniteLattice::powerset(&["a", "b"]));
        Quantale::from_generators(
            p,
            |j, k| if j == k { j } else { 3 },
            |j| if swap { 3 - j } else { j },
        )
        .unwrap()
    }

    fn z2() -> Quantale {
        let p = Arc::new(FiniteLattice::powerset(&["e", "g"]));
        Quantale::from_generators(p, |j, k| if j == k { 1 } else { 2 }, |j| j).unwrap()
    }

    fn two_chain() -> Quantale {
        let c = Arc::new(FiniteLattice::chain(2));
        Quantale::new(c, vec![0, 0, 0, 1], vec![0, 1]).unwrap()
    }

    #[test]
    fn first_independence_example() {
        let q = pab(false);
        assert_eq!(q.upsilon(1), 1);
        let c = q.classify();
        assert!(c.balanced.holds() && c.open_axiom.holds() && c.u_axiom.holds());
        assert!(c.r_axiom.fails());
    }

    #[test]
    fn second_independence_example() {
        let q = pab(true);
        assert_eq!((q.upsilon(1), q.upsilon(2), q.upsilon(3)), (0, 0, 3));
        let c = q.classify();
        assert!(c.balanced.holds() && c.open_axiom.holds() && c.r_axiom.holds());
        assert_eq!(c.u_axiom, Verdict::Fails(vec![1]));
    }

    #[test]
    fn right_adjoint_of_multiplication_by_top() {
        let q = pab(false);
        let f = q.lattice_map(|x| q.mul(x, 3));
        let fs = f.right_adjoint().unwrap();
        assert_eq!(fs.apply(1), 0);
        assert_eq!(fs.apply(3), 3);
    }

    #[test]
    fn upsilon_is_not_join_preserving_on_second_example() {
        let q = pab(true);
        let u = q.lattice_map(|a| q.upsilon(a));
        assert_eq!(u.is_frame_hom(), Err(crate::lattice::MapFailure::Join(1, 2)));
    }

    #[test]
    fn z2_group_quantale() {
        let q = z2();
        assert_eq!(q.unit(), Some(1));
        assert_eq!(q.upsilon(1), 3);
        assert_eq!(q.partial_units().unwrap(), vec![0, 1, 2]);
        assert!(q.partial_units_cover().unwrap());
        let sp = q.support_check().unwrap().unwrap();
        assert_eq!(sp[2], 1);
        let c = q.classify();
        assert!(c.inverse() && c.open());
    }

    #[test]
    fn two_chain_is_inverse() {
        let q = two_chain();
        assert_eq!(q.partial_units().unwrap(), vec![0, 1]);
        assert!(q.classify().inverse());
        let sp = q.support_check().unwrap().unwrap();
        assert_eq!(sp[0], 0);
    }

    #[test]
    fn partial_units_need_unit() {
        assert_eq!(pab(false).partial_units(), Err(Error::NotUnital));
    }

    #[test]
    fn lemma_suite_is_clean_and_gated() {
        for q in [pab(false), pab(true), z2(), two_chain()] {
            let c = q.classify();
            for t in lemma_suite(&q, &c) {
                assert!(!t.is_red_flag(), "{}: {:?}", t.name, t.verdict);
            }
        }
        let q = pab(true);
        let suite = lemma_suite(&q, &q.classify());
        let gamma = suite.iter().find(|t| t.name == "(U) ⇒ υ(z*) = z on R(Q)").unwrap();
        assert!(matches!(gamma.verdict, Verdict::Skipped(_)));
    }

    #[test]
    fn non_distributive_table_rejected() {
        let c = Arc::new(FiniteLattice::chain(3));
        let mult = vec![0, 0, 0, 0, 2, 1, 0, 1, 1];
        let err = Quantale::new(c, mult, vec![0, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::QuantaleLaw { .. }));
    }
}
