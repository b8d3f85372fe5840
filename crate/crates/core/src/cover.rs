//! The embedding `j : Q → L∨(ℬ(Q))`, embeddability, the cover functor, and
//! involutive ideals of inverse quantal frames.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bisections::{Bisections, WeakMultReport};
use crate::error::{Error, Result};
use crate::groupoid::{groupoid_of, TopGroupoid};
use crate::lattice::{Elem, LatticeMap};
use crate::quantale::Quantale;
use crate::semigroup::{lcc_completion, Completion};
use crate::tensor::{multiplicativity, BiIdeal, ReducedMult, TensorMap, TensorSpace};
use crate::verdict::{TheoremCheck, Verdict};

/// `Q̂ = L∨(ℬ(Q))` together with `j`, `σ ↦ σ̂` and `η`.
pub struct Cover<'b, 'q> {
    pub bs: &'b Bisections<'q>,
    pub completion: Completion,
    /// `j(a)` as an element of `Q̂`.
    pub j: Vec<Elem>,
    /// `η(z)` for `z = right_sided()[k]`.
    pub eta: Vec<Elem>,
    /// Inverse of each bisection in `ℬ(Q)`.
    inv: Vec<usize>,
    mult: Vec<usize>,
}

/// How injectivity of `j ⊗ id` was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedReport {
    pub mode: Mode,
    pub verdict: Verdict,
    pub checks: Vec<TheoremCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakEmbedReport {
    /// Witness `[σ, a]`.
    pub verdict: Verdict,
    pub consequences: Vec<TheoremCheck>,
    /// The sufficient-condition route: its two hypotheses and the implication.
    pub lemma_route: Vec<TheoremCheck>,
}

impl<'b, 'q> Cover<'b, 'q> {
    /// Needs a weakly multiplicative `Q`, witnessed by `wm`.
    pub fn build(bs: &'b Bisections<'q>, wm: &WeakMultReport) -> Result<Self> {
        let s = wm
            .semigroup
            .as_ref()
            .filter(|_| wm.weakly_multiplicative)
            .ok_or_else(|| Error::Hypothesis("the cover needs a weakly multiplicative quantale".into()))?;
        if s.len() > 64 {
            return Err(Error::TooLarge(format!("{} bisections", s.len())));
        }
        let completion = lcc_completion(s)?;
        let q = bs.q;
        let mut j = Vec::with_capacity(q.len());
        for a in q.elements() {
            let set = bs
                .list
                .iter()
                .enumerate()
                .filter(|(_, b)| b.sstar[a] == b.u)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            j.push(completion.element_of(set).ok_or_else(|| {
                Error::Inconsistency(format!("j({}) is not a closed down-set", q.name(a)))
            })?);
        }
        let inv: Vec<usize> = (0..s.len()).map(|i| s.inv(i)).collect();
        let mult = s.mult_table().to_vec();
        let mut cover = Cover {
            bs,
            completion,
            j,
            eta: Vec::new(),
            inv,
            mult,
        };
        cover.eta = q
            .right_sided()
            .iter()
            .map(|&z| {
                let i = cover.bisection_on(z).expect("E(ℬ(Q)) ≅ R(Q)");
                cover.eta_via(i)
            })
            .collect();
        Ok(cover)
    }

    pub fn qhat(&self) -> &Quantale {
        &self.completion.quantale
    }

    pub fn hat(&self, i: usize) -> Elem {
        self.completion.principal[i]
    }

    fn mul(&self, i: usize, k: usize) -> usize {
        self.mult[i * self.inv.len() + k]
    }

    fn bisection_on(&self, z: Elem) -> Option<usize> {
        (0..self.bs.len()).find(|&i| self.bs.get(i).u == z)
    }

    /// `σ̂σ̂⁻¹·1`.
    fn eta_via(&self, i: usize) -> Elem {
        let qh = self.qhat();
        qh.mul(qh.mul(self.hat(i), self.hat(self.inv[i])), qh.one())
    }

    pub fn j_map(&self) -> LatticeMap {
        LatticeMap::new(self.bs.q.frame().clone(), self.qhat().frame().clone(), self.j.clone())
    }

    /// `a·τ = (τ⁻¹·a*)*`.
    pub fn right_action(&self, a: Elem, t: usize) -> Elem {
        let q = self.bs.q;
        q.star(self.bs.action(self.inv[t], q.star(a)))
    }

    /// Frame-homomorphism, multiplicativity of `σ ↦ σ̂`, `η`, and module laws.
    pub fn invariants(&self) -> Vec<TheoremCheck> {
        let q = self.bs.q;
        let qh = self.qhat();
        let n = self.bs.len();
        let jm = self.j_map();
        let frame = match jm.is_frame_hom() {
            Ok(()) => Verdict::Holds,
            Err(w) => Verdict::Fails(w.elems()),
        };
        let hat_fail = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.hat(self.mul(a, b)) != qh.mul(self.hat(a), self.hat(b)))
            .map(|(a, b)| vec![a, b]);
        let eta_fail = (0..n)
            .find(|&i| {
                let k = q.rs_index(self.bs.get(i).u).unwrap();
                self.eta_via(i) != self.eta[k]
            })
            .map(|i| vec![i]);
        let rs = q.right_sided();
        let module_fail = rs.iter().enumerate().find_map(|(k, &z)| {
            q.elements()
                .find(|&a| self.j[q.meet(z, a)] != qh.meet(self.eta[k], self.j[a]))
                .map(|a| vec![z, a])
        });
        let mut image: Vec<Elem> = rs.iter().map(|&z| self.j[z]).collect();
        image.sort_unstable();
        image.dedup();
        let rs_hat = qh.right_sided().to_vec();
        let eta_iso = rs.iter().enumerate().all(|(k, &z)| {
            rs.iter()
                .enumerate()
                .all(|(l, &w)| q.leq(z, w) == qh.leq(self.eta[k], self.eta[l]))
        }) && {
            let mut e = self.eta.clone();
            e.sort_unstable();
            e == rs_hat
        };
        vec![
            TheoremCheck::new("j is a frame homomorphism", frame),
            TheoremCheck::new("(στ)^ = σ̂τ̂", Verdict::from_failure(hat_fail)),
            TheoremCheck::new("η(z) = σσ⁻¹1 is independent of σ", Verdict::from_failure(eta_fail)),
            TheoremCheck::new("j(z ∧ a) = η(z) ∧ j(a)", Verdict::from_failure(module_fail)),
            TheoremCheck::new("j(R(Q)) = R(Q̂)", Verdict::from_bool(image == rs_hat)),
            TheoremCheck::new("η is an order isomorphism onto R(Q̂)", Verdict::from_bool(eta_iso)),
        ]
    }

    /// `j` is mono; witness `[a, b]` with `a ≠ b` and `j(a) = j(b)`.
    pub fn enough_bisections(&self) -> Verdict {
        let jm = self.j_map();
        let back = jm.right_adjoint().expect("j preserves joins");
        match jm.src.elements().find(|&a| back.apply(jm.apply(a)) != a) {
            None => Verdict::Holds,
            Some(a) => {
                let b = back.apply(jm.apply(a));
                Verdict::Fails(vec![a.min(b), a.max(b)])
            }
        }
    }

    pub fn weak_embeddability(&self) -> WeakEmbedReport {
        let q = self.bs.q;
        let qh = self.qhat();
        let n = self.bs.len();
        let act = |i: usize, a: Elem| self.bs.action(i, a);
        let fail = (0..n)
            .flat_map(|i| q.elements().map(move |a| (i, a)))
            .find(|&(i, a)| qh.mul(self.hat(i), self.j[a]) != self.j[act(i, a)])
            .map(|(i, a)| vec![i, a]);
        let verdict = Verdict::from_failure(fail);
        let mono = self.enough_bisections().holds();
        let consequences = if verdict.holds() {
            self.consequences(mono)
        } else {
            Vec::new()
        };
        let below = |i: usize, a: Elem| qh.leq(self.hat(i), self.j[a]);
        let h1 = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .find_map(|(s, t)| {
                q.elements()
                    .find(|&a| below(s, a) && !below(self.mul(t, s), act(t, a)))
                    .map(|a| vec![s, t, a])
            });
        let h2 = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .find_map(|(s, t)| {
                q.elements()
                    .find(|&a| act(s, act(t, a)) != act(self.mul(s, t), a))
                    .map(|a| vec![s, t, a])
            });
        let applies = h1.is_none() && h2.is_none();
        let lemma_route = vec![
            TheoremCheck::new("σ̂ ≤ j(a) ⇒ (τσ)^ ≤ j(τ·a)", Verdict::from_failure(h1)),
            TheoremCheck::new("σ·(τ·a) = (στ)·a", Verdict::from_failure(h2)),
            TheoremCheck::new(
                "both hypotheses ⇒ weakly embeddable",
                if applies {
                    Verdict::from_bool(verdict.holds())
                } else {
                    Verdict::skipped("hypotheses unmet")
                },
            ),
        ];
        WeakEmbedReport {
            verdict,
            consequences,
            lemma_route,
        }
    }

    fn consequences(&self, mono: bool) -> Vec<TheoremCheck> {
        let q = self.bs.q;
        let qh = self.qhat();
        let f = q.frame();
        let n = self.bs.len();
        let act = |i: usize, a: Elem| self.bs.action(i, a);
        let pairs = || f.elements().flat_map(|a| f.elements().map(move |b| (a, b)));
        let c1 = pairs()
            .find(|&(a, b)| !qh.leq(qh.mul(self.j[a], self.j[b]), self.j[q.mul(a, b)]))
            .map(|(a, b)| vec![a, b]);
        let c2 = q.elements().find(|&a| self.j[q.star(a)] != qh.star(self.j[a])).map(|a| vec![a]);
        let c3 = (0..n).find_map(|t| {
            q.elements()
                .find(|&a| self.j[self.right_action(a, t)] != qh.mul(self.j[a], self.hat(t)))
                .map(|a| vec![t, a])
        });
        let below = |i: usize, a: Elem| qh.leq(self.hat(i), self.j[a]);
        let c4 = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .find_map(|(s, t)| {
                q.elements()
                    .find(|&a| {
                        below(s, a)
                            && (!below(self.mul(s, t), self.right_action(a, t))
                                || !below(self.mul(t, s), act(t, a)))
                    })
                    .map(|a| vec![s, t, a])
            });
        let gated = |w: Option<Vec<Elem>>| {
            if mono {
                Verdict::from_failure(w)
            } else {
                Verdict::skipped("j is not mono")
            }
        };
        let c5 = (0..n).find_map(|s| {
            pairs()
                .find(|&(a, b)| below(s, a) && !q.leq(act(s, b), q.mul(a, b)))
                .map(|(a, b)| vec![s, a, b])
        });
        let mut jr: Vec<Elem> = q.right_sided().iter().map(|&z| self.j[z]).collect();
        jr.sort_unstable();
        jr.dedup();
        let mut e1: Vec<Elem> = (0..n)
            .filter(|&i| self.mul(i, i) == i)
            .map(|i| qh.mul(self.hat(i), qh.one()))
            .collect();
        e1.sort_unstable();
        e1.dedup();
        let c6 = jr == qh.right_sided() && e1 == jr;
        let triples = || (0..n).flat_map(|s| (0..n).map(move |t| (s, t)));
        let c7 = triples().find_map(|(s, t)| {
            q.elements()
                .find(|&a| act(s, act(t, a)) != act(self.mul(s, t), a))
                .map(|a| vec![s, t, a])
        });
        let c8 = triples().find_map(|(s, t)| {
            q.elements()
                .find(|&a| act(s, self.right_action(a, t)) != self.right_action(act(s, a), t))
                .map(|a| vec![s, t, a])
        });
        vec![
            TheoremCheck::new("j(a)j(b) ≤ j(ab)", Verdict::from_failure(c1)),
            TheoremCheck::new("j(a*) = j(a)*", Verdict::from_failure(c2)),
            TheoremCheck::new("j(a·τ) = j(a)τ̂", Verdict::from_failure(c3)),
            TheoremCheck::new("σ̂ ≤ j(a) ⇒ (στ)^ ≤ j(a·τ), (τσ)^ ≤ j(τ·a)", Verdict::from_failure(c4)),
            TheoremCheck::new("j mono, σ̂ ≤ j(a) ⇒ σ·b ≤ ab", gated(c5)),
            TheoremCheck::new("j(R(Q)) = R(Q̂) = j(E(ℬ(Q))·1)", Verdict::from_bool(c6)),
            TheoremCheck::new("j mono ⇒ σ·(τ·a) = (στ)·a", gated(c7)),
            TheoremCheck::new("j mono ⇒ σ·(a·τ) = (σ·a)·τ", gated(c8)),
        ]
    }

    /// Injectivity of `j ⊗ id : Q ⊗_R Q → Q̂ ⊗_R Q`. Exhaustive when the source
    /// has at most `cap` bi-ideals, otherwise sampled with `seed`.
    pub fn embeddability(&self, weak: &WeakEmbedReport, cap: usize, seed: u64) -> Result<EmbedReport> {
        if !weak.verdict.holds() {
            return Ok(EmbedReport {
                mode: Mode::Exhaustive,
                verdict: Verdict::skipped("not weakly embeddable"),
                checks: Vec::new(),
            });
        }
        let q = self.bs.q;
        let qh = self.qhat();
        let src = TensorSpace::over_rs(q);
        let (la, ra): (Vec<Vec<Elem>>, Vec<Vec<Elem>>) = q
            .right_sided()
            .iter()
            .map(|&z| {
                let jz = self.j[q.star(z)];
                (
                    qh.elements().map(|b| qh.meet(b, jz)).collect(),
                    q.elements().map(|y| q.meet(y, z)).collect(),
                )
            })
            .unzip();
        let dst = TensorSpace::new(qh.frame().clone(), q.frame().clone(), la, ra)?;
        let map = TensorMap::new(&src, &dst, self.j.clone())?;
        let (mode, failure) = match src.enumerate(cap) {
            Ok(all) => (Mode::Exhaustive, map.mono_failure(&all)),
            Err(Error::CapExceeded(_)) => (Mode::Sampled, map.mono_failure(&sample(q, &src, seed))),
            Err(e) => return Err(e),
        };
        let verdict = match failure {
            None => Verdict::Holds,
            Some(i) => Verdict::Fails(src.pairs(&i).flat_map(|(x, y)| [x, y]).take(2).collect()),
        };
        let mut checks = Vec::new();
        if verdict.holds() && mode == Mode::Exhaustive {
            let m = multiplicativity(q);
            checks.push(TheoremCheck::new(
                "embeddable ⇒ multiplicative",
                if m.holds() { Verdict::Holds } else { Verdict::Fails(m.witness().unwrap_or(&[]).to_vec()) },
            ));
            checks.push(TheoremCheck::new("embeddable ⇒ enough bisections", self.enough_bisections()));
        }
        Ok(EmbedReport {
            mode,
            verdict,
            checks,
        })
    }

    /// `J : Ĝ → G(Q)` with `J₁* = j`; needs enough bisections and weak embeddability.
    pub fn functor(&self) -> Result<FunctorReport> {
        let q = self.bs.q;
        let qh = self.qhat();
        let g = groupoid_of(q)?;
        let gh = groupoid_of(qh)?;
        let f = q.frame();
        let js = f.join_irreducibles().to_vec();
        let rs = q.right_sided();
        let ks: Vec<Elem> = q.rs_lattice().join_irreducibles().iter().map(|&k| rs[k]).collect();
        let jh = qh.frame().join_irreducibles().to_vec();
        let rsh = qh.right_sided();
        let kh: Vec<Elem> = qh.rs_lattice().join_irreducibles().iter().map(|&k| rsh[k]).collect();
        let point = |p: Elem, cands: &[Elem], among: &[Elem]| -> Result<usize> {
            let filter = |a: Elem| qh.leq(p, self.j[a]);
            let least = f.meet_all(cands.iter().copied().filter(|&a| filter(a)));
            let principal = cands.iter().all(|&a| filter(a) == f.leq(least, a));
            match among.iter().position(|&x| x == least) {
                Some(t) if principal => Ok(t),
                _ => Err(Error::Inconsistency(format!("J at {} is not a point", qh.name(p)))),
            }
        };
        let all: Vec<Elem> = q.elements().collect();
        let j1: Vec<usize> = jh.iter().map(|&p| point(p, &all, &js)).collect::<Result<_>>()?;
        let j0: Vec<usize> = kh.iter().map(|&p| point(p, rs, &ks)).collect::<Result<_>>()?;
        let arrows_h = gh.arrow_count();
        let d_fail = (0..arrows_h).find(|&x| g.d[j1[x]] != j0[gh.d[x]] || g.r[j1[x]] != j0[gh.r[x]]);
        let i_fail = (0..arrows_h).find(|&x| g.i[j1[x]] != j1[gh.i[x]]);
        let u_fail = (0..gh.object_count()).find(|&p| g.u[j0[p]] != j1[gh.u[p]]);
        let m_fail = gh
            .composable()
            .into_iter()
            .find(|&(x, y)| g.m(j1[x], j1[y]) != gh.m(x, y).map(|z| j1[z]));
        let mut hit = vec![false; g.arrow_count()];
        for &a in &j1 {
            hit[a] = true;
        }
        let epi = hit.iter().all(|&h| h);
        let j0_bij = {
            let mut s = j0.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == j0.len() && j0.len() == g.object_count()
        };
        let iso = epi && j1.len() == g.arrow_count() && self.j_map().is_bijective();
        let etale = g.classify().etale.holds();
        let tensor = self.tensor_functoriality()?;
        let named = |w: Option<usize>| Verdict::from_failure(w.map(|x| vec![x]));
        let checks = vec![
            TheoremCheck::new("J₀ is a bijection", Verdict::from_bool(j0_bij)),
            TheoremCheck::new("d∘J₁ = J₀∘d̂, r∘J₁ = J₀∘r̂", named(d_fail)),
            TheoremCheck::new("i∘J₁ = J₁∘î", named(i_fail)),
            TheoremCheck::new("u∘J₀ = J₁∘û", named(u_fail)),
            TheoremCheck::new("J₁(m̂(x, y)) = m(J₁x, J₁y)", Verdict::from_failure(m_fail.map(|(x, y)| vec![x, y]))),
            TheoremCheck::new("m̂*∘j = (j⊗j)∘m*", tensor),
            TheoremCheck::new("J is an epimorphism", Verdict::from_bool(epi)),
            TheoremCheck::new("J is an isomorphism ⇔ G is étale", Verdict::from_bool(iso == etale)),
        ];
        Ok(FunctorReport {
            cover_arrows: arrows_h,
            base_arrows: g.arrow_count(),
            j1,
            j0,
            epi,
            iso,
            etale,
            checks,
        })
    }

    fn tensor_functoriality(&self) -> Result<Verdict> {
        let q = self.bs.q;
        let qh = self.qhat();
        let rm = ReducedMult::new(q)?;
        let rmh = ReducedMult::new(qh)?;
        for a in q.elements() {
            let m = rm.mu0_star(a)?;
            let image = rmh
                .space
                .closure(rm.space.pairs(&m).map(|(x, y)| (self.j[x], self.j[y])).collect::<Vec<_>>());
            if image != rmh.mu0_star(self.j[a])? {
                return Ok(Verdict::Fails(vec![a]));
            }
        }
        Ok(Verdict::Holds)
    }
}

/// Seeded sample of bi-ideals: pure tensors, `μ₀⁎` images, random joins.
fn sample(q: &Quantale, space: &TensorSpace, seed: u64) -> Vec<BiIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = q.frame();
    let mut out: Vec<BiIdeal> = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            out.push(space.pure(a, b));
        }
    }
    if let Ok(rm) = ReducedMult::new(q) {
        out.extend(q.elements().filter_map(|a| rm.mu0_star(a).ok()));
    }
    let base = out.clone();
    for _ in 0..256 {
        let k = rng.gen_range(2..=4);
        let parts: Vec<&BiIdeal> = base.choose_multiple(&mut rng, k).collect();
        let mut acc = space.bottom();
        for p in parts {
            if let Ok(next) = space.join(&acc, p) {
                acc = next;
            }
        }
        out.push(acc);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorReport {
    pub cover_arrows: usize,
    pub base_arrows: usize,
    /// Arrow map `Ĝ₁ → G₁` on point indices.
    pub j1: Vec<usize>,
    pub j0: Vec<usize>,
    pub epi: bool,
    pub iso: bool,
    pub etale: bool,
    pub checks: Vec<TheoremCheck>,
}

/// Everything the cover machinery says about one open quantal frame.
#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub qhat_len: usize,
    pub bisections: usize,
    pub invariants: Vec<TheoremCheck>,
    pub enough_bisections: Verdict,
    pub weak: WeakEmbedReport,
    pub embed: EmbedReport,
    /// `Skipped` unless weakly embeddable with enough bisections.
    pub functor: Option<FunctorReport>,
    pub functor_gate: Verdict,
    /// Finite spatial `Q` with enough bisections is embeddable.
    pub coverable: TheoremCheck,
}

impl CoverReport {
    pub fn all_checks(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.invariants
            .iter()
            .chain(&self.weak.consequences)
            .chain(&self.weak.lemma_route)
            .chain(&self.embed.checks)
            .chain(self.functor.iter().flat_map(|f| f.checks.iter()))
            .chain(std::iter::once(&self.coverable))
    }
}

pub fn cover_report(bs: &Bisections, wm: &WeakMultReport, cap: usize, seed: u64) -> Result<CoverReport> {
    let c = Cover::build(bs, wm)?;
    let q = bs.q;
    let enough = c.enough_bisections();
    let weak = c.weak_embeddability();
    let embed = c.embeddability(&weak, cap, seed)?;
    let gate = if !weak.verdict.holds() {
        Verdict::skipped("not weakly embeddable")
    } else if !enough.holds() {
        Verdict::skipped("not enough bisections")
    } else if !multiplicativity(q).holds() {
        Verdict::skipped("G(Q) needs a multiplicative quantale")
    } else {
        Verdict::Holds
    };
    let functor = if gate.holds() { Some(c.functor()?) } else { None };
    let spatial = crate::groupoid::points(q.frame()).is_ok() && multiplicativity(q).holds();
    let coverable = TheoremCheck::new(
        "spatial with enough bisections ⇒ embeddable",
        if spatial && enough.holds() && embed.mode == Mode::Exhaustive {
            Verdict::from_bool(embed.verdict.holds())
        } else {
            Verdict::skipped("not spatial with enough bisections, or sampled")
        },
    );
    Ok(CoverReport {
        qhat_len: c.qhat().len(),
        bisections: bs.len(),
        invariants: c.invariants(),
        enough_bisections: enough,
        weak,
        embed,
        functor,
        functor_gate: gate,
        coverable,
    })
}

/// Involutive-ideal conditions and the ideal theorems for one subset.
#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    /// Elements of `I`, ascending.
    pub members: Vec<Elem>,
    pub ideal: Verdict,
    pub involutive: Verdict,
    /// `ι ⊗ id` mono, with the mode used.
    pub mono: Verdict,
    pub mode: Mode,
    pub u_condition: Verdict,
    pub open: bool,
    pub multiplicative: bool,
    pub checks: Vec<TheoremCheck>,
}

/// `I` as a standalone quantale; its top is `⋁I`.
pub fn ideal_quantale(q: &Quantale, members: &[Elem]) -> Result<Quantale> {
    let f = q.frame();
    let pos = |a: Elem| members.binary_search(&a).map_err(|_| Error::Hypothesis(format!("{} ∉ I", q.name(a))));
    let frame = Arc::new(f.restrict(members)?);
    let k = members.len();
    let mut mult = Vec::with_capacity(k * k);
    for &a in members {
        for &b in members {
            mult.push(pos(q.mul(a, b))?);
        }
    }
    let inv = members.iter().map(|&a| pos(q.star(a))).collect::<Result<_>>()?;
    Quantale::new(frame, mult, inv)
}

pub fn ideal_check(q: &Quantale, members: &[Elem], cap: usize, seed: u64) -> Result<IdealReport> {
    if !q.classify().inverse() {
        return Err(Error::Hypothesis("ideal check needs an inverse quantal frame".into()));
    }
    let f = q.frame();
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    let inside = |a: Elem| members.binary_search(&a).is_ok();
    if !inside(q.bot()) {
        return Err(Error::Hypothesis("I is not a subframe: ⊥ ∉ I".into()));
    }
    for &a in &members {
        for &b in &members {
            if !inside(f.join(a, b)) || !inside(f.meet(a, b)) {
                return Err(Error::Hypothesis(format!(
                    "I is not a subframe at ({}, {})",
                    q.name(a),
                    q.name(b)
                )));
            }
        }
    }
    let ideal = Verdict::from_failure(
        q.elements()
            .flat_map(|a| members.iter().map(move |&x| (a, x)))
            .find(|&(a, x)| !inside(q.mul(a, x)))
            .map(|(a, x)| vec![a, x]),
    );
    let involutive =
        Verdict::from_failure(members.iter().find(|&&x| !inside(q.star(x))).map(|&x| vec![x]));
    if !ideal.holds() || !involutive.holds() {
        return Ok(IdealReport {
            members,
            ideal,
            involutive,
            mono: Verdict::skipped("not an involutive ideal"),
            mode: Mode::Exhaustive,
            u_condition: Verdict::skipped("not an involutive ideal"),
            open: false,
            multiplicative: false,
            checks: Vec::new(),
        });
    }
    let u_condition = Verdict::from_failure(
        members
            .iter()
            .find(|&&x| {
                let j = f.join_all(members.iter().copied().filter(|&y| q.leq(q.mul(q.mul(y, q.star(y)), y), x)));
                !q.leq(x, j)
            })
            .map(|&x| vec![x]),
    );
    let iq = ideal_quantale(q, &members)?;
    let (la, ra): (Vec<Vec<Elem>>, Vec<Vec<Elem>>) = q
        .right_sided()
        .iter()
        .map(|&z| {
            let zs = q.star(z);
            (
                members
                    .iter()
                    .map(|&x| members.binary_search(&f.meet(x, zs)).expect("I is an involutive ideal"))
                    .collect(),
                q.elements().map(|y| f.meet(y, z)).collect(),
            )
        })
        .unzip();
    let src = TensorSpace::new(iq.frame().clone(), f.clone(), la, ra)?;
    let dst = TensorSpace::over_rs(q);
    let map = TensorMap::new(&src, &dst, members.clone())?;
    let (mode, failure) = match src.enumerate(cap) {
        Ok(all) => (Mode::Exhaustive, map.mono_failure(&all)),
        Err(Error::CapExceeded(_)) => (Mode::Sampled, map.mono_failure(&sample_left(&src, seed))),
        Err(e) => return Err(e),
    };
    let mono = Verdict::from_bool(failure.is_none());
    let cls = iq.classify();
    let open = cls.open();
    let multiplicative = multiplicativity(&iq).holds();
    let both = mono.holds() && u_condition.holds();
    let checks = vec![
        TheoremCheck::new(
            "ι⊗id mono ∧ U-condition ⇔ I multiplicative open",
            if mode == Mode::Exhaustive {
                Verdict::from_bool(both == (open && multiplicative))
            } else {
                Verdict::skipped("sampled mono check")
            },
        ),
        TheoremCheck::new(
            "I open ∧ ι⊗id mono ⇒ I multiplicative",
            if open && mono.holds() && mode == Mode::Exhaustive {
                Verdict::from_bool(multiplicative)
            } else {
                Verdict::skipped("hypotheses unmet")
            },
        ),
    ];
    Ok(IdealReport {
        members,
        ideal,
        involutive,
        mono,
        mode,
        u_condition,
        open,
        multiplicative,
        checks,
    })
}

fn sample_left(space: &TensorSpace, seed: u64) -> Vec<BiIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l, r) = (space.left(), space.right());
    let pures: Vec<BiIdeal> = l
        .elements()
        .flat_map(|a| r.elements().map(move |b| (a, b)))
        .map(|(a, b)| space.pure(a, b))
        .collect();
    let mut out = pures.clone();
    for _ in 0..256 {
        let k = rng.gen_range(2..=4);
        let mut acc = space.bottom();
        for p in pures.choose_multiple(&mut rng, k) {
            if let Ok(next) = space.join(&acc, p) {
                acc = next;
            }
        }
        out.push(acc);
    }
    out
}

/// The cover of a groupoid and, when it is defined, the functor `J`.
pub fn groupoid_cover(g: &TopGroupoid, cap: usize, seed: u64) -> Result<CoverReport> {
    let q = g.quantale()?;
    let bs = Bisections::enumerate(&q)?;
    let wm = bs.weak_multiplicativity();
    cover_report(&bs, &wm, cap, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tensor::DEFAULT_CAP;

    fn report(g: &TopGroupoid) -> CoverReport {
        let r = groupoid_cover(g, DEFAULT_CAP, 7).unwrap();
        for c in r.all_checks() {
            assert!(!c.is_red_flag(), "{}: {:?}", c.name, c.verdict);
        }
        r
    }

    #[test]
    fn discrete_pair_cover_is_an_isomorphism() {
        let g = catalog::pair_discrete(2);
        let q = g.quantale().unwrap();
        let bs = Bisections::enumerate(&q).unwrap();
        let wm = bs.weak_multiplicativity();
        let c = Cover::build(&bs, &wm).unwrap();
        assert!(c.j_map().is_bijective());
        assert_eq!(c.j[q.bot()], c.qhat().bot());
        assert_eq!(c.j[q.one()], c.qhat().one());
        let r = report(&g);
        assert!(r.enough_bisections.holds() && r.weak.verdict.holds());
        assert_eq!((r.embed.mode, r.embed.verdict.clone()), (Mode::Exhaustive, Verdict::Holds));
        let f = r.functor.unwrap();
        assert!(f.iso && f.etale);
    }

    #[test]
    fn sierpinski_pair_lacks_bisections() {
        let g = catalog::sierpinski_pair();
        let q = g.quantale().unwrap();
        let bs = Bisections::enumerate(&q).unwrap();
        let wm = bs.weak_multiplicativity();
        let cover = Cover::build(&bs, &wm).unwrap();
        let a = q.frame().index_of("{11}").unwrap();
        let c = q.frame().index_of("{10,11}").unwrap();
        assert_eq!(cover.j[a], cover.j[c]);
        let r = report(&g);
        assert_eq!(r.qhat_len, 3);
        // the adjoint witness pairs {11} with the largest open of the same image
        let w = q.frame().index_of("{01,10,11}").unwrap();
        assert_eq!(r.enough_bisections, Verdict::Fails(vec![a, w]));
        assert!(r.functor.is_none());
        assert!(!r.embed.verdict.holds());
    }

    #[test]
    fn mixed_bundle_cover_is_epi_not_iso() {
        let r = report(&catalog::mixed_bundle());
        assert_eq!(r.bisections, 7);
        assert!(r.enough_bisections.holds());
        assert!(r.embed.verdict.holds());
        let f = r.functor.unwrap();
        assert_eq!((f.cover_arrows, f.base_arrows), (6, 4));
        assert!(f.epi && !f.iso && !f.etale);
    }

    #[test]
    fn z2_has_enough_bisections() {
        let q = catalog::z2_quantale();
        let bs = Bisections::enumerate(&q).unwrap();
        let wm = bs.weak_multiplicativity();
        let r = cover_report(&bs, &wm, DEFAULT_CAP, 0).unwrap();
        assert!(r.enough_bisections.holds());
    }

    #[test]
    fn ideal_of_pair_plus_point() {
        let g = catalog::equivalence_groupoid(&[0, 0, 1]);
        let q = g.quantale().unwrap();
        let sub = q.frame().index_of("{11,12,21,22}").unwrap();
        let members = q.frame().down_set(sub);
        let r = ideal_check(&q, &members, DEFAULT_CAP, 0).unwrap();
        assert!(r.ideal.holds() && r.involutive.holds());
        assert!(r.mono.holds() && r.u_condition.holds());
        assert!(r.open && r.multiplicative);
        assert!(r.checks.iter().all(|c| !c.is_red_flag()));
        let whole: Vec<Elem> = q.elements().collect();
        let r = ideal_check(&q, &whole, DEFAULT_CAP, 0).unwrap();
        assert!(r.open && r.multiplicative && r.mono.holds());
        let r = ideal_check(&q, &[q.bot()], DEFAULT_CAP, 0).unwrap();
        assert!(r.ideal.holds());
    }

    #[test]
    fn non_subframe_is_rejected() {
        let q = catalog::z2_quantale();
        assert!(ideal_check(&q, &[1], DEFAULT_CAP, 0).is_err());
    }
}
