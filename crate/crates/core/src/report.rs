//! Check reports: every applicable checker run on one structure file.
//!
//! A report line is either a *property* (classification, failing is an
//! expected negative) or a *theorem* (failing is a red flag).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bisections::{Bisections, WeakMultReport};
use crate::cover::{cover_report, Mode};
use crate::error::Result;
use crate::format::{Structure, StructureFile};
use crate::germ::germ_report;
use crate::groupoid::{groupoid_iso, groupoid_of, TopGroupoid};
use crate::iso::{quantale_iso, semigroup_iso};
use crate::lattice::FiniteLattice;
use crate::quantale::{lemma_suite, Quantale};
use crate::semigroup::{lcc_completion, partial_units_semigroup, InverseSemigroup};
use crate::tensor::{multiplicativity, ReducedMult, DEFAULT_CAP};
use crate::verdict::{TheoremCheck, Verdict};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct Options {
    pub cap: usize,
    pub seed: u64,
    pub roundtrip: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            seed: DEFAULT_SEED,
            roundtrip: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Property,
    Theorem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub name: String,
    pub kind: LineKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Line {
    pub fn red_flag(&self) -> bool {
        self.kind == LineKind::Theorem && self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub title: String,
    pub facts: Vec<(String, String)>,
    pub lines: Vec<Line>,
}

impl Section {
    fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            facts: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn fact(&mut self, key: &str, value: impl ToString) {
        self.facts.push((key.into(), value.to_string()));
    }

    fn push(&mut self, kind: LineKind, name: &str, v: &Verdict, witness: impl Fn(&[usize]) -> String) {
        let (status, w, detail) = match v {
            Verdict::Holds => (Status::Pass, None, None),
            Verdict::Fails(w) => (Status::Fail, (!w.is_empty()).then(|| witness(w)), None),
            Verdict::Skipped(why) => (Status::Skip, None, Some(why.clone())),
        };
        self.lines.push(Line {
            name: name.into(),
            kind,
            status,
            witness: w,
            detail,
        });
    }

    fn property(&mut self, name: &str, v: &Verdict, witness: impl Fn(&[usize]) -> String) {
        self.push(LineKind::Property, name, v, witness);
    }

    fn theorem(&mut self, c: &TheoremCheck, witness: impl Fn(&[usize]) -> String) {
        self.push(LineKind::Theorem, &c.name, &c.verdict, witness);
        if let (Some(d), Some(line)) = (&c.detail, self.lines.last_mut()) {
            line.detail.get_or_insert_with(|| d.clone());
        }
    }

    fn theorems<'a>(&mut self, cs: impl IntoIterator<Item = &'a TheoremCheck>, witness: impl Fn(&[usize]) -> String) {
        for c in cs {
            self.theorem(c, &witness);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub path: String,
    pub title: Option<String>,
    pub kind: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn lines(&self) -> impl Iterator<Item = &Line> {
        self.sections.iter().flat_map(|s| s.lines.iter())
    }

    pub fn red_flags(&self) -> usize {
        self.lines().filter(|l| l.red_flag()).count()
    }

    pub fn negative(&self) -> bool {
        self.lines()
            .any(|l| l.kind == LineKind::Property && l.status == Status::Fail)
    }

    /// 0 clean, 1 classification-negative, 2 red flag.
    pub fn exit_code(&self) -> i32 {
        if self.red_flags() > 0 {
            2
        } else if self.negative() {
            1
        } else {
            0
        }
    }

    pub fn find(&self, name: &str) -> Option<&Line> {
        self.lines().find(|l| l.name == name)
    }

    pub fn fact(&self, key: &str) -> Option<&str> {
        self.sections
            .iter()
            .flat_map(|s| s.facts.iter())
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, witnesses: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} ({})", self.title.as_deref().unwrap_or(&self.path), self.kind);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.title);
            for (k, v) in &s.facts {
                let _ = writeln!(out, "  {k}: {v}");
            }
            for l in &s.lines {
                let mark = match (l.status, l.kind) {
                    (Status::Pass, _) => "✓",
                    (Status::Skip, _) => "-",
                    (Status::Fail, LineKind::Property) => "✗",
                    (Status::Fail, LineKind::Theorem) => "‼",
                };
                let _ = write!(out, "  {mark} {}", l.name);
                if witnesses {
                    if let Some(w) = &l.witness {
                        let _ = write!(out, "  at {w}");
                    }
                }
                if let Some(d) = &l.detail {
                    if l.status != Status::Pass && (witnesses || l.status == Status::Skip) {
                        let _ = write!(out, "  ({d})");
                    }
                }
                out.push('\n');
            }
        }
        let _ = writeln!(
            out,
            "\nred flags: {}; classification {}",
            self.red_flags(),
            if self.negative() { "negative" } else { "positive" }
        );
        out
    }
}

fn names_in(q: &Quantale) -> impl Fn(&[usize]) -> String + '_ {
    move |w| format!("({})", w.iter().map(|&a| q.name(a)).collect::<Vec<_>>().join(", "))
}

fn ids(w: &[usize]) -> String {
    format!("{w:?}")
}

/// Runs every applicable checker on a loaded file.
pub fn check(file: &StructureFile, opts: &Options) -> Result<Report> {
    let mut sections = match &file.structure {
        Structure::Frame(l) => vec![frame_section(l)],
        Structure::Quantale(q) => quantale_sections(q, opts)?,
        Structure::InverseSemigroup(s) => semigroup_sections(s)?,
        Structure::Groupoid(g) => groupoid_sections(g, opts)?,
        Structure::Action(a) => {
            let (g, r) = germ_report(a)?;
            let mut s = Section::new("action");
            s.fact("germ arrows", r.arrows);
            s.property("natural", &Verdict::from_bool(r.natural), ids);
            s.theorems(&r.checks, ids);
            s.theorem(
                &TheoremCheck::new("germ groupoid is étale", g.classify().etale),
                |w| g.arrows.name(w[0]).to_string(),
            );
            let mut out = vec![s];
            out.extend(groupoid_sections(&g, opts)?);
            out
        }
    };
    if opts.roundtrip {
        sections.push(roundtrip_section(file)?);
    }
    if !file.expect.is_empty() {
        sections.push(expectations(&sections, &file.expect));
    }
    Ok(Report {
        path: file.path.clone(),
        title: file.title.clone(),
        kind: file.structure.kind().into(),
        sections,
    })
}

/// Property names as they appear in reports, keyed by expectation name.
fn expectation_line(key: &str) -> &'static str {
    match key {
        "balanced" => "(B)",
        "open_axiom" => "(O)",
        "r_axiom" => "(R)",
        "u_axiom" => "(U)",
        "semiopen" => "semiopen",
        "open" => "open",
        "unital" => "unital",
        "inverse" => "inverse",
        "multiplicative" => "multiplicative",
        "weakly_multiplicative" => "weakly multiplicative",
        "enough_bisections" => "enough bisections",
        "embeddable" => "embeddable",
        "etale" => "étale",
        "acp" => "abstract complete pseudogroup",
        "natural" => "natural",
        _ => "",
    }
}

fn expectations(sections: &[Section], expect: &BTreeMap<String, bool>) -> Section {
    let mut s = Section::new("expectations");
    for (key, &want) in expect {
        let target = expectation_line(key);
        let found = sections
            .iter()
            .flat_map(|s| s.lines.iter())
            .find(|l| l.kind == LineKind::Property && l.name == target);
        let v = match found.map(|l| l.status) {
            Some(Status::Pass) => Verdict::from_bool(want),
            Some(Status::Fail) => Verdict::from_bool(!want),
            Some(Status::Skip) | None => Verdict::skipped(format!("`{target}` was not decided")),
        };
        s.theorem(&TheoremCheck::new(format!("expect {key} = {want}"), v), ids);
    }
    s
}

fn frame_section(l: &FiniteLattice) -> Section {
    let mut s = Section::new("frame");
    s.fact("elements", l.len());
    s.fact(
        "join-irreducibles",
        l.join_irreducibles().iter().map(|&a| l.name(a)).collect::<Vec<_>>().join(", "),
    );
    if let Ok((pts, _)) = crate::groupoid::points(l) {
        s.fact("points", pts.len());
    }
    s
}

pub fn quantale_sections(q: &Quantale, opts: &Options) -> Result<Vec<Section>> {
    let nm = names_in(q);
    let cls = q.classify();
    let mut ax = Section::new("axioms");
    ax.fact("elements", q.len());
    ax.fact("|R(Q)|", q.right_sided().len());
    ax.fact(
        "υ",
        q.elements()
            .map(|a| format!("υ({}) = {}", q.name(a), q.name(q.upsilon(a))))
            .collect::<Vec<_>>()
            .join(", "),
    );
    ax.fact("unit", cls.unit.map_or("none", |e| q.name(e)));
    ax.property("(B)", &cls.balanced, &nm);
    ax.property("(O)", &cls.open_axiom, &nm);
    ax.property("(R)", &cls.r_axiom, &nm);
    ax.property("(U)", &cls.u_axiom, &nm);
    ax.property("semiopen", &Verdict::from_bool(cls.semiopen()), &nm);
    ax.property("open", &Verdict::from_bool(cls.open()), &nm);
    ax.property("unital", &Verdict::from_bool(cls.unital()), &nm);
    if cls.unital() {
        ax.property("support", &cls.support, &nm);
        ax.property("⋁I(Q) = 1", &cls.cover, &nm);
    }
    ax.property("inverse", &Verdict::from_bool(cls.inverse()), &nm);

    let mut lem = Section::new("lemmas");
    lem.theorems(&lemma_suite(q, &cls), &nm);

    let mut mult = Section::new("multiplicativity");
    let m = multiplicativity(q);
    mult.property("multiplicative", &m, &nm);
    if let Ok(rm) = ReducedMult::new(q) {
        mult.fact("|Q ⊗_R Q| base", rm.space.base_len());
        match rm.semicategory_checks() {
            Ok(cs) => mult.theorems(&cs, &nm),
            Err(e) => mult.theorem(&TheoremCheck::new("semicategory equalities", Verdict::skipped(e.to_string())), &nm),
        }
    }
    let mut out = vec![ax, lem, mult];

    if !cls.open() {
        let mut b = Section::new("bisections");
        b.property("weakly multiplicative", &Verdict::skipped("needs an open quantal frame"), &nm);
        out.push(b);
        return Ok(out);
    }
    let bs = Bisections::enumerate(q)?;
    let wm = bs.weak_multiplicativity();
    out.push(bisection_section(&bs, &wm, &m, false));
    if wm.weakly_multiplicative {
        out.push(cover_section(&bs, &wm, opts, &nm)?);
    }
    Ok(out)
}

fn bisection_section(bs: &Bisections, wm: &WeakMultReport, m: &Verdict, table: bool) -> Section {
    let q = bs.q;
    let nm = names_in(q);
    let names = bs.names();
    let mut b = Section::new("bisections");
    b.fact("count", bs.len());
    b.fact("names", names.join(" "));
    if table {
        let n = bs.len();
        for i in 0..n {
            let row: Vec<&str> = (0..n)
                .map(|j| match wm.table[i * n + j] {
                    usize::MAX => "-",
                    k => names[k].as_str(),
                })
                .collect();
            b.fact(&format!("{} ·", names[i]), row.join(" "));
        }
    }
    b.theorems(&bs.formula_checks(), ids);
    b.property("υ preserves joins", &wm.upsilon_joins, &nm);
    b.property("actions preserve joins", &wm.actions_join, ids);
    b.property("products defined", &wm.products_defined, |w| {
        format!("({})", w.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(", "))
    });
    b.property("associative", &wm.associative, |w| {
        format!("({})", w.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(", "))
    });
    b.property("weakly multiplicative", &Verdict::from_bool(wm.weakly_multiplicative), ids);
    b.theorems(&wm.consequences, ids);
    b.theorem(
        &TheoremCheck::new(
            "multiplicative ⇒ weakly multiplicative",
            if m.holds() {
                Verdict::from_bool(wm.weakly_multiplicative)
            } else {
                Verdict::skipped("not multiplicative")
            },
        ),
        ids,
    );
    b.theorems(&bs.sufficient_condition(wm).checks, ids);
    if q.classify().inverse() {
        match bs.xi() {
            Ok(x) => b.theorems(&x.checks, ids),
            Err(e) => b.theorem(&TheoremCheck::new("ξ: ℬ(Q) ≅ I(Q)", Verdict::skipped(e.to_string())), ids),
        }
    }
    b
}

/// The open quantal frame a file denotes: itself, `O(G)`, or `L∨(S)`.
pub fn quantale_of_file(file: &StructureFile) -> Result<Quantale> {
    match &file.structure {
        Structure::Quantale(q) => Ok(q.clone()),
        Structure::Groupoid(g) => g.quantale(),
        Structure::InverseSemigroup(s) => Ok(lcc_completion(s)?.quantale),
        Structure::Action(a) => crate::germ::germ_groupoid(a)?.quantale(),
        Structure::Frame(_) => Err(crate::error::Error::Hypothesis("a frame has no multiplication".into())),
    }
}

fn command_report(file: &StructureFile, sections: Vec<Section>) -> Report {
    Report {
        path: file.path.clone(),
        title: file.title.clone(),
        kind: file.structure.kind().into(),
        sections,
    }
}

/// `bisections` command: the semigroup table, weak multiplicativity and witnesses.
pub fn bisections_report(file: &StructureFile) -> Result<Report> {
    let q = quantale_of_file(file)?;
    let bs = Bisections::enumerate(&q)?;
    let wm = bs.weak_multiplicativity();
    Ok(command_report(file, vec![bisection_section(&bs, &wm, &multiplicativity(&q), true)]))
}

/// `cover` command.
pub fn cover_command(file: &StructureFile, opts: &Options) -> Result<Report> {
    let q = quantale_of_file(file)?;
    let bs = Bisections::enumerate(&q)?;
    let wm = bs.weak_multiplicativity();
    if !wm.weakly_multiplicative {
        let mut s = Section::new("cover");
        s.property("weakly multiplicative", &Verdict::Fails(Vec::new()), ids);
        return Ok(command_report(file, vec![s]));
    }
    let section = cover_section(&bs, &wm, opts, &names_in(&q))?;
    Ok(command_report(file, vec![section]))
}

fn cover_section(
    bs: &Bisections,
    wm: &WeakMultReport,
    opts: &Options,
    nm: &impl Fn(&[usize]) -> String,
) -> Result<Section> {
    let r = cover_report(bs, wm, opts.cap, opts.seed)?;
    let mut c = Section::new("cover");
    c.fact("|Q̂|", r.qhat_len);
    c.fact(
        "embeddability mode",
        match r.embed.mode {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        },
    );
    c.property("enough bisections", &r.enough_bisections, nm);
    c.property("weakly embeddable", &r.weak.verdict, ids);
    c.property("embeddable", &r.embed.verdict, ids);
    c.theorems(r.all_checks(), ids);
    match &r.functor {
        Some(f) => {
            c.fact("Ĝ arrows", f.cover_arrows);
            c.fact("G arrows", f.base_arrows);
            c.property("cover functor epi", &Verdict::from_bool(f.epi), ids);
            c.property("cover functor iso", &Verdict::from_bool(f.iso), ids);
        }
        None => c.property("cover functor epi", &r.functor_gate, ids),
    }
    Ok(c)
}

fn groupoid_sections(g: &TopGroupoid, opts: &Options) -> Result<Vec<Section>> {
    let cls = g.classify();
    let an = |w: &[usize]| format!("({})", w.iter().map(|&x| g.arrows.name(x)).collect::<Vec<_>>().join(", "));
    let mut s = Section::new("groupoid");
    s.fact("objects", g.object_count());
    s.fact("arrows", g.arrow_count());
    s.fact("opens", g.arrows.opens().len());
    s.property("open", &cls.open, an);
    s.property("étale", &cls.etale, an);
    s.property("m open", &cls.m_open, an);
    s.property("u open", &cls.u_open, an);
    if !cls.open.holds() {
        return Ok(vec![s]);
    }
    let q = g.quantale()?;
    let mut out = vec![s];
    let mut qs = quantale_sections(&q, opts)?;
    for sec in &mut qs {
        sec.title = format!("O(G) {}", sec.title);
    }
    out.extend(qs);
    if q.classify().open() {
        let bs = Bisections::enumerate(&q)?;
        let mut o = Section::new("spatial oracle");
        o.theorems(&crate::bisections::spatial_oracle(g, &bs), ids);
        out.push(o);
    }
    Ok(out)
}

fn back_to_groupoid(g: &TopGroupoid, q: &Quantale) -> TheoremCheck {
    let name = "G(O(G)) ≅ G";
    match groupoid_of(q) {
        Ok(h) => TheoremCheck::new(name, Verdict::from_bool(groupoid_iso(g, &h).is_some())),
        Err(e) => TheoremCheck::new(name, Verdict::Fails(Vec::new())).with_detail(e.to_string()),
    }
}

fn semigroup_sections(s: &InverseSemigroup) -> Result<Vec<Section>> {
    let nm = |w: &[usize]| format!("({})", w.iter().map(|&a| s.name(a)).collect::<Vec<_>>().join(", "));
    let mut sec = Section::new("inverse semigroup");
    sec.fact("elements", s.len());
    sec.fact("idempotents", s.idempotents().len());
    let acp = s.acp_check();
    sec.property("complete", &acp.complete, nm);
    sec.property("distributive", &acp.distributive, nm);
    sec.property("abstract complete pseudogroup", &Verdict::from_bool(acp.is_acp()), nm);
    if !acp.is_acp() {
        return Ok(vec![sec]);
    }
    let c = lcc_completion(s)?;
    sec.fact("|L∨(S)|", c.quantale.len());
    sec.theorem(
        &TheoremCheck::new("L∨(S) is an inverse quantal frame", Verdict::from_bool(c.quantale.classify().inverse())),
        ids,
    );
    let back = partial_units_semigroup(&c.quantale)
        .map(|(i, _)| Verdict::from_bool(semigroup_iso(&i, &s.with_zero()).is_some()))
        .unwrap_or_else(|e| Verdict::skipped(e.to_string()));
    sec.theorem(&TheoremCheck::new("I(L∨(S)) ≅ S⁰", back), ids);
    Ok(vec![sec])
}

/// Emit then load, and the dual constructions there and back.
fn roundtrip_section(file: &StructureFile) -> Result<Section> {
    let mut s = Section::new("roundtrip");
    let text = crate::format::emit(&file.structure, file.title.as_deref());
    let reloaded = crate::format::from_str("<emitted>", &text)?;
    let same = match (&file.structure, &reloaded.structure) {
        (Structure::Frame(a), Structure::Frame(b)) => a.names() == b.names() && a.elements().all(|x| a.elements().all(|y| a.leq(x, y) == b.leq(x, y))),
        (Structure::Quantale(a), Structure::Quantale(b)) => quantale_iso(a, b).is_some(),
        (Structure::InverseSemigroup(a), Structure::InverseSemigroup(b)) => semigroup_iso(a, b).is_some(),
        (Structure::Groupoid(a), Structure::Groupoid(b)) => groupoid_iso(a, b).is_some(),
        (Structure::Action(a), Structure::Action(b)) => {
            a.maps == b.maps && semigroup_iso(&a.semigroup, &b.semigroup).is_some()
        }
        _ => false,
    };
    s.theorem(&TheoremCheck::new("emit then load is an isomorphism", Verdict::from_bool(same)), ids);
    match &file.structure {
        Structure::Groupoid(g) => {
            let q = g.quantale()?;
            s.theorem(&back_to_groupoid(g, &q), ids);
            if g.classify().etale.holds() {
                let v = partial_units_semigroup(&q)
                    .and_then(|(i, _)| lcc_completion(&i))
                    .map(|c| Verdict::from_bool(quantale_iso(&c.quantale, &q).is_some()))
                    .unwrap_or_else(|e| Verdict::skipped(e.to_string()));
                s.theorem(&TheoremCheck::new("L∨(I(O(G))) ≅ O(G)", v), ids);
            }
        }
        Structure::Quantale(q) => {
            let v = match groupoid_of(q) {
                Ok(g) => {
                    s.fact("G(Q) arrows", g.arrow_count());
                    g.quantale()
                        .map(|p| Verdict::from_bool(quantale_iso(&p, q).is_some()))
                        .unwrap_or_else(|e| Verdict::skipped(e.to_string()))
                }
                Err(e) => Verdict::skipped(e.to_string()),
            };
            s.property("O(G(Q)) ≅ Q", &v, ids);
        }
        Structure::InverseSemigroup(sg) => match lcc_completion(sg) {
            Ok(c) => {
                s.fact("|L∨(S)|", c.quantale.len());
                let name = "I(L∨(S)) ≅ S⁰";
                let check = match partial_units_semigroup(&c.quantale) {
                    Ok((i, _)) => TheoremCheck::new(name, Verdict::from_bool(semigroup_iso(&i, &sg.with_zero()).is_some())),
                    Err(e) => TheoremCheck::new(name, Verdict::Fails(Vec::new())).with_detail(e.to_string()),
                };
                s.theorem(&check, ids);
            }
            Err(e) => s.property("L∨(S) defined", &Verdict::skipped(e.to_string()), ids),
        },
        Structure::Action(a) => s.theorems(&germ_report(a)?.1.checks, ids),
        Structure::Frame(_) => {}
    }
    Ok(s)
}

/// `roundtrip` command.
pub fn roundtrip(file: &StructureFile) -> Result<Report> {
    Ok(command_report(file, vec![roundtrip_section(file)?]))
}
