//! Exhaustive search for involutive quantal frames on a fixed frame.
//!
//! Multiplications are join-preserving in each variable, so on a finite
//! distributive lattice they are exactly the joins of monotone maps on pairs of
//! join-irreducibles. Involutions are involutive automorphisms of the poset of
//! join-irreducibles.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::bisections::Bisections;
use crate::error::{Error, Result};
use crate::iso::quantale_iso;
use crate::lattice::{Elem, FiniteLattice};
use crate::quantale::{Classification, Quantale};
use crate::tensor::multiplicativity;

pub const DEFAULT_SEARCH_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Atom {
    B,
    O,
    R,
    U,
    Semiopen,
    Open,
    Unital,
    Inverse,
    Multiplicative,
    WeaklyMultiplicative,
}

impl Atom {
    const ALL: [(&'static str, Atom); 11] = [
        ("B", Atom::B),
        ("O", Atom::O),
        ("R", Atom::R),
        ("U", Atom::U),
        ("semiopen", Atom::Semiopen),
        ("open", Atom::Open),
        ("unital", Atom::Unital),
        ("inverse", Atom::Inverse),
        ("multiplicative", Atom::Multiplicative),
        ("weakly_multiplicative", Atom::WeaklyMultiplicative),
        ("wm", Atom::WeaklyMultiplicative),
    ];

    fn name(self) -> &'static str {
        Atom::ALL.iter().find(|(_, a)| *a == self).unwrap().0
    }
}

/// Boolean combination of classification atoms, e.g. `B∧O∧U∧¬R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Atom(Atom),
    Not(Box<Pattern>),
    And(Vec<Pattern>),
    Or(Vec<Pattern>),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, ps: &[Pattern], op: &str| {
            for (k, p) in ps.iter().enumerate() {
                if k > 0 {
                    write!(f, "{op}")?;
                }
                match p {
                    Pattern::And(_) | Pattern::Or(_) => write!(f, "({p})")?,
                    _ => write!(f, "{p}")?,
                }
            }
            Ok(())
        };
        match self {
            Pattern::Atom(a) => write!(f, "{}", a.name()),
            Pattern::Not(p) => match **p {
                Pattern::Atom(_) | Pattern::Not(_) => write!(f, "¬{p}"),
                _ => write!(f, "¬({p})"),
            },
            Pattern::And(ps) => join(f, ps, "∧"),
            Pattern::Or(ps) => join(f, ps, "∨"),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let p = parse_or(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(pattern_error(s, format!("unexpected `{}`", tokens[pos])));
        }
        Ok(p)
    }
}

fn pattern_error(s: &str, msg: String) -> Error {
    Error::Parse {
        path: format!("pattern `{s}`"),
        msg,
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '∧' | '&' => {
                chars.next();
                out.push("∧".into());
            }
            '∨' | '|' => {
                chars.next();
                out.push("∨".into());
            }
            '¬' | '!' | '~' => {
                chars.next();
                out.push("¬".into());
            }
            '(' | ')' => {
                chars.next();
                out.push(c.to_string());
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut w = String::new();
                while let Some(&c) = chars.peek().filter(|c| c.is_alphanumeric() || **c == '_') {
                    w.push(c);
                    chars.next();
                }
                out.push(w);
            }
            other => return Err(pattern_error(s, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

fn parse_or(t: &[String], pos: &mut usize) -> Result<Pattern> {
    let mut ps = vec![parse_and(t, pos)?];
    while t.get(*pos).is_some_and(|x| x == "∨") {
        *pos += 1;
        ps.push(parse_and(t, pos)?);
    }
    Ok(if ps.len() == 1 { ps.pop().unwrap() } else { Pattern::Or(ps) })
}

fn parse_and(t: &[String], pos: &mut usize) -> Result<Pattern> {
    let mut ps = vec![parse_not(t, pos)?];
    while t.get(*pos).is_some_and(|x| x == "∧") {
        *pos += 1;
        ps.push(parse_not(t, pos)?);
    }
    Ok(if ps.len() == 1 { ps.pop().unwrap() } else { Pattern::And(ps) })
}

fn parse_not(t: &[String], pos: &mut usize) -> Result<Pattern> {
    let whole = t.join(" ");
    let tok = t
        .get(*pos)
        .ok_or_else(|| pattern_error(&whole, "unexpected end".into()))?;
    *pos += 1;
    match tok.as_str() {
        "¬" => Ok(Pattern::Not(Box::new(parse_not(t, pos)?))),
        "(" => {
            let p = parse_or(t, pos)?;
            if t.get(*pos).map(String::as_str) != Some(")") {
                return Err(pattern_error(&whole, "missing `)`".into()));
            }
            *pos += 1;
            Ok(p)
        }
        name => Atom::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, a)| Pattern::Atom(a))
            .ok_or_else(|| pattern_error(&whole, format!("unknown atom `{name}`"))),
    }
}

/// Lazily computed atoms of one quantale.
struct Eval<'q> {
    q: &'q Quantale,
    cls: Classification,
    mult: Option<bool>,
    wm: Option<bool>,
}

impl<'q> Eval<'q> {
    fn new(q: &'q Quantale) -> Self {
        Eval {
            q,
            cls: q.classify(),
            mult: None,
            wm: None,
        }
    }

    /// Atoms whose defining construction is unavailable count as false.
    fn atom(&mut self, a: Atom) -> bool {
        let c = &self.cls;
        match a {
            Atom::B => c.balanced.holds(),
            Atom::O => c.open_axiom.holds(),
            Atom::R => c.r_axiom.holds(),
            Atom::U => c.u_axiom.holds(),
            Atom::Semiopen => c.semiopen(),
            Atom::Open => c.open(),
            Atom::Unital => c.unital(),
            Atom::Inverse => c.inverse(),
            Atom::Multiplicative => *self.mult.get_or_insert_with(|| multiplicativity(self.q).holds()),
            Atom::WeaklyMultiplicative => {
                let (q, open) = (self.q, c.open());
                *self.wm.get_or_insert_with(|| {
                    open && Bisections::enumerate(q).is_ok_and(|bs| bs.weak_multiplicativity().weakly_multiplicative)
                })
            }
        }
    }

    fn eval(&mut self, p: &Pattern) -> bool {
        match p {
            Pattern::Atom(a) => self.atom(*a),
            Pattern::Not(p) => !self.eval(p),
            Pattern::And(ps) => ps.iter().all(|p| self.eval(p)),
            Pattern::Or(ps) => ps.iter().any(|p| self.eval(p)),
        }
    }
}

pub fn matches(q: &Quantale, p: &Pattern) -> bool {
    Eval::new(q).eval(p)
}

/// `powerset:k`, `chain:n`, or a frame/quantale structure file.
pub fn frame_spec(spec: &str) -> Result<Arc<FiniteLattice>> {
    let bad = |msg: String| Error::Parse {
        path: format!("frame `{spec}`"),
        msg,
    };
    let size = |s: &str| s.parse::<usize>().map_err(|e| bad(e.to_string()));
    if let Some(k) = spec.strip_prefix("powerset:") {
        let k = size(k)?;
        if k > 4 {
            return Err(Error::TooLarge(format!("powerset of {k} points")));
        }
        let pts: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let pts: Vec<&str> = pts.iter().map(String::as_str).collect();
        return Ok(Arc::new(FiniteLattice::powerset(&pts)));
    }
    if let Some(n) = spec.strip_prefix("chain:") {
        let n = size(n)?;
        if n == 0 {
            return Err(bad("a chain needs at least one element".into()));
        }
        return Ok(Arc::new(FiniteLattice::chain(n)));
    }
    match crate::format::load(spec)?.structure {
        crate::format::Structure::Frame(l) => Ok(l),
        crate::format::Structure::Quantale(q) => Ok(q.frame().clone()),
        other => Err(bad(format!("a {} file does not describe a frame", other.kind()))),
    }
}

/// Involutive order automorphisms of the join-irreducibles, as frame maps.
fn involutions(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let js = l.join_irreducibles().to_vec();
    let k = js.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; k];
    fn rec(i: usize, js: &[Elem], l: &FiniteLattice, perm: &mut Vec<usize>, out: &mut Vec<Vec<Elem>>) {
        let k = js.len();
        if i == k {
            let ok = (0..k).all(|a| {
                perm[perm[a]] == a && (0..k).all(|b| l.leq(js[a], js[b]) == l.leq(js[perm[a]], js[perm[b]]))
            });
            if ok {
                let below = |x: Elem| (0..k).filter(move |&a| l.leq(js[a], x));
                out.push(l.elements().map(|x| l.join_all(below(x).map(|a| js[perm[a]]))).collect());
            }
            return;
        }
        for t in 0..k {
            if !perm[..i].contains(&t) {
                perm[i] = t;
                rec(i + 1, js, l, perm, out);
            }
        }
        perm[i] = usize::MAX;
    }
    rec(0, &js, l, &mut perm, &mut out);
    out
}

struct Enum<'a> {
    l: &'a Arc<FiniteLattice>,
    js: Vec<Elem>,
    inv: Vec<Elem>,
    /// Involution on join-irreducible positions.
    pj: Vec<usize>,
    g: Vec<Option<Elem>>,
    cap: usize,
    leaves: usize,
    found: Vec<Quantale>,
}

impl Enum<'_> {
    /// Cells are filled in row-major order; `(ab)* = b*a*` fixes the mirror cell.
    fn fill(&mut self, cell: usize) -> Result<()> {
        let k = self.js.len();
        if cell == k * k {
            self.leaves += 1;
            if self.leaves > self.cap {
                return Err(Error::CapExceeded(format!("more than {} candidate multiplications", self.cap)));
            }
            if let Some(q) = complete(self.l, &self.js, &self.g, &self.inv) {
                if !self.found.iter().any(|p| quantale_iso(p, &q).is_some()) {
                    self.found.push(q);
                }
            }
            return Ok(());
        }
        let (a, b) = (cell / k, cell % k);
        let mirror = self.pj[b] * k + self.pj[a];
        if mirror < cell {
            return self.fill(cell + 1);
        }
        for val in self.l.elements() {
            let mval = self.inv[val];
            if mirror == cell && mval != val {
                continue;
            }
            self.g[cell] = Some(val);
            self.g[mirror] = Some(mval);
            if monotone_at(self.l, &self.js, &self.g, k, cell) && monotone_at(self.l, &self.js, &self.g, k, mirror) {
                self.fill(cell + 1)?;
            }
            self.g[cell] = None;
            self.g[mirror] = None;
        }
        Ok(())
    }
}

/// All involutive quantal frames on `l` up to isomorphism, in discovery order.
pub fn enumerate(l: &Arc<FiniteLattice>, cap: usize) -> Result<Vec<Quantale>> {
    l.require_frame()?;
    let js = l.join_irreducibles().to_vec();
    let k = js.len();
    let mut e = Enum {
        l,
        js: js.clone(),
        inv: Vec::new(),
        pj: Vec::new(),
        g: vec![None; k * k],
        cap,
        leaves: 0,
        found: Vec::new(),
    };
    for inv in involutions(l) {
        e.pj = js.iter().map(|&j| js.iter().position(|&x| x == inv[j]).unwrap()).collect();
        e.inv = inv;
        e.fill(0)?;
    }
    Ok(e.found)
}

/// Monotonicity of `g` in each variable, against every assigned comparable cell.
fn monotone_at(l: &FiniteLattice, js: &[Elem], g: &[Option<Elem>], k: usize, cell: usize) -> bool {
    let (a, b) = (cell / k, cell % k);
    let Some(v) = g[cell] else { return true };
    (0..k).all(|c| {
        let row = |x: usize, y: usize| g[x * k + y];
        let ok = |lo: Option<Elem>, hi: Option<Elem>| match (lo, hi) {
            (Some(lo), Some(hi)) => l.leq(lo, hi),
            _ => true,
        };
        let (jc, ja, jb) = (js[c], js[a], js[b]);
        (!l.leq(jc, ja) || ok(row(c, b), Some(v)))
            && (!l.leq(ja, jc) || ok(Some(v), row(c, b)))
            && (!l.leq(jc, jb) || ok(row(a, c), Some(v)))
            && (!l.leq(jb, jc) || ok(Some(v), row(a, c)))
    })
}

fn complete(l: &Arc<FiniteLattice>, js: &[Elem], g: &[Option<Elem>], inv: &[Elem]) -> Option<Quantale> {
    let k = js.len();
    let n = l.len();
    let below: Vec<Vec<usize>> = l
        .elements()
        .map(|x| (0..k).filter(|&a| l.leq(js[a], x)).collect())
        .collect();
    let mut mult = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            mult[x * n + y] = l.join_all(
                below[x]
                    .iter()
                    .flat_map(|&a| below[y].iter().map(move |&b| g[a * k + b].unwrap())),
            );
        }
    }
    // associativity on join-irreducibles suffices by distributivity
    let m = |x: Elem, y: Elem| mult[x * n + y];
    let assoc = js
        .iter()
        .all(|&a| js.iter().all(|&b| js.iter().all(|&c| m(m(a, b), c) == m(a, m(b, c)))));
    if !assoc {
        return None;
    }
    Quantale::new(l.clone(), mult, inv.to_vec()).ok()
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub pattern: String,
    pub frame_elements: usize,
    /// Involutive quantal frames on the frame, up to isomorphism.
    pub structures: usize,
    #[serde(skip)]
    pub witnesses: Vec<Quantale>,
}

pub fn search(l: &Arc<FiniteLattice>, pattern: &Pattern, cap: usize) -> Result<SearchReport> {
    let all = enumerate(l, cap)?;
    let structures = all.len();
    let witnesses = all.into_iter().filter(|q| matches(q, pattern)).collect();
    Ok(SearchReport {
        pattern: pattern.to_string(),
        frame_elements: l.len(),
        structures,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn patterns_parse_both_spellings() {
        let p: Pattern = "B∧O∧U∧¬R".parse().unwrap();
        assert_eq!(p, "B & O & U & !R".parse().unwrap());
        assert_eq!(p.to_string(), "B∧O∧U∧¬R");
        assert!("B ∧".parse::<Pattern>().is_err());
        assert!("X".parse::<Pattern>().is_err());
        assert_eq!("¬(B∨O)".parse::<Pattern>().unwrap().to_string(), "¬(B∨O)");
    }

    #[test]
    fn two_chain_structures() {
        let l = frame_spec("chain:2").unwrap();
        let all = enumerate(&l, DEFAULT_SEARCH_CAP).unwrap();
        // `1·1 ∈ {0, 1}`
        assert_eq!(all.len(), 2);
        assert!(all.iter().any(|q| quantale_iso(q, &catalog::two_chain_quantale()).is_some()));
    }

    #[test]
    fn boolean_frame_contains_the_examples() {
        let l = frame_spec("powerset:2").unwrap();
        let all = enumerate(&l, DEFAULT_SEARCH_CAP).unwrap();
        for q in [catalog::q_a(), catalog::q_b(), catalog::z2_quantale()] {
            assert!(all.iter().any(|p| quantale_iso(p, &q).is_some()));
        }
        for (i, p) in all.iter().enumerate() {
            for q in &all[i + 1..] {
                assert!(quantale_iso(p, q).is_none());
            }
        }
    }
}
