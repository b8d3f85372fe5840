//! The TOML structure-file format shared by every kind of finite structure.
//!
//! Every file has a top-level `kind` and an optional `title` and `[expect]`
//! table of expected classification flags. Elements are always referred to by
//! name; tables are lists of name pairs or triples.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::Action;
use crate::groupoid::TopGroupoid;
use crate::lattice::FiniteLattice;
use crate::quantale::Quantale;
use crate::semigroup::InverseSemigroup;
use crate::topology::{bits, FiniteSpace, Mask};

#[derive(Clone, Debug)]
pub enum Structure {
    Frame(Arc<FiniteLattice>),
    Quantale(Quantale),
    InverseSemigroup(InverseSemigroup),
    Groupoid(TopGroupoid),
    Action(Action),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Frame(_) => "frame",
            Structure::Quantale(_) => "quantale",
            Structure::InverseSemigroup(_) => "inverse_semigroup",
            Structure::Groupoid(_) => "groupoid",
            Structure::Action(_) => "action",
        }
    }
}

/// Expectation keys accepted in `[expect]`, per kind.
pub fn expectation_keys(kind: &str) -> &'static [&'static str] {
    match kind {
        "quantale" => &[
            "balanced",
            "open_axiom",
            "r_axiom",
            "u_axiom",
            "semiopen",
            "open",
            "unital",
            "inverse",
            "multiplicative",
            "weakly_multiplicative",
            "enough_bisections",
            "embeddable",
        ],
        "groupoid" => &["open", "etale", "multiplicative", "enough_bisections", "embeddable"],
        "inverse_semigroup" => &["acp"],
        "action" => &["natural"],
        _ => &[],
    }
}

#[derive(Clone, Debug)]
pub struct StructureFile {
    pub path: String,
    pub title: Option<String>,
    pub expect: BTreeMap<String, bool>,
    pub structure: Structure,
}

type Pair = [String; 2];
type Triple = [String; 3];

#[derive(Deserialize)]
struct Header {
    kind: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    covers: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    leq: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    opens: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subbasis: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSemigroup {
    elements: Vec<String>,
    mult: Vec<Triple>,
    inv: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    frame: RawFrame,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantaleFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    /// `mult` and `inv` are given on join-irreducibles only.
    #[serde(default)]
    generators: bool,
    mult: Vec<Triple>,
    #[serde(default)]
    inv: BTreeMap<String, String>,
    frame: RawFrame,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SemigroupFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    elements: Vec<String>,
    mult: Vec<Triple>,
    inv: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    d: BTreeMap<String, String>,
    r: BTreeMap<String, String>,
    i: BTreeMap<String, String>,
    u: BTreeMap<String, String>,
    /// Products of composable pairs `[x, y, xy]` with `r(x) = d(y)`.
    m: Vec<Triple>,
    objects: RawSpace,
    arrows: RawSpace,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    semigroup: RawSemigroup,
    space: RawSpace,
    /// For each semigroup element, its graph as `[x, φ(x)]` pairs.
    maps: BTreeMap<String, Vec<Pair>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expect: BTreeMap<String, bool>,
}

/// Resolves names against a declared element list.
struct Names<'a> {
    path: &'a str,
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(path: &'a str, field: &str, names: &'a [String]) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), k).is_some() {
                return Err(invalid(path, field, format!("duplicate name `{n}`")));
            }
        }
        Ok(Names { path, index })
    }

    fn get(&self, field: &str, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| invalid(self.path, field, format!("unknown name `{name}`")))
    }

    fn map(&self, field: &str, m: &BTreeMap<String, String>, dst: &Names) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; self.index.len()];
        for (k, v) in m {
            out[self.get(field, k)?] = Some(dst.get(field, v)?);
        }
        Ok(out)
    }

    fn total_map(&self, field: &str, m: &BTreeMap<String, String>, dst: &Names, names: &[String]) -> Result<Vec<usize>> {
        self.map(field, m, dst)?
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| invalid(self.path, field, format!("no value for `{}`", names[k]))))
            .collect()
    }
}

fn invalid(path: &str, field: &str, msg: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        field: field.into(),
        msg: msg.into(),
    }
}

/// Wraps a construction error with the file it came from.
fn located<T>(path: &str, field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| invalid(path, field, e.to_string()))
}

fn parse<T: DeserializeOwned>(path: &str, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse {
        path: path.into(),
        msg: e.to_string().trim_end().to_string(),
    })
}

/// Resolves `fixtures/qA` to `fixtures/qA.toml` when the former does not exist.
pub fn resolve(path: &Path) -> PathBuf {
    if !path.exists() && path.extension().is_none() {
        let with = path.with_extension("toml");
        if with.exists() {
            return with;
        }
    }
    path.to_path_buf()
}

pub fn load(path: impl AsRef<Path>) -> Result<StructureFile> {
    let path = resolve(path.as_ref());
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{shown}: {e}")))?;
    from_str(&shown, &text)
}

pub fn from_str(path: &str, text: &str) -> Result<StructureFile> {
    if text.trim().is_empty() {
        return Err(Error::Parse {
            path: path.into(),
            msg: "empty file".into(),
        });
    }
    let header: Header = parse(path, text)?;
    let (title, expect, structure) = match header.kind.as_str() {
        "frame" => {
            let f: FrameFile = parse(path, text)?;
            (f.title, f.expect, Structure::Frame(Arc::new(frame(path, &f.frame)?)))
        }
        "quantale" => {
            let f: QuantaleFile = parse(path, text)?;
            (f.title.clone(), f.expect.clone(), Structure::Quantale(quantale(path, &f)?))
        }
        "inverse_semigroup" => {
            let f: SemigroupFile = parse(path, text)?;
            let raw = RawSemigroup {
                elements: f.elements,
                mult: f.mult,
                inv: f.inv,
            };
            (f.title, f.expect, Structure::InverseSemigroup(semigroup(path, "", &raw)?))
        }
        "groupoid" => {
            let f: GroupoidFile = parse(path, text)?;
            (f.title.clone(), f.expect.clone(), Structure::Groupoid(groupoid(path, &f)?))
        }
        "action" => {
            let f: ActionFile = parse(path, text)?;
            (f.title.clone(), f.expect.clone(), Structure::Action(action(path, &f)?))
        }
        other => {
            return Err(invalid(
                path,
                "kind",
                format!("`{other}` is not one of frame, quantale, inverse_semigroup, groupoid, action"),
            ))
        }
    };
    let known = expectation_keys(structure.kind());
    if let Some(k) = expect.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(invalid(path, "expect", format!("unknown expectation `{k}`")));
    }
    Ok(StructureFile {
        path: path.into(),
        title,
        expect,
        structure,
    })
}

fn frame(path: &str, raw: &RawFrame) -> Result<FiniteLattice> {
    let names = Names::new(path, "frame.elements", &raw.elements)?;
    let mut pairs = Vec::new();
    for (field, list) in [("frame.covers", &raw.covers), ("frame.leq", &raw.leq)] {
        for [a, b] in list {
            pairs.push((names.get(field, a)?, names.get(field, b)?));
        }
    }
    let l = located(path, "frame", FiniteLattice::from_covers(raw.elements.clone(), &pairs))?;
    located(path, "frame", l.require_frame())?;
    Ok(l)
}

fn quantale(path: &str, f: &QuantaleFile) -> Result<Quantale> {
    let l = Arc::new(frame(path, &f.frame)?);
    let names = Names::new(path, "frame.elements", &f.frame.elements)?;
    let n = l.len();
    let mut mult = vec![None; n * n];
    for (k, [a, b, c]) in f.mult.iter().enumerate() {
        let field = format!("mult[{k}]");
        let (a, b, c) = (names.get(&field, a)?, names.get(&field, b)?, names.get(&field, c)?);
        if mult[a * n + b].replace(c).is_some_and(|old| old != c) {
            return Err(invalid(path, &field, "conflicting product"));
        }
    }
    let inv = names.map("inv", &f.inv, &names)?;
    let q = if f.generators {
        let js = l.join_irreducibles().to_vec();
        for &a in &js {
            if inv[a].is_none() {
                return Err(invalid(path, "inv", format!("no value for `{}`", l.name(a))));
            }
            for &b in &js {
                if mult[a * n + b].is_none() {
                    return Err(invalid(path, "mult", format!("no product for ({}, {})", l.name(a), l.name(b))));
                }
            }
        }
        Quantale::from_generators(l, |a, b| mult[a * n + b].unwrap(), |a| inv[a].unwrap())
    } else {
        let mult = mult
            .iter()
            .enumerate()
            .map(|(k, m)| {
                m.ok_or_else(|| {
                    invalid(path, "mult", format!("no product for ({}, {})", l.name(k / n), l.name(k % n)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let inv = inv
            .iter()
            .enumerate()
            .map(|(a, v)| v.ok_or_else(|| invalid(path, "inv", format!("no value for `{}`", l.name(a)))))
            .collect::<Result<Vec<_>>>()?;
        Quantale::new(l, mult, inv)
    };
    located(path, "mult", q)
}

fn semigroup(path: &str, prefix: &str, raw: &RawSemigroup) -> Result<InverseSemigroup> {
    let f = |s: &str| format!("{prefix}{s}");
    let names = Names::new(path, &f("elements"), &raw.elements)?;
    let n = raw.elements.len();
    let mut mult = vec![None; n * n];
    for (k, [a, b, c]) in raw.mult.iter().enumerate() {
        let field = f(&format!("mult[{k}]"));
        let (a, b, c) = (names.get(&field, a)?, names.get(&field, b)?, names.get(&field, c)?);
        if mult[a * n + b].replace(c).is_some_and(|old| old != c) {
            return Err(invalid(path, &field, "conflicting product"));
        }
    }
    let mult = mult
        .iter()
        .enumerate()
        .map(|(k, m)| {
            m.ok_or_else(|| {
                invalid(
                    path,
                    &f("mult"),
                    format!("no product for ({}, {})", raw.elements[k / n], raw.elements[k % n]),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inv = names.total_map(&f("inv"), &raw.inv, &names, &raw.elements)?;
    located(path, &f("mult"), InverseSemigroup::new(raw.elements.clone(), mult, inv))
}

fn space(path: &str, field: &str, raw: &RawSpace) -> Result<FiniteSpace> {
    let names = Names::new(path, &format!("{field}.points"), &raw.points)?;
    let masks = |sub: &str, sets: &[Vec<String>]| -> Result<Vec<Mask>> {
        let field = format!("{field}.{sub}");
        sets.iter()
            .map(|s| s.iter().map(|p| Ok(1 << names.get(&field, p)?)).sum())
            .collect()
    };
    let built = match (&raw.opens, &raw.subbasis) {
        (Some(o), None) => {
            let mut opens = masks("opens", o)?;
            opens.sort_unstable();
            opens.dedup();
            FiniteSpace::new(raw.points.clone(), opens)
        }
        (None, Some(s)) => FiniteSpace::generated(raw.points.clone(), &masks("subbasis", s)?),
        (None, None) => FiniteSpace::discrete(raw.points.clone()),
        (Some(_), Some(_)) => return Err(invalid(path, field, "give either `opens` or `subbasis`, not both")),
    };
    located(path, field, built)
}

fn groupoid(path: &str, f: &GroupoidFile) -> Result<TopGroupoid> {
    let objects = space(path, "objects", &f.objects)?;
    let arrows = space(path, "arrows", &f.arrows)?;
    let on = Names::new(path, "objects.points", &f.objects.points)?;
    let an = Names::new(path, "arrows.points", &f.arrows.points)?;
    let d = an.total_map("d", &f.d, &on, &f.arrows.points)?;
    let r = an.total_map("r", &f.r, &on, &f.arrows.points)?;
    let i = an.total_map("i", &f.i, &an, &f.arrows.points)?;
    let u = on.total_map("u", &f.u, &an, &f.objects.points)?;
    let mut m = HashMap::new();
    for (k, [x, y, z]) in f.m.iter().enumerate() {
        let field = format!("m[{k}]");
        m.insert((an.get(&field, x)?, an.get(&field, y)?), an.get(&field, z)?);
    }
    located(path, "m", TopGroupoid::new(objects, arrows, d, r, i, u, |x, y| m.get(&(x, y)).copied()))
}

fn action(path: &str, f: &ActionFile) -> Result<Action> {
    let s = semigroup(path, "semigroup.", &f.semigroup)?;
    let x = space(path, "space", &f.space)?;
    let sn = Names::new(path, "semigroup.elements", &f.semigroup.elements)?;
    let xn = Names::new(path, "space.points", &f.space.points)?;
    let mut maps = vec![vec![None; x.len()]; s.len()];
    let mut seen = vec![false; s.len()];
    for (a, graph) in &f.maps {
        let field = format!("maps.{a}");
        let a = sn.get(&field, a)?;
        seen[a] = true;
        for [p, q] in graph {
            maps[a][xn.get(&field, p)?] = Some(xn.get(&field, q)?);
        }
    }
    if let Some(a) = seen.iter().position(|&b| !b) {
        return Err(invalid(path, "maps", format!("no map for `{}`", s.name(a))));
    }
    located(path, "maps", Action::new(s, x, maps))
}

fn raw_frame(l: &FiniteLattice) -> RawFrame {
    RawFrame {
        elements: l.names().to_vec(),
        covers: l
            .elements()
            .flat_map(|b| l.lower_covers(b).iter().map(move |&a| [l.name(a).to_string(), l.name(b).to_string()]))
            .collect(),
        leq: Vec::new(),
    }
}

/// Minimal neighbourhoods generate every finite topology.
fn raw_space(x: &FiniteSpace) -> RawSpace {
    let nbhds: BTreeSet<Mask> = (0..x.len()).map(|p| x.nbhd(p)).collect();
    RawSpace {
        points: x.names().to_vec(),
        opens: None,
        subbasis: Some(
            nbhds
                .into_iter()
                .map(|m| bits(m).map(|p| x.name(p).to_string()).collect())
                .collect(),
        ),
    }
}

fn raw_semigroup(s: &InverseSemigroup) -> RawSemigroup {
    let n = s.len();
    RawSemigroup {
        elements: s.names().to_vec(),
        mult: (0..n * n)
            .map(|k| [s.name(k / n).into(), s.name(k % n).into(), s.name(s.mul(k / n, k % n)).into()])
            .collect(),
        inv: (0..n).map(|a| (s.name(a).into(), s.name(s.inv(a)).into())).collect(),
    }
}

/// Renders a structure in the file format; `load` of the output yields an
/// isomorphic structure.
pub fn emit(structure: &Structure, title: Option<&str>) -> String {
    let title = title.map(str::to_string);
    let kind = structure.kind().to_string();
    let expect = BTreeMap::new();
    let out = match structure {
        Structure::Frame(l) => toml::to_string(&FrameFile {
            kind,
            title,
            frame: raw_frame(l),
            expect,
        }),
        Structure::Quantale(q) => {
            let l = q.frame();
            let js = l.join_irreducibles();
            let nm = |a| l.name(a).to_string();
            toml::to_string(&QuantaleFile {
                kind,
                title,
                generators: true,
                mult: js
                    .iter()
                    .flat_map(|&a| js.iter().map(move |&b| [nm(a), nm(b), nm(q.mul(a, b))]))
                    .collect(),
                inv: js.iter().map(|&a| (nm(a), nm(q.star(a)))).collect(),
                frame: raw_frame(l),
                expect,
            })
        }
        Structure::InverseSemigroup(s) => {
            let raw = raw_semigroup(s);
            toml::to_string(&SemigroupFile {
                kind,
                title,
                elements: raw.elements,
                mult: raw.mult,
                inv: raw.inv,
                expect,
            })
        }
        Structure::Groupoid(g) => {
            let an = |x: usize| g.arrows.name(x).to_string();
            let on = |p: usize| g.objects.name(p).to_string();
            let arrows = 0..g.arrow_count();
            toml::to_string(&GroupoidFile {
                kind,
                title,
                d: arrows.clone().map(|x| (an(x), on(g.d[x]))).collect(),
                r: arrows.clone().map(|x| (an(x), on(g.r[x]))).collect(),
                i: arrows.map(|x| (an(x), an(g.i[x]))).collect(),
                u: (0..g.object_count()).map(|p| (on(p), an(g.u[p]))).collect(),
                m: g
                    .composable()
                    .into_iter()
                    .map(|(x, y)| [an(x), an(y), an(g.m(x, y).expect("composable"))])
                    .collect(),
                objects: raw_space(&g.objects),
                arrows: raw_space(&g.arrows),
                expect,
            })
        }
        Structure::Action(a) => {
            let x = &a.space;
            toml::to_string(&ActionFile {
                kind,
                title,
                semigroup: raw_semigroup(&a.semigroup),
                space: raw_space(x),
                maps: a
                    .maps
                    .iter()
                    .enumerate()
                    .map(|(s, m)| {
                        let graph = m
                            .iter()
                            .enumerate()
                            .filter_map(|(p, q)| q.map(|q| [x.name(p).to_string(), x.name(q).to_string()]))
                            .collect();
                        (a.semigroup.name(s).to_string(), graph)
                    })
                    .collect(),
                expect,
            })
        }
    };
    rows_on_lines(&out.expect("structure files serialize"))
}

/// Puts each row of an array-of-arrays value on its own line.
fn rows_on_lines(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let Some((key, value)) = line.split_once(" = ").filter(|(_, v)| v.starts_with("[[")) else {
            out.push_str(line);
            out.push('\n');
            continue;
        };
        out.push_str(key);
        out.push_str(" = [\n");
        let inner = &value[1..value.len() - 1];
        let (mut depth, mut quote, mut escaped, mut start) = (0, None, false, 0);
        for (i, c) in inner.char_indices() {
            match (c, quote) {
                _ if escaped => escaped = false,
                ('\\', Some('"')) => escaped = true,
                ('"' | '\'', None) => quote = Some(c),
                (c, Some(q)) if c == q => quote = None,
                (_, Some(_)) => {}
                ('[', None) => depth += 1,
                (']', None) => depth -= 1,
                (',', None) if depth == 0 => {
                    out.push_str(&format!("    {},\n", inner[start..i].trim()));
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push_str(&format!("    {},\n]\n", inner[start..].trim()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::groupoid::groupoid_iso;
    use crate::iso::{quantale_iso, semigroup_iso};

    fn reload(s: &Structure) -> Structure {
        from_str("<emitted>", &emit(s, Some("t"))).unwrap().structure
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(from_str("e", ""), Err(Error::Parse { .. })));
        assert!(matches!(from_str("e", "kind = "), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_names_are_located() {
        let text = "kind = \"frame\"\n[frame]\nelements = [\"0\", \"1\"]\ncovers = [[\"0\", \"2\"]]\n";
        match from_str("f", text) {
            Err(Error::Validation { field, msg, .. }) => {
                assert_eq!(field, "frame.covers");
                assert!(msg.contains("`2`"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_report_a_line() {
        let text = "kind = \"frame\"\ncolour = 3\n[frame]\nelements = [\"0\"]\n";
        let Err(Error::Parse { msg, .. }) = from_str("f", text) else {
            panic!()
        };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn emitted_structures_reload() {
        let q = catalog::q_a();
        let Structure::Quantale(q2) = reload(&Structure::Quantale(q.clone())) else {
            panic!()
        };
        assert!(quantale_iso(&q, &q2).is_some());
        for (_, g) in catalog::etale_groupoids().into_iter().chain(catalog::open_non_etale_groupoids()) {
            let Structure::Groupoid(h) = reload(&Structure::Groupoid(g.clone())) else {
                panic!()
            };
            assert!(groupoid_iso(&g, &h).is_some());
        }
        let s = catalog::i2();
        let Structure::InverseSemigroup(t) = reload(&Structure::InverseSemigroup(s.clone())) else {
            panic!()
        };
        assert!(semigroup_iso(&s, &t).is_some());
        let Structure::Action(a) = reload(&Structure::Action(catalog::chain_action())) else {
            panic!()
        };
        assert!(a.is_natural());
    }
}
