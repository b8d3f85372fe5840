//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use quantal::bisections::{spatial_oracle, Bisections};
use quantal::catalog;
use quantal::format::{load, Structure};
use quantal::germ::germ_report;
use quantal::groupoid::{groupoid_iso, groupoid_of};
use quantal::iso::{quantale_iso, semigroup_iso};
use quantal::report::{self, Options, Report, Status};
use quantal::search::{search, Pattern, DEFAULT_SEARCH_CAP};
use quantal::semigroup::{lcc_completion, partial_units_semigroup};
use quantal::tensor::{ReducedMult, DEFAULT_CAP};

use common::{catalog_quantales, fixture, red_flags, report_of, searched};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn status(r: &Report, name: &str) -> Result<Status, String> {
    r.find(name).map(|l| l.status).ok_or_else(|| format!("{}: no `{name}` line", r.path))
}

fn expect_lines(r: &Report, want: &[(&str, Status)]) -> Outcome {
    for &(name, st) in want {
        let got = status(r, name)?;
        ensure(got == st, || format!("{}: `{name}` is {got:?}, want {st:?}", r.path))?;
    }
    Ok(())
}

fn counterexamples() -> Outcome {
    use Status::*;
    let opts = Options::default();
    let qa = report::check(&load(fixture("qA")).map_err(|e| e.to_string())?, &opts).map_err(|e| e.to_string())?;
    expect_lines(&qa, &[("(B)", Pass), ("(O)", Pass), ("(U)", Pass), ("(R)", Fail)])?;
    let ups = qa.fact("υ").unwrap_or_default();
    ensure(ups.contains("υ({a}) = {a}"), || format!("qA: υ is `{ups}`"))?;

    let qb = report::check(&load(fixture("qB")).map_err(|e| e.to_string())?, &opts).map_err(|e| e.to_string())?;
    expect_lines(&qb, &[("(B)", Pass), ("(O)", Pass), ("(R)", Pass), ("(U)", Fail)])?;
    let ups = qb.fact("υ").unwrap_or_default();
    for v in ["υ({a}) = ∅", "υ({b}) = ∅", "υ(X) = X"] {
        ensure(ups.contains(v), || format!("qB: υ is `{ups}`, missing `{v}`"))?;
    }
    ensure(qa.red_flags() + qb.red_flags() == 0, || "red flags in qA/qB".into())
}

fn independence() -> Outcome {
    let l = quantal::search::frame_spec("powerset:2").map_err(|e| e.to_string())?;
    let run = |p: &str| search(&l, &p.parse::<Pattern>().unwrap(), DEFAULT_SEARCH_CAP).map_err(|e| e.to_string());
    for (p, paper) in [("B∧O∧U∧¬R", catalog::q_a()), ("B∧O∧R∧¬U", catalog::q_b())] {
        let r = run(p)?;
        ensure(!r.witnesses.is_empty(), || format!("no witness for {p}"))?;
        ensure(r.witnesses.iter().any(|q| quantale_iso(q, &paper).is_some()), || {
            format!("{p}: the known example is missing among {} witnesses", r.witnesses.len())
        })?;
    }
    for p in [
        "unital∧open∧¬inverse",
        "inverse∧¬open",
        "open∧¬semiopen",
        "semiopen∧¬U",
        "multiplicative∧open∧¬wm",
    ] {
        let n = run(p)?.witnesses.len();
        ensure(n == 0, || format!("{p} has {n} witnesses"))?;
    }
    let chain2 = quantal::search::frame_spec("chain:2").map_err(|e| e.to_string())?;
    let n = search(&chain2, &"¬B".parse().unwrap(), DEFAULT_SEARCH_CAP)
        .map_err(|e| e.to_string())?
        .witnesses
        .len();
    ensure(n == 0, || format!("¬B on chain:2 has {n} witnesses"))
}

fn etale_correspondence() -> Outcome {
    let gs = catalog::etale_groupoids();
    ensure(gs.len() >= 5, || "fewer than 5 étale groupoids".into())?;
    for (name, g) in gs {
        let e = |m: String| format!("{name}: {m}");
        let q = g.quantale().map_err(|x| e(x.to_string()))?;
        ensure(q.classify().inverse(), || e("O(G) is not inverse".into()))?;
        let bs = Bisections::enumerate(&q).map_err(|x| e(x.to_string()))?;
        let xi = bs.xi().map_err(|x| e(x.to_string()))?;
        if let Some(c) = xi.checks.iter().find(|c| !c.verdict.holds()) {
            return Err(e(format!("{} fails", c.name)));
        }
        let (i, _) = partial_units_semigroup(&q).map_err(|x| e(x.to_string()))?;
        let c = lcc_completion(&i).map_err(|x| e(x.to_string()))?;
        ensure(quantale_iso(&c.quantale, &q).is_some(), || e("L∨(I(O(G))) ≇ O(G)".into()))?;
        let h = groupoid_of(&q).map_err(|x| e(x.to_string()))?;
        let (f0, f1) = groupoid_iso(&g, &h).ok_or_else(|| e("G(O(G)) ≇ G".into()))?;
        ensure(f0.len() == g.object_count() && f1.len() == g.arrow_count(), || e("partial isomorphism".into()))?;
    }
    Ok(())
}

fn open_non_etale() -> Outcome {
    use Status::*;
    let r = report_of("Sierpiński pair", Structure::Groupoid(catalog::sierpinski_pair()), true);
    expect_lines(
        &r,
        &[
            ("open", Pass),
            ("étale", Fail),
            ("(B)", Pass),
            ("(O)", Pass),
            ("(R)", Pass),
            ("(U)", Pass),
            ("unital", Fail),
            ("multiplicative", Pass),
            ("weakly multiplicative", Pass),
            ("enough bisections", Fail),
            ("G(O(G)) ≅ G", Pass),
        ],
    )?;
    let flags = red_flags(&r);
    ensure(flags.is_empty(), || flags.join("; "))
}

fn completion_arithmetic() -> Outcome {
    let s = catalog::i2();
    let c = lcc_completion(&s).map_err(|e| e.to_string())?;
    ensure(c.quantale.len() == 16, || format!("|L∨(I₂)| = {}", c.quantale.len()))?;
    let o = catalog::pair_discrete(2).quantale().map_err(|e| e.to_string())?;
    ensure(quantale_iso(&c.quantale, &o).is_some(), || "L∨(I₂) ≇ O(pair groupoid)".into())?;
    let (i, _) = partial_units_semigroup(&c.quantale).map_err(|e| e.to_string())?;
    ensure(semigroup_iso(&i, &s).is_some(), || "I(L∨(I₂)) ≇ I₂".into())
}

fn invariants() -> Outcome {
    let mut flags = Vec::new();
    for (name, q) in catalog_quantales().into_iter().chain(searched()) {
        flags.extend(red_flags(&report_of(&name, Structure::Quantale(q), true)));
    }
    for (name, g) in catalog::etale_groupoids().into_iter().chain(catalog::open_non_etale_groupoids()) {
        flags.extend(red_flags(&report_of(name, Structure::Groupoid(g), true)));
    }
    for (name, s) in catalog::acps() {
        flags.extend(red_flags(&report_of(name, Structure::InverseSemigroup(s), true)));
    }
    for (name, a) in [("I₂ action", catalog::i2_action()), ("chain action", catalog::chain_action())] {
        flags.extend(red_flags(&report_of(name, Structure::Action(a), true)));
    }
    ensure(flags.is_empty(), || format!("{} red flags: {}", flags.len(), flags.join("; ")))
}

fn oracles() -> Outcome {
    let mut compared = 0;
    for (name, q) in catalog_quantales().into_iter().chain(searched()) {
        if q.len() > 8 {
            continue;
        }
        let Ok(rm) = ReducedMult::new(&q) else { continue };
        let ideals = rm.space.enumerate(DEFAULT_CAP).map_err(|e| format!("{name}: {e}"))?;
        for a in q.elements() {
            let below: Vec<_> = ideals.iter().filter(|i| q.leq(rm.mu0(i), a)).collect();
            let top = below
                .iter()
                .find(|i| below.iter().all(|j| j.is_subset(i)))
                .ok_or_else(|| format!("{name}: no largest bi-ideal below {}", q.name(a)))?;
            let star = rm.mu0_star(a).map_err(|e| format!("{name}: {e}"))?;
            ensure(**top == star, || format!("{name}: mu0_star({}) disagrees", q.name(a)))?;
            compared += 1;
        }
    }
    ensure(compared > 0, || "no instance compared".into())?;

    for (name, g) in catalog::etale_groupoids().into_iter().chain(catalog::open_non_etale_groupoids()) {
        let q = g.quantale().map_err(|e| e.to_string())?;
        let bs = Bisections::enumerate(&q).map_err(|e| e.to_string())?;
        if let Some(c) = spatial_oracle(&g, &bs).iter().find(|c| !c.verdict.holds()) {
            return Err(format!("{name}: spatial oracle `{}` fails", c.name));
        }
    }

    for (name, a) in [("I₂", catalog::i2_action()), ("chain", catalog::chain_action())] {
        let (_, r) = germ_report(&a).map_err(|e| e.to_string())?;
        ensure(r.natural, || format!("{name} action is not natural"))?;
        ensure(r.checks.iter().all(|c| c.verdict.holds()), || format!("{name}: germs disagree"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("counterexamples qA and qB", Duration::from_secs(1), counterexamples),
        ("independence search on the Boolean frame", Duration::from_secs(300), independence),
        ("étale correspondence", Duration::from_secs(30), etale_correspondence),
        ("open non-étale Sierpiński pair", Duration::from_secs(10), open_non_etale),
        ("completion arithmetic for I₂", Duration::from_secs(5), completion_arithmetic),
        ("theorem invariants across instances", Duration::MAX, invariants),
        ("oracle equivalences", Duration::MAX, oracles),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = started.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name} ({} ms)", k + 1, elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({} ms): {e}", k + 1, elapsed.as_millis());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
