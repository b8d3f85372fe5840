//! Command-line front end. Exit codes: 0 clean, 1 classification-negative,
//! 2 red flag, 3 input error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bisections::Bisections;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::format::{emit, load, Structure, StructureFile};
use crate::groupoid::groupoid_of;
use crate::report::{self, Options, Report, DEFAULT_SEED};
use crate::search::{frame_spec, search, Pattern, DEFAULT_SEARCH_CAP};
use crate::semigroup::{lcc_completion, partial_units_semigroup};
use crate::tensor::DEFAULT_CAP;

#[derive(Parser, Debug)]
#[command(name = "quantal", version, about = "Finite open quantal frames and open groupoids")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Size cap for exhaustive enumeration (tensor elements, candidate tables).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print counterexample witnesses.
    #[arg(long, global = true)]
    pub witnesses: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every applicable checker on a structure file.
    Check {
        file: PathBuf,
        /// Also run the dual constructions there and back.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Enumerate involutive quantal frames on a frame and filter by an axiom pattern.
    Search {
        /// `powerset:k`, `chain:n`, or a frame/quantale file.
        frame: String,
        /// Boolean pattern over B, O, R, U, semiopen, open, unital, inverse,
        /// multiplicative, wm; e.g. `B∧O∧U∧¬R`.
        pattern: String,
    },
    /// Build the dual or derived structure and emit it as a structure file.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local bisections, their product table and weak multiplicativity.
    Bisections { file: PathBuf },
    /// The étale cover: Q̂, embeddability and the cover functor.
    Cover { file: PathBuf },
    /// Emit-load and dual-construction round trips.
    Roundtrip { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Frame,
    Quantale,
    Groupoid,
    InverseSemigroup,
    Cover,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) | Error::NotSpatial(_) | Error::NotAcp(_) | Error::NotUnital => 1,
        Error::Inconsistency(_) => 2,
        _ => 3,
    }
}

/// Runs a parsed command, writing to stdout/stderr; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    let opts = |roundtrip| Options {
        cap: g.cap.unwrap_or(DEFAULT_CAP),
        seed: g.seed,
        roundtrip,
    };
    let started = Instant::now();
    let report = match &cli.command {
        Command::Check { file, roundtrip } => report::check(&load(file)?, &opts(*roundtrip))?,
        Command::Bisections { file } => report::bisections_report(&load(file)?)?,
        Command::Cover { file } => report::cover_command(&load(file)?, &opts(false))?,
        Command::Roundtrip { file } => report::roundtrip(&load(file)?)?,
        Command::Search { frame, pattern } => return run_search(g, frame, pattern),
        Command::Convert { file, to, out } => return convert(&load(file)?, *to, out.as_ref()),
    };
    print_report(&report, g);
    eprintln!("done in {} ms", started.elapsed().as_millis());
    Ok(report.exit_code())
}

fn print_report(r: &Report, g: &Global) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(r).expect("reports serialize"));
    } else {
        print!("{}", r.render(g.witnesses));
    }
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    frame: &'a str,
    #[serde(flatten)]
    report: &'a crate::search::SearchReport,
    witnesses: Vec<String>,
}

fn run_search(g: &Global, frame: &str, pattern: &str) -> Result<i32> {
    let l = frame_spec(frame)?;
    let p: Pattern = pattern.parse()?;
    let r = search(&l, &p, g.cap.unwrap_or(DEFAULT_SEARCH_CAP))?;
    let files: Vec<String> = r
        .witnesses
        .iter()
        .enumerate()
        .map(|(k, q)| emit(&Structure::Quantale(q.clone()), Some(&format!("{} witness {}", r.pattern, k + 1))))
        .collect();
    if g.json {
        let out = SearchOutput {
            frame,
            report: &r,
            witnesses: files,
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
        return Ok(0);
    }
    println!("frame {frame} ({} elements), pattern {}", r.frame_elements, r.pattern);
    println!("involutive quantal frames up to isomorphism: {}", r.structures);
    println!("witnesses: {}", r.witnesses.len());
    for (k, q) in r.witnesses.iter().enumerate() {
        let js = q.frame().join_irreducibles();
        let prods: Vec<String> = js
            .iter()
            .flat_map(|&a| js.iter().map(move |&b| (a, b)))
            .map(|(a, b)| format!("{}·{} = {}", q.name(a), q.name(b), q.name(q.mul(a, b))))
            .collect();
        let invs: Vec<String> = js
            .iter()
            .map(|&a| format!("{}* = {}", q.name(a), q.name(q.star(a))))
            .collect();
        println!("  #{}: {}; {}", k + 1, prods.join(", "), invs.join(", "));
        if g.witnesses {
            println!("{}", files[k]);
        }
    }
    Ok(0)
}

fn convert(file: &StructureFile, to: Target, out: Option<&PathBuf>) -> Result<i32> {
    let not = |what: &str| Error::Hypothesis(format!("cannot convert a {} to {what}", file.structure.kind()));
    let built = match (to, &file.structure) {
        (Target::Frame, s) => match s {
            Structure::Quantale(q) => Structure::Frame(q.frame().clone()),
            Structure::Groupoid(g) => Structure::Frame(g.quantale()?.frame().clone()),
            _ => return Err(not("a frame")),
        },
        (Target::Quantale, Structure::Quantale(_)) => return Err(not("a quantale")),
        (Target::Quantale, _) => Structure::Quantale(report::quantale_of_file(file)?),
        (Target::Groupoid, Structure::Groupoid(_)) => return Err(not("a groupoid")),
        (Target::Groupoid, Structure::Action(a)) => Structure::Groupoid(crate::germ::germ_groupoid(a)?),
        (Target::Groupoid, _) => Structure::Groupoid(groupoid_of(&report::quantale_of_file(file)?)?),
        (Target::InverseSemigroup, Structure::InverseSemigroup(_)) => return Err(not("an inverse semigroup")),
        (Target::InverseSemigroup, _) => {
            Structure::InverseSemigroup(partial_units_semigroup(&report::quantale_of_file(file)?)?.0)
        }
        (Target::Cover, _) => {
            let q = report::quantale_of_file(file)?;
            let bs = Bisections::enumerate(&q)?;
            let wm = bs.weak_multiplicativity();
            Structure::Quantale(Cover::build(&bs, &wm)?.qhat().clone())
        }
    };
    let title = format!("{} of {}", built.kind(), file.title.as_deref().unwrap_or(&file.path));
    let text = emit(&built, Some(&title));
    match out {
        Some(p) => std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    eprintln!("{}", summary(&built));
    Ok(0)
}

fn summary(s: &Structure) -> String {
    match s {
        Structure::Frame(l) => format!("frame with {} elements", l.len()),
        Structure::Quantale(q) => {
            let c = q.classify();
            format!(
                "quantale with {} elements: {}, {}",
                q.len(),
                if c.open() { "open" } else { "not open" },
                if c.inverse() { "inverse" } else { "not inverse" }
            )
        }
        Structure::Groupoid(g) => format!(
            "groupoid with {} objects, {} arrows: {}",
            g.object_count(),
            g.arrow_count(),
            if g.classify().etale.holds() { "étale" } else { "not étale" }
        ),
        Structure::InverseSemigroup(s) => format!(
            "inverse semigroup with {} elements{}",
            s.len(),
            if lcc_completion(s).is_ok() { ", complete" } else { "" }
        ),
        Structure::Action(a) => format!("action of {} elements", a.semigroup.len()),
    }
}
