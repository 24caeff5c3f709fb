//! `semitorsion` command-line front end.
//!
//! Exit codes: 0 success, 1 verification or consistency failure, 2 usage
//! error (bad flags or invalid mathematical input).

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semitorsion::oracle::DEFAULT_MODULUS;
use semitorsion::pullback::pullback_report;
use semitorsion::search::{run_search, SearchConfig};
use semitorsion::semigroup::parse_int_list;
use semitorsion::verify::run_all;
use semitorsion::{
    end_ring, enumerate_ideals, lemma21_report, torsion_length_oracle, torsion_profile_with, Base,
    EngineRegistry, Error, SIdeal, Semigroup, DEFAULT_ENGINE,
};

#[derive(Parser, Debug)]
#[command(name = "semitorsion", version, about = "Torsion in tensor products of monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Semigroup invariants, symmetry, E = End(m) and the E/R report.
    Info(InfoArgs),
    /// Every S-ideal up to shift, with principal/reflexive/E-module flags.
    Ideals(InfoArgs),
    /// Graded fiber profile of M ⊗ N over R or E.
    Tensor(TensorArgs),
    /// Exhaustive search for torsion-free tensor products of non-free ideals.
    Search(SearchArgs),
    /// Report on the fixed conductor-square example.
    Pullback(JsonArgs),
    /// Runs every acceptance criterion and prints a PASS/FAIL table.
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
struct JsonArgs {
    /// Emit key-sorted JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct InfoArgs {
    /// Semigroup generators, e.g. 4,5,6.
    #[arg(long)]
    gens: String,
    #[command(flatten)]
    out: JsonArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    R,
    E,
}

#[derive(Args, Debug)]
struct TensorArgs {
    #[arg(long)]
    gens: String,
    /// Generators of M (integers, may be negative), e.g. 0,1.
    #[arg(long, allow_hyphen_values = true)]
    m: String,
    /// Generators of N.
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, value_enum, default_value = "r")]
    base: BaseArg,
    /// Recount every fiber with the linear-algebra oracle and compare.
    #[arg(long)]
    oracle: bool,
    /// Field for the oracle: 0 for the rationals or an odd prime.
    #[arg(long, requires = "oracle", default_value_t = DEFAULT_MODULUS)]
    modulus: u64,
    /// Fiber engine: union-find, rank-modp or rank-rational.
    #[arg(long, default_value = DEFAULT_ENGINE)]
    engine: String,
    #[command(flatten)]
    out: JsonArgs,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 4)]
    max_genus: usize,
    /// Include non-symmetric semigroups.
    #[arg(long)]
    all: bool,
    /// Skip the oracle re-check of each hit.
    #[arg(long)]
    no_oracle: bool,
    /// JSONL output file; hits go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=256))]
    jobs: u16,
    /// Continue from `<out>.resume`.
    #[arg(long, requires = "out")]
    resume: bool,
    /// Only semigroups with this many minimal generators.
    #[arg(long)]
    embedding_dim: Option<usize>,
    /// Only semigroups of this multiplicity.
    #[arg(long)]
    multiplicity: Option<i64>,
    #[command(flatten)]
    json: JsonArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=256))]
    jobs: u16,
    #[command(flatten)]
    out: JsonArgs,
}

/// A finished command: what to print and whether its checks held.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(outcome) => {
            // A closed pipe (e.g. `| head`) is not an error.
            if !outcome.text.is_empty() {
                let _ = writeln!(io::stdout().lock(), "{}", outcome.text.trim_end());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 1;
    };
    match e {
        Error::EmptyGenerators
        | Error::InvalidGenerator(_)
        | Error::NotCoprime { .. }
        | Error::GenusCapExceeded { .. }
        | Error::SemigroupMismatch { .. }
        | Error::PrincipalMaximalIdeal
        | Error::NotClosedUnderRing { .. }
        | Error::FiberTooLarge { .. }
        | Error::InvalidModulus(_)
        | Error::UnknownEngine(_)
        | Error::OutputUnwritable { .. }
        | Error::ResumeMismatch { .. }
        | Error::Parse { .. } => 2,
        Error::NotARing { .. }
        | Error::StabilizationFailure { .. }
        | Error::ProductMismatch { .. }
        | Error::OracleDisagreement(_)
        | Error::NotClosed(_)
        | Error::CorruptResume(_)
        | Error::Io(_)
        | Error::Json(_) => 1,
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Info(a) => cmd_info(&a),
        Command::Ideals(a) => cmd_ideals(&a),
        Command::Tensor(a) => cmd_tensor(&a),
        Command::Search(a) => cmd_search(&a),
        Command::Pullback(a) => cmd_pullback(&a),
        Command::VerifyPaper(a) => cmd_verify(&a),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("Value always serializes")
}

fn semigroup(gens: &str) -> Result<Arc<Semigroup>> {
    Ok(Arc::new(gens.parse::<Semigroup>()?))
}

fn ideal(s: &Arc<Semigroup>, gens: &str) -> Result<SIdeal> {
    Ok(SIdeal::new(s, &parse_int_list(gens)?)?)
}

fn cmd_info(a: &InfoArgs) -> Result<Outcome> {
    let s = semigroup(&a.gens)?;
    let dvr = s.is_naturals();
    let e = end_ring(&s)?;
    let lemma21 = if dvr { Value::Null } else { serde_json::to_value(lemma21_report(&s)?)? };
    let report = json!({
        "semigroup": s.min_gens(),
        "multiplicity": s.multiplicity(),
        "embedding_dimension": s.embedding_dimension(),
        "frobenius": s.frobenius(),
        "genus": s.genus(),
        "gaps": s.gaps(),
        "apery": s.apery(),
        "symmetric": s.is_symmetric(),
        "dvr": dvr,
        "e_ring": {
            "ring_gens": e.ring_gens(),
            "extra_elements": e.extra_elements(),
            "trivial": e.is_trivial(),
        },
        "lemma21": lemma21,
    });
    if a.out.json {
        return Ok(Outcome::ok(pretty(&report)));
    }
    let mut text = format!(
        "S = <{s}>\nmultiplicity {}  embedding dimension {}  frobenius {}  genus {}\ngaps {:?}\napery {:?}\nsymmetric {}\n",
        s.multiplicity(),
        s.embedding_dimension(),
        s.frobenius(),
        s.genus(),
        s.gaps(),
        s.apery(),
        s.is_symmetric()
    );
    if dvr {
        text.push_str("DVR: the maximal ideal is principal, so R = E = R-bar\n");
    } else {
        text.push_str(&format!(
            "E = <{}>  extra elements {:?}\nE/R simple: {}  y = {}  E = (0, y): {}\n",
            e.ring_gens().iter().map(i64::to_string).collect::<Vec<_>>().join(","),
            e.extra_elements(),
            report["lemma21"]["simple"],
            report["lemma21"]["y"],
            report["lemma21"]["generator_pair_ok"],
        ));
    }
    Ok(Outcome::ok(text))
}

fn cmd_ideals(a: &InfoArgs) -> Result<Outcome> {
    let s = semigroup(&a.gens)?;
    let e = end_ring(&s)?;
    let mut rows = Vec::new();
    for i in enumerate_ideals(&s) {
        rows.push(json!({
            "gens": i.gens(),
            "conductor": i.conductor(),
            "principal": i.is_principal(),
            "reflexive": i.bidual().same_set(&i),
            "e_module": i.is_module_over(&e)?,
        }));
    }
    let report = json!({ "semigroup": s.min_gens(), "count": rows.len(), "ideals": rows });
    if a.out.json {
        return Ok(Outcome::ok(pretty(&report)));
    }
    let mut text = format!("{} S-ideals of <{s}> up to shift\n", rows.len());
    for r in &rows {
        let flags: Vec<&str> = [("principal", "principal"), ("reflexive", "reflexive"), ("e_module", "E-module")]
            .iter()
            .filter(|(k, _)| r[*k] == true)
            .map(|(_, label)| *label)
            .collect();
        text.push_str(&format!("{}  conductor {}  {}\n", r["gens"], r["conductor"], flags.join(" ")));
    }
    Ok(Outcome::ok(text))
}

fn cmd_tensor(a: &TensorArgs) -> Result<Outcome> {
    let s = semigroup(&a.gens)?;
    let m = ideal(&s, &a.m).context("parsing --m")?;
    let n = ideal(&s, &a.n).context("parsing --n")?;
    let engine = EngineRegistry::builtin().create(&a.engine)?;
    let e = end_ring(&s)?;
    let base = match a.base {
        BaseArg::R => Base::R,
        BaseArg::E => Base::E(&e),
    };
    let profile = torsion_profile_with(&m, &n, &base, engine.as_ref())?;
    let oracle = if a.oracle {
        let t = torsion_length_oracle(&m, &n, &base, a.modulus)?;
        if t != profile.torsion_length {
            return Err(Error::OracleDisagreement(format!(
                "<{s}> M={m} N={n} over {}: engine {} gives {}, oracle gives {t}",
                base.label(),
                engine.name(),
                profile.torsion_length
            ))
            .into());
        }
        json!({ "torsion_length": t, "modulus": a.modulus, "agrees": true })
    } else {
        Value::Null
    };
    let report = json!({
        "semigroup": s.min_gens(),
        "m": m,
        "n": n,
        "base": base.label(),
        "engine": engine.name(),
        "profile": profile,
        "torsion_length": profile.torsion_length,
        "torsion_free": profile.torsion_length == 0,
        "oracle": oracle,
    });
    if a.out.json {
        return Ok(Outcome::ok(pretty(&report)));
    }
    let mut text = format!(
        "M = {m}, N = {n} over {} of <{s}> ({} engine)\ndegree  classes  in_product\n",
        base.label(),
        engine.name()
    );
    for row in &profile.rows {
        text.push_str(&format!("{:>6}  {:>7}  {}\n", row.degree, row.class_count, row.in_product));
    }
    text.push_str(&format!(
        "stable from degree {}\ntorsion_length {}\n",
        profile.degree_stable, profile.torsion_length
    ));
    if a.oracle {
        text.push_str(&format!("oracle agrees (modulus {})\n", a.modulus));
    }
    Ok(Outcome::ok(text))
}

fn cmd_search(a: &SearchArgs) -> Result<Outcome> {
    let cfg = SearchConfig {
        max_genus: a.max_genus,
        symmetric_only: !a.all,
        oracle_check: !a.no_oracle,
        output_path: a.out.clone(),
        worker_count: a.jobs as usize,
        embedding_dim: a.embedding_dim,
        multiplicity: a.multiplicity,
        resume: a.resume,
    };
    let outcome = run_search(&cfg)?;
    let summary = serde_json::to_value(&outcome.summary)?;
    let mut text = String::new();
    if a.out.is_none() {
        for hit in &outcome.hits {
            if a.json.json {
                text.push_str(&hit.to_json_line());
            } else {
                text.push_str(&format!(
                    "<{}> M={:?} N={:?} torsion {} oracle {}",
                    hit.semigroup.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
                    hit.m_gens,
                    hit.n_gens,
                    hit.torsion_length,
                    hit.oracle_confirmed
                ));
            }
            text.push('\n');
        }
    }
    // The summary is always one JSON object on the last line of stdout.
    text.push_str(&summary.to_string());
    Ok(Outcome::ok(text))
}

fn cmd_pullback(a: &JsonArgs) -> Result<Outcome> {
    let report = serde_json::to_value(pullback_report()?)?;
    if a.json {
        return Ok(Outcome::ok(pretty(&report)));
    }
    let l = &report["lengths"];
    let r = &report["rbar"];
    let e = &report["end_of_m"];
    let g = &e["deep_guard"];
    let text = format!(
        "image of R: dim {}   image of m: dim {}\n\
         len_B {}  len_A {}  A Gorenstein by Bass: {}\n\
         B: {} maximal ideals, 2-generated over A: {} via {}\n\
         E-bar: dim {}  ring {}  local {}  residue dim {}  simple over R {}\n\
         D/f^2 guard: ambient {} conductor {} R {} m {} E {} (E/f {}) ring {} local {} onto E-bar {}\n",
        report["dim_image_r"],
        report["dim_image_m"],
        l["len_b"],
        l["len_a"],
        l["bass_gorenstein"],
        r["max_ideal_count"],
        r["two_generated_over_a"],
        r["generators"],
        e["dim_e_bar"],
        e["is_ring"],
        e["is_local"],
        e["residue_dim"],
        e["simple_over_r"],
        g["ambient_dim"],
        g["conductor_dim"],
        g["dim_r"],
        g["dim_m"],
        g["dim_e"],
        g["dim_e_mod_conductor"],
        g["is_ring"],
        g["is_local"],
        g["projects_onto_e_bar"],
    );
    Ok(Outcome::ok(text))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let reports = run_all(a.jobs as usize);
    let passed = reports.iter().all(|r| r.passed);
    let text = if a.out.json {
        pretty(&json!({ "passed": passed, "criteria": reports }))
    } else {
        let mut t: String = reports.iter().map(|r| r.line() + "\n").collect();
        let ok = reports.iter().filter(|r| r.passed).count();
        t.push_str(&format!("{ok}/{} criteria passed\n", reports.len()));
        t
    };
    Ok(Outcome { text, passed })
}
