use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use pcor::automata::{build_2afa, decide, letters, DecideOptions, Mode, Outcome};
use pcor::derive::{closure_term, reach, semantics_via_derivatives, trace, LTerm, Label, Pointed};
use pcor::graphs::{glang, hom_exists, BiGraph, DEFAULT_STAR_DEPTH};
use pcor::model::{check_leq_on, eval, eval_lenient, glue, ModelSpace, Rel, Structure};
use pcor::syntax::{parse, parse_term, Name, Signature, Term, TermGen};

#[derive(Parser)]
#[command(name = "pcor", version, about = "Decide inclusions between relation-algebra terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide `lhs <= rhs` (or `lhs = rhs` with --equation).
    Decide(DecideArgs),
    /// Evaluate a term on a structure.
    Eval(EvalArgs),
    /// Print a derivation from `@x.term` to an accepting term.
    Trace(TraceArgs),
    /// Print the graph language of a term.
    Glang(GlangArgs),
    /// Run seeded self-checks.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SigArgs {
    /// Comma-separated test names.
    #[arg(long, value_delimiter = ',')]
    tests: Vec<String>,
    /// Comma-separated nominal names.
    #[arg(long, value_delimiter = ',')]
    nominals: Vec<String>,
}

impl SigArgs {
    fn signature(&self) -> Signature {
        Signature::new()
            .with_tests(self.tests.iter().map(String::as_str))
            .with_nominals(self.nominals.iter().map(String::as_str))
    }
}

#[derive(Args)]
struct DecideArgs {
    /// Left-hand side, inline or `@file`.
    #[arg(long)]
    lhs: String,
    /// Right-hand side, inline or `@file`.
    #[arg(long)]
    rhs: String,
    #[arg(long, default_value = "auto")]
    mode: Mode,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    max_model_size: u64,
    #[arg(long, default_value_t = DEFAULT_STAR_DEPTH as u64, value_parser = clap::value_parser!(u64).range(1..))]
    star_depth: u64,
    #[arg(long, default_value_t = 1 << 21, value_parser = clap::value_parser!(u64).range(1..))]
    letter_budget: u64,
    /// Product states explored before giving up.
    #[arg(long, default_value_t = 2_000_000)]
    max_states: usize,
    /// Check both inclusions.
    #[arg(long)]
    equation: bool,
    #[command(flatten)]
    sig: SigArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    /// Structure in JSON, inline or `@file`.
    #[arg(long)]
    structure: String,
    /// Term, inline or `@file`.
    #[arg(long)]
    term: String,
    #[command(flatten)]
    sig: SigArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    structure: String,
    #[arg(long)]
    term: String,
    /// Source vertex.
    #[arg(long)]
    from: String,
    /// Target vertex; any target when absent.
    #[arg(long)]
    to: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct GlangArgs {
    #[arg(long)]
    term: String,
    #[arg(long, default_value_t = DEFAULT_STAR_DEPTH)]
    star_depth: usize,
    #[arg(long, value_enum, default_value = "dot")]
    format: GraphFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name, or `all`.
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Inline text, or the contents of a file when prefixed by `@`.
fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(s.to_string()),
    }
}

fn read_term(s: &str, sig: &Signature) -> Result<Term> {
    let text = read_arg(s)?;
    parse_term(text.trim(), sig).map_err(|e| anyhow::anyhow!("{e}"))
}

fn read_structure(s: &str) -> Result<Structure> {
    Structure::from_json(&read_arg(s)?).map_err(|e| anyhow::anyhow!("{e}"))
}

fn rel_pairs(s: &Structure, r: &Rel) -> Vec<(String, String)> {
    r.pairs()
        .map(|(i, j)| (s.vertex(i).to_string(), s.vertex(j).to_string()))
        .collect()
}

fn cmd_decide(a: DecideArgs) -> Result<u8> {
    let sig = a.sig.signature();
    let lhs = read_term(&a.lhs, &sig)?;
    let rhs = read_term(&a.rhs, &sig)?;
    let options = DecideOptions {
        mode: a.mode,
        max_model_size: a.max_model_size as usize,
        star_depth: a.star_depth as usize,
        letter_budget: a.letter_budget as u128,
        max_states: a.max_states,
        equation: a.equation,
        jobs: a.jobs,
        seed: a.seed,
        ..DecideOptions::default()
    };
    let v = decide(lhs, rhs, &sig, &options)?;
    if let Some(c) = &v.counterexample {
        // Re-validate the countermodel through plain evaluation.
        let (l, r) = if c.reversed { (rhs, lhs) } else { (lhs, rhs) };
        let bad = check_leq_on(&c.structure, l, r)?;
        if bad.is_none() {
            bail!("countermodel failed re-validation");
        }
    }
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&v.to_json())?),
        Format::Text => {
            println!("{}", v.outcome.as_str());
            if let Some(c) = v.certificate {
                println!("certificate: {}", c.as_str());
            }
            if let Some(c) = &v.counterexample {
                let inc = if c.reversed { "rhs <= lhs" } else { "lhs <= rhs" };
                println!("fails: {inc} at ({}, {})", c.pair.0, c.pair.1);
                println!("structure: {}", c.structure);
            }
            for n in &v.bounds.notes {
                println!("note: {n}");
            }
        }
    }
    Ok(v.outcome.exit_code() as u8)
}

fn cmd_eval(a: EvalArgs) -> Result<u8> {
    let s = read_structure(&a.structure)?;
    let t = read_term(&a.term, &a.sig.signature())?;
    let r = eval(&s, t)?;
    let pairs = rel_pairs(&s, &r);
    match a.format {
        Format::Json => println!("{}", json!({ "term": t.render(), "pairs": pairs })),
        Format::Text => {
            let body: Vec<String> = pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
            println!("{{{}}}", body.join(", "));
        }
    }
    Ok(0)
}

fn cmd_trace(a: TraceArgs) -> Result<u8> {
    let s = read_structure(&a.structure)?;
    let t = read_term(&a.term, &Signature::new())?;
    let x = Name::new(&a.from);
    if !s.contains_vertex(x) {
        bail!("vertex {x} is not in the structure");
    }
    let z = a.to.as_deref().map(Name::new);
    let steps = trace(&s, t, x, z).unwrap_or_default();
    let start = LTerm::at(Label::V(x), t);
    match a.format {
        Format::Json => {
            let recs: Vec<_> = steps
                .iter()
                .map(|(st, m)| json!({ "step": st.to_string(), "term": m.render() }))
                .collect();
            println!("{}", json!({ "start": start.render(), "steps": recs }));
        }
        Format::Text => {
            println!("{}", start.render());
            for (st, m) in &steps {
                println!("  --{st}--> {}", m.render());
            }
        }
    }
    Ok(0)
}

fn graph_json(g: &BiGraph) -> serde_json::Value {
    json!({
        "vertices": g.len(),
        "sources": g.sources,
        "targets": g.targets,
        "edges": g.edges().iter().map(|e| json!({ "label": e.label.to_string(), "verts": e.verts })).collect::<Vec<_>>(),
    })
}

fn cmd_glang(a: GlangArgs) -> Result<u8> {
    let t = read_term(&a.term, &Signature::new())?;
    let gs = glang(t, a.star_depth);
    match a.format {
        GraphFormat::Json => println!("{}", serde_json::Value::Array(gs.iter().map(graph_json).collect())),
        GraphFormat::Dot => {
            for g in &gs {
                print!("{}", g.to_dot());
            }
        }
    }
    Ok(0)
}

struct SuiteResult {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

type Suite = fn(&mut ChaCha8Rng) -> std::result::Result<usize, String>;

const SUITES: &[(&str, Suite)] = &[
    ("derivatives", suite_derivatives),
    ("closure", suite_closure),
    ("graphs", suite_graphs),
    ("automata", suite_automata),
    ("decide", suite_decide),
];

fn random_structure(rng: &mut ChaCha8Rng, names: &[Name]) -> Structure {
    let space = ModelSpace::free(names);
    let size = rng.gen_range(1..=3);
    let total = space.count(size).expect("small space");
    space.structure(size, rng.gen_range(0..total))
}

/// Derivative semantics against direct evaluation.
fn suite_derivatives(rng: &mut ChaCha8Rng) -> std::result::Result<usize, String> {
    let names = [Name::new("a"), Name::new("b")];
    let g = TermGen::kl(&["a", "b"]);
    for _ in 0..200 {
        let s = random_structure(rng, &names);
        let t = g.up_to(rng, 7);
        if semantics_via_derivatives(&s, t) != eval(&s, t).map_err(|e| e.to_string())? {
            return Err(format!("{} on {}", t.render(), s));
        }
    }
    Ok(200)
}

/// Closure size bound and closure containment of reachable terms.
fn suite_closure(rng: &mut ChaCha8Rng) -> std::result::Result<usize, String> {
    let names = [Name::new("a"), Name::new("b")];
    let g = TermGen::kl(&["a", "b"]);
    for _ in 0..300 {
        let t = g.up_to(rng, 8);
        let s = random_structure(rng, &names);
        let p = Pointed::new(&s);
        let cl = closure_term(t, p.labels());
        let nl = p.labels().len();
        let bound = ((2 * nl * t.size()) as f64).powi(t.iw() as i32);
        if cl.len() as f64 > bound {
            return Err(format!("closure of {} has {} > {bound}", t.render(), cl.len()));
        }
        for &v in p.labels() {
            let start = LTerm::at(v, t);
            if let Some(m) = reach(&p, start).into_iter().find(|m| *m != start && !cl.contains(m)) {
                return Err(format!("{} escapes the closure of {}", m.render(), t.render()));
            }
        }
    }
    Ok(300)
}

/// Homomorphism semantics of graph languages against evaluation.
fn suite_graphs(rng: &mut ChaCha8Rng) -> std::result::Result<usize, String> {
    let names = [Name::new("a"), Name::new("b")];
    let mut g = TermGen::kl(&["a", "b"]);
    g.allow_star = false;
    g.allow_converse = true;
    g.allow_top = true;
    for _ in 0..100 {
        let t = g.up_to(rng, 6);
        let s = random_structure(rng, &names);
        let r = eval(&s, t).map_err(|e| e.to_string())?;
        let lang = glang(t, 0);
        for i in 0..s.len() {
            for j in 0..s.len() {
                let h = BiGraph::of_structure(&s, &[s.vertex(i)], &[s.vertex(j)]);
                let via = lang.iter().any(|g| hom_exists(g, &h).unwrap_or(false));
                if via != r.contains(i, j) {
                    return Err(format!("{} on {}", t.render(), s));
                }
            }
        }
    }
    Ok(100)
}

/// 2AFA acceptance against the glued semantics of random words.
fn suite_automata(rng: &mut ChaCha8Rng) -> std::result::Result<usize, String> {
    let alphabet = letters(2, &[Name::new("a"), Name::new("b")]);
    let g = TermGen::kl(&["a", "b"]);
    for _ in 0..60 {
        let t = g.up_to(rng, 6);
        let len = rng.gen_range(1..=3);
        let word: Vec<Structure> = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect();
        let glued = glue(&word);
        let r = eval_lenient(&glued.structure, t);
        let first = word[0].universe();
        let idx = |x: Name| glued.structure.index_of(glued.image(0, x).expect("first bag").name()).expect("glued vertex");
        let want = first.iter().any(|&x| first.iter().any(|&y| r.contains(idx(x), idx(y))));
        if build_2afa(2, t).accepts(&word) != want {
            return Err(format!("{} on a word of length {len}", t.render()));
        }
    }
    Ok(60)
}

/// Known verdicts, with countermodels re-validated.
fn suite_decide(_rng: &mut ChaCha8Rng) -> std::result::Result<usize, String> {
    let cases = [
        ("a", "a", Outcome::Valid),
        ("a;(b & c)", "(a;b) & (a;c)", Outcome::Valid),
        ("a", "b", Outcome::Invalid),
        ("a & b", "0", Outcome::Invalid),
        ("a;b", "b;a", Outcome::Invalid),
        ("a*", "(a;a)*", Outcome::Invalid),
    ];
    let sig = Signature::new();
    for (l, r, want) in cases {
        let (tl, tr) = (parse(l).map_err(|e| e.to_string())?, parse(r).map_err(|e| e.to_string())?);
        let v = decide(tl, tr, &sig, &DecideOptions::default()).map_err(|e| e.to_string())?;
        if v.outcome != want {
            return Err(format!("{l} <= {r}: got {}", v.outcome.as_str()));
        }
        if let Some(c) = v.counterexample {
            if check_leq_on(&c.structure, tl, tr).map_err(|e| e.to_string())?.is_none() {
                return Err(format!("{l} <= {r}: countermodel does not re-validate"));
            }
        }
    }
    Ok(cases.len())
}

fn cmd_check(a: CheckArgs) -> Result<u8> {
    let selected: Vec<&(&str, Suite)> = if a.suite == "all" {
        SUITES.iter().collect()
    } else {
        match SUITES.iter().find(|(n, _)| *n == a.suite) {
            Some(s) => vec![s],
            None => {
                let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
                bail!("unknown suite `{}`; known: all, {}", a.suite, known.join(", "));
            }
        }
    };
    let mut results = Vec::new();
    for (name, run) in selected {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let start = Instant::now();
        let r = run(&mut rng);
        let (cases, failure) = match r {
            Ok(n) => (n, None),
            Err(e) => (0, Some(e)),
        };
        if a.format == Format::Text {
            let status = if failure.is_none() { "PASS" } else { "FAIL" };
            println!("{status} {name} ({cases} cases, {:.2?})", start.elapsed());
            if let Some(f) = &failure {
                println!("  {f}");
            }
        }
        results.push(SuiteResult { name, cases, failure });
    }
    if a.format == Format::Json {
        let out: Vec<_> = results
            .iter()
            .map(|r| json!({ "suite": r.name, "pass": r.failure.is_none(), "cases": r.cases, "failure": r.failure }))
            .collect();
        println!("{}", json!({ "seed": a.seed, "prng": "ChaCha8", "suites": out }));
    }
    Ok(if results.iter().all(|r| r.failure.is_none()) { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Decide(a) => cmd_decide(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Glang(a) => cmd_glang(a),
        Command::Check(a) => cmd_check(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
