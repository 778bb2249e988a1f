use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use super::build::{Cl, KlAutomaton};
use super::constraints::{Constraint, ConstraintDfa};
use super::fast::FastDfa;
use super::horn::HornDfa;
use super::letters::{quotient_letters, AlphabetSpec};
use super::nfa::Dfa;
use crate::graphs::{oracle_leq, OracleResult};
use crate::model::{check_leq_on, class_membership, glue, Class, EvalError, ModelSpace, Structure};
use crate::syntax::{
    complement, dual, to_kl, wrap_for_decision, Name, Node, Signature, Term, WrapError, C_TOP,
    DUAL_PREFIX,
};

/// Which stages of the pipeline run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Refutation, then the graph oracle when exact, then automata.
    #[default]
    Auto,
    Oracle,
    Automata,
    Refute,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "oracle" => Ok(Mode::Oracle),
            "automata" => Ok(Mode::Automata),
            "refute" => Ok(Mode::Refute),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub mode: Mode,
    /// Largest universe tried by the refutation sweep.
    pub max_model_size: usize,
    /// Structures per universe size beyond which that size is skipped.
    pub model_budget: u128,
    /// Star unfoldings used by the graph oracle.
    pub star_depth: usize,
    /// Maximal number of raw letters.
    pub letter_budget: u128,
    /// Maximal number of product states explored.
    pub max_states: usize,
    /// Check both inclusions.
    pub equation: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Recorded in the output metadata.
    pub seed: u64,
}

impl Default for DecideOptions {
    fn default() -> DecideOptions {
        DecideOptions {
            mode: Mode::Auto,
            max_model_size: 3,
            model_budget: 1 << 20,
            star_depth: crate::graphs::DEFAULT_STAR_DEPTH,
            letter_budget: 1 << 21,
            max_states: 2_000_000,
            equation: false,
            jobs: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Wrap(#[from] WrapError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Valid,
    Invalid,
    Unknown,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Valid => "valid",
            Outcome::Invalid => "invalid",
            Outcome::Unknown => "unknown",
        }
    }

    /// Process exit code: 0 valid, 1 invalid, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Valid => 0,
            Outcome::Invalid => 1,
            Outcome::Unknown => 2,
        }
    }
}

/// The stage that settled a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    Syntactic,
    Refutation,
    Oracle,
    Automata,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Syntactic => "syntactic",
            Certificate::Refutation => "refutation",
            Certificate::Oracle => "oracle",
            Certificate::Automata => "automata",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub structure: Structure,
    pub pair: (Name, Name),
    /// `true` when the failing inclusion is `rhs ≤ lhs`.
    pub reversed: bool,
}

/// What was searched.
#[derive(Clone, Debug, Default)]
pub struct Bounds {
    pub k: Option<usize>,
    /// Raw letters of the sparse alphabet.
    pub letters: Option<u128>,
    /// Letter classes after quotienting.
    pub classes: Option<usize>,
    /// Product states visited.
    pub explored: usize,
    pub engines: Vec<String>,
    /// Largest universe size fully swept.
    pub models_up_to: usize,
    pub models_checked: u128,
    pub model_sizes_skipped: Vec<usize>,
    pub star_depth: Option<usize>,
    pub notes: Vec<String>,
}

impl Bounds {
    fn merge(&mut self, o: Bounds) {
        self.k = self.k.max(o.k);
        self.letters = self.letters.max(o.letters);
        self.classes = self.classes.max(o.classes);
        self.explored += o.explored;
        self.engines.extend(o.engines);
        self.engines.dedup();
        self.models_up_to = self.models_up_to.max(o.models_up_to);
        self.models_checked += o.models_checked;
        self.model_sizes_skipped.extend(o.model_sizes_skipped);
        self.model_sizes_skipped.sort_unstable();
        self.model_sizes_skipped.dedup();
        self.star_depth = self.star_depth.max(o.star_depth);
        self.notes.extend(o.notes);
    }

    fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "letters": self.letters.map(|l| l.to_string()),
            "classes": self.classes,
            "explored": self.explored,
            "engines": self.engines,
            "models_up_to": self.models_up_to,
            "models_checked": self.models_checked.to_string(),
            "model_sizes_skipped": self.model_sizes_skipped,
            "star_depth": self.star_depth,
            "notes": self.notes,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Option<Certificate>,
    pub counterexample: Option<Counterexample>,
    pub bounds: Bounds,
    pub seed: u64,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.outcome.as_str(),
            "certificate": self.certificate.map(Certificate::as_str),
            "counterexample": self.counterexample.as_ref().map(|c| json!({
                "structure": c.structure.to_json_value(),
                "pair": [c.pair.0.as_str(), c.pair.1.as_str()],
                "inclusion": if c.reversed { "rhs<=lhs" } else { "lhs<=rhs" },
            })),
            "bounds": self.bounds.to_json(),
            "metadata": {
                "prng": "ChaCha8",
                "seed": self.seed,
                "k_choice": "iw(wrapped normalized lhs) + #nominals + 1",
            },
        })
    }
}

/// Decides `t1 ≤ t2` (or `t1 = t2` with `options.equation`) over the
/// structures where the signature's tests and nominals behave as such.
pub fn decide(t1: Term, t2: Term, sig: &Signature, options: &DecideOptions) -> Result<Verdict, DecideError> {
    match options.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| DecideError::Internal(e.to_string()))?;
            pool.install(|| decide_in_pool(t1, t2, sig, options))
        }
        None => decide_in_pool(t1, t2, sig, options),
    }
}

fn decide_in_pool(t1: Term, t2: Term, sig: &Signature, options: &DecideOptions) -> Result<Verdict, DecideError> {
    let forward = decide_leq(t1, t2, sig, options)?;
    if !options.equation || forward.outcome == Outcome::Invalid {
        return Ok(forward);
    }
    let mut backward = decide_leq(t2, t1, sig, options)?;
    if let Some(c) = backward.counterexample.as_mut() {
        c.reversed = true;
    }
    let outcome = match (forward.outcome, backward.outcome) {
        (_, Outcome::Invalid) => Outcome::Invalid,
        (Outcome::Valid, Outcome::Valid) => Outcome::Valid,
        _ => Outcome::Unknown,
    };
    let certificate = match outcome {
        Outcome::Invalid => backward.certificate,
        // The weaker of the two certificates.
        Outcome::Valid => [forward.certificate, backward.certificate]
            .into_iter()
            .flatten()
            .find(|&c| c != Certificate::Syntactic)
            .or(forward.certificate),
        Outcome::Unknown => None,
    };
    let mut bounds = forward.bounds;
    bounds.merge(backward.bounds);
    Ok(Verdict {
        outcome,
        certificate,
        counterexample: backward.counterexample,
        bounds,
        seed: options.seed,
    })
}

/// The names of a term grouped by role.
struct Roles {
    free: Vec<Name>,
    tests: Vec<Name>,
    noms: Vec<Name>,
}

fn roles(terms: &[Term], sig: &Signature) -> Roles {
    let mut names = BTreeSet::new();
    for t in terms {
        names.extend(t.names());
    }
    let mut r = Roles {
        free: vec![],
        tests: vec![],
        noms: vec![],
    };
    for a in names {
        if sig.tests.contains(a.as_str()) {
            r.tests.push(a);
        } else if sig.nominals.contains(a.as_str()) {
            r.noms.push(a);
        } else {
            r.free.push(a);
        }
    }
    r
}

fn classes_of(r: &Roles) -> Vec<Class> {
    let mut c = Vec::new();
    if !r.tests.is_empty() {
        c.push(Class::Tests(r.tests.clone()));
    }
    if !r.noms.is_empty() {
        c.push(Class::Noms(r.noms.clone()));
    }
    c
}

fn verdict(outcome: Outcome, certificate: Option<Certificate>, bounds: Bounds, seed: u64) -> Verdict {
    Verdict {
        outcome,
        certificate,
        counterexample: None,
        bounds,
        seed,
    }
}

fn decide_leq(t1: Term, t2: Term, sig: &Signature, options: &DecideOptions) -> Result<Verdict, DecideError> {
    let mut bounds = Bounds::default();
    if t1 == t2 {
        return Ok(verdict(Outcome::Valid, Some(Certificate::Syntactic), bounds, options.seed));
    }
    let r = roles(&[t1, t2], sig);
    let classes = classes_of(&r);

    if matches!(options.mode, Mode::Auto | Mode::Refute) {
        let sweep = refute_models(t1, t2, &r, options.max_model_size, options.model_budget)?;
        bounds.models_up_to = sweep.up_to;
        bounds.models_checked = sweep.checked;
        bounds.model_sizes_skipped = sweep.skipped;
        if let Some((structure, pair)) = sweep.found {
            let mut v = verdict(Outcome::Invalid, Some(Certificate::Refutation), bounds, options.seed);
            v.counterexample = Some(Counterexample {
                structure,
                pair,
                reversed: false,
            });
            return Ok(v);
        }
        if options.mode == Mode::Refute {
            return Ok(verdict(Outcome::Unknown, None, bounds, options.seed));
        }
    }

    let oracle_applies = classes.is_empty() && !has_compl(t1) && !has_compl(t2);
    if matches!(options.mode, Mode::Auto | Mode::Oracle) && oracle_applies {
        let exact = t1.is_star_free();
        if exact || options.mode == Mode::Oracle {
            bounds.star_depth = Some(options.star_depth);
            match oracle_leq(t1, t2, options.star_depth) {
                OracleResult::Valid => {
                    return Ok(verdict(Outcome::Valid, Some(Certificate::Oracle), bounds, options.seed))
                }
                OracleResult::Invalid(g) => {
                    let (s, _, _) = g.to_structure();
                    let s = s.restrict_names(&r.free);
                    let pair = certify(&s, t1, t2, &[])?;
                    let mut v = verdict(Outcome::Invalid, Some(Certificate::Oracle), bounds, options.seed);
                    v.counterexample = Some(Counterexample {
                        structure: s,
                        pair,
                        reversed: false,
                    });
                    return Ok(v);
                }
                OracleResult::ValidUpToDepth(d) => {
                    bounds.notes.push(format!("graph oracle found no counterexample up to star depth {d}"));
                }
            }
        }
    }
    if options.mode == Mode::Oracle {
        return Ok(verdict(Outcome::Unknown, None, bounds, options.seed));
    }
    automata_leq(t1, t2, sig, &r, &classes, options, bounds)
}

fn has_compl(t: Term) -> bool {
    matches!(t.node(), Node::Compl(_)) || t.children().into_iter().any(has_compl)
}

/// Re-checks a countermodel on the original terms.
fn certify(s: &Structure, t1: Term, t2: Term, classes: &[Class]) -> Result<(Name, Name), DecideError> {
    if !class_membership(s, classes) {
        return Err(DecideError::Internal(format!(
            "countermodel violates its class: {}",
            s.to_json()
        )));
    }
    check_leq_on(s, t1, t2)?.ok_or_else(|| {
        DecideError::Internal(format!(
            "countermodel does not refute {} <= {}: {}",
            t1.render(),
            t2.render(),
            s.to_json()
        ))
    })
}

/// Result of [`refute_models`].
#[derive(Clone, Debug, Default)]
pub struct Sweep {
    pub found: Option<(Structure, (Name, Name))>,
    pub up_to: usize,
    pub checked: u128,
    pub skipped: Vec<usize>,
}

/// Searches class-compliant structures over the names of both terms, up to
/// `max_n` vertices, smallest first. Sizes with more than `budget`
/// structures are skipped.
fn refute_models(t1: Term, t2: Term, r: &Roles, max_n: usize, budget: u128) -> Result<Sweep, DecideError> {
    let space = ModelSpace {
        free: r.free.clone(),
        tests: r.tests.clone(),
        noms: r.noms.clone(),
        ..ModelSpace::default()
    };
    let mut sweep = Sweep::default();
    for n in 1..=max_n {
        let total = match space.count(n) {
            Some(c) if c <= budget => c as u64,
            _ => {
                sweep.skipped.push(n);
                continue;
            }
        };
        let hit = (0..total).into_par_iter().find_first(|&i| {
            let s = space.structure(n, i as u128);
            matches!(check_leq_on(&s, t1, t2), Ok(Some(_)) | Err(_))
        });
        sweep.checked += total as u128;
        if let Some(i) = hit {
            let s = space.structure(n, i as u128);
            let pair = certify(&s, t1, t2, &classes_of(r))?;
            sweep.found = Some((s, pair));
            return Ok(sweep);
        }
        if sweep.skipped.is_empty() {
            sweep.up_to = n;
        }
    }
    Ok(sweep)
}

/// Public entry to the refutation sweep alone.
pub fn refute(t1: Term, t2: Term, sig: &Signature, max_n: usize, budget: u128) -> Result<Sweep, DecideError> {
    refute_models(t1, t2, &roles(&[t1, t2], sig), max_n, budget)
}

/// Renames duals of tests and nominals back to the name itself; both
/// denote symmetric relations.
fn fold_symmetric_duals(t: Term, sym: &BTreeSet<Name>) -> Term {
    match t.node() {
        Node::Var(a) if a.as_str().starts_with(DUAL_PREFIX) && sym.contains(&dual(a)) => Term::name(dual(a)),
        Node::Var(_) | Node::One | Node::Zero | Node::Top => t,
        Node::Seq(a, b) => Term::seq(fold_symmetric_duals(a, sym), fold_symmetric_duals(b, sym)),
        Node::Sum(a, b) => Term::sum(fold_symmetric_duals(a, sym), fold_symmetric_duals(b, sym)),
        Node::Meet(a, b) => Term::meet(fold_symmetric_duals(a, sym), fold_symmetric_duals(b, sym)),
        Node::Star(a) => Term::star(fold_symmetric_duals(a, sym)),
        Node::Conv(a) => Term::conv(fold_symmetric_duals(a, sym)),
        Node::Compl(a) => Term::compl(fold_symmetric_duals(a, sym)),
    }
}

/// The decision term of one side: KL form, symmetric duals folded, wrapped.
pub fn decision_term(t: Term, sig: &Signature) -> Result<Term, WrapError> {
    let sym: BTreeSet<Name> = sig.test_names().chain(sig.nominal_names()).collect();
    let sym: BTreeSet<Name> = sym.iter().flat_map(|&a| [a, complement(a)]).collect();
    wrap_for_decision(fold_symmetric_duals(to_kl(t), &sym))
}

/// The sparse alphabet covering both decision terms.
fn alphabet_spec(k: usize, w1: Term, w2: Term, r: &Roles) -> AlphabetSpec {
    let sym: BTreeSet<Name> = r
        .tests
        .iter()
        .flat_map(|&a| [a, complement(a)])
        .chain(r.noms.iter().copied())
        .collect();
    let c_top = Name::new(C_TOP);
    let mut names = w1.names();
    names.extend(w2.names());
    let mut edges = BTreeSet::new();
    let mut conv = BTreeSet::new();
    for &a in &names {
        if a == c_top || sym.contains(&a) {
            continue;
        }
        let base = if a.as_str().starts_with(DUAL_PREFIX) { dual(a) } else { a };
        edges.insert(base);
        if names.contains(&dual(base)) {
            conv.insert(base);
        }
    }
    AlphabetSpec {
        k,
        edges: edges.into_iter().collect(),
        conv: conv.into_iter().collect(),
        tests: r.tests.clone(),
        noms: r.noms.clone(),
        top: Some(c_top),
    }
}

fn engine<'a>(kl: &'a KlAutomaton, alphabet: &[Structure]) -> (Box<dyn Dfa + 'a>, &'static str) {
    let n = kl.closure_len();
    if (0..n as Cl).all(|i| kl.labels_of(i).len() <= 1) {
        let d = FastDfa::new(kl, alphabet.to_vec()).expect("labels checked");
        (Box::new(d), "fast")
    } else {
        (Box::new(HornDfa::new(kl, alphabet.to_vec())), "horn")
    }
}

fn automata_leq(
    t1: Term,
    t2: Term,
    sig: &Signature,
    r: &Roles,
    classes: &[Class],
    options: &DecideOptions,
    mut bounds: Bounds,
) -> Result<Verdict, DecideError> {
    let w1 = decision_term(t1, sig)?;
    let w2 = decision_term(t2, sig)?;
    let k = w1.iw() + r.noms.len() + 1;
    bounds.k = Some(k);
    let spec = alphabet_spec(k, w1, w2, r);
    let raw = spec.sparse_count();
    bounds.letters = Some(raw);
    if raw > options.letter_budget {
        bounds.notes.push(format!("{raw} letters exceed the budget of {}", options.letter_budget));
        return Ok(verdict(Outcome::Unknown, None, bounds, options.seed));
    }
    let a1 = KlAutomaton::new(k, w1);
    let a2 = KlAutomaton::new(k, w2);
    let mut inspected: Vec<Name> = spec.all_names();
    inspected.retain(|a| !spec.edges.contains(a) || spec.conv.contains(a));
    let letters = spec.sparse_letters();
    let quotient = quotient_letters(&letters, &[&a1, &a2], &inspected);
    bounds.classes = Some(quotient.len());
    let alphabet: Vec<Structure> = quotient.into_iter().map(|c| c.representative).collect();

    let mut constraints = vec![Constraint::Inac, Constraint::Top(Name::new(C_TOP))];
    if !r.tests.is_empty() {
        let mut incon = r.tests.clone();
        incon.extend(r.tests.iter().map(|&b| complement(b)));
        constraints.push(Constraint::Incon(incon));
        constraints.push(Constraint::Tests(r.tests.clone()));
    }
    if !spec.conv.is_empty() {
        constraints.push(Constraint::Conv(spec.conv.clone()));
    }
    if !r.noms.is_empty() {
        constraints.push(Constraint::Noms(r.noms.clone()));
    }
    let c = ConstraintDfa::new(constraints, alphabet.clone());
    let (d1, e1) = engine(&a1, &alphabet);
    let (d2, e2) = engine(&a2, &alphabet);
    bounds.engines = vec![e1.to_string(), e2.to_string()];

    let search = product_search(d1.as_ref(), d2.as_ref(), &c, options.max_states);
    bounds.explored = search.explored;
    match search.witness {
        Some(word) => {
            let bags: Vec<Structure> = word.iter().map(|&l| alphabet[l].clone()).collect();
            let user: Vec<Name> = r.free.iter().chain(&r.tests).chain(&r.noms).copied().collect();
            let s = glue(&bags).structure.restrict_names(&user);
            let pair = certify(&s, t1, t2, classes)?;
            let mut v = verdict(Outcome::Invalid, Some(Certificate::Automata), bounds, options.seed);
            v.counterexample = Some(Counterexample {
                structure: s,
                pair,
                reversed: false,
            });
            Ok(v)
        }
        None if search.complete => Ok(verdict(Outcome::Valid, Some(Certificate::Automata), bounds, options.seed)),
        None => {
            bounds
                .notes
                .push(format!("product search stopped after {} states", search.explored));
            Ok(verdict(Outcome::Unknown, None, bounds, options.seed))
        }
    }
}

struct Search {
    witness: Option<Vec<usize>>,
    explored: usize,
    complete: bool,
}

type Triple = (usize, usize, usize);

/// Breadth-first search of the product of `d1`, the complement of `d2` and
/// the complement of the constraint automaton for a nonempty word. Levels
/// are expanded in parallel and merged in order, so the result does not
/// depend on scheduling.
fn product_search(d1: &dyn Dfa, d2: &dyn Dfa, c: &ConstraintDfa, max_states: usize) -> Search {
    let letters = d1.alphabet_size();
    let start = (d1.start(), d2.start(), c.start());
    let mut seen: HashMap<Triple, usize> = HashMap::new();
    // (state, parent node, letter)
    let mut nodes: Vec<(Triple, usize, usize)> = vec![(start, usize::MAX, usize::MAX)];
    seen.insert(start, 0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let succ: Vec<Option<Triple>> = (0..frontier.len() * letters)
            .into_par_iter()
            .map(|i| {
                let (q1, q2, qc) = nodes[frontier[i / letters]].0;
                let l = i % letters;
                let rc = c.next(qc, l);
                if c.absorbing(rc) {
                    return None;
                }
                let r2 = d2.next(q2, l);
                if d2.accepts_extensions(r2) {
                    return None;
                }
                Some((d1.next(q1, l), r2, rc))
            })
            .collect();
        let mut next = Vec::new();
        for (&id, row) in frontier.iter().zip(succ.chunks(letters.max(1))) {
            for (l, &t) in row.iter().enumerate() {
                let Some(t) = t else { continue };
                if seen.contains_key(&t) {
                    continue;
                }
                let nid = nodes.len();
                nodes.push((t, id, l));
                seen.insert(t, nid);
                if d1.accepting(t.0) && !d2.accepting(t.1) && !c.accepting(t.2) {
                    let mut word = Vec::new();
                    let mut cur = nid;
                    while cur != 0 {
                        word.push(nodes[cur].2);
                        cur = nodes[cur].1;
                    }
                    word.reverse();
                    return Search {
                        witness: Some(word),
                        explored: nodes.len(),
                        complete: true,
                    };
                }
                if nodes.len() > max_states {
                    return Search {
                        witness: None,
                        explored: nodes.len(),
                        complete: false,
                    };
                }
                next.push(nid);
            }
        }
        frontier = next;
    }
    Search {
        witness: None,
        explored: nodes.len(),
        complete: true,
    }
}
