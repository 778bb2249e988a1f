//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use pcor::automata::{PosBool, Sym, TwoAfa};
use pcor::derive::{eps, step, AtomicStep, LTerm, Label, Pointed};
use pcor::graphs::{GraphError, SRun};
use pcor::model::{eval_lenient, glue, Structure};
use pcor::syntax::{Name, Term};

/// Every KL term over `names` with at most `max` nodes.
pub fn kl_corpus(names: &[&str], max: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![vec![]];
    let mut atoms: Vec<Term> = names.iter().map(|n| Term::var(n)).collect();
    atoms.push(Term::one());
    atoms.push(Term::zero());
    by_size.push(atoms);
    for k in 2..=max {
        let mut out: Vec<Term> = by_size[k - 1].iter().map(|&u| Term::star(u)).collect();
        for i in 1..k - 1 {
            for &l in &by_size[i] {
                for &r in &by_size[k - 1 - i] {
                    out.push(Term::seq(l, r));
                    out.push(Term::sum(l, r));
                    out.push(Term::meet(l, r));
                }
            }
        }
        by_size.push(out);
    }
    by_size.concat()
}

/// All words of length `1..=max_len` over `n` letters.
pub fn words(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// The glued-semantics condition of a word: some pair of first-bag vertices
/// is related by `t` in the glued structure.
pub fn glued_witness(t: Term, word: &[Structure]) -> bool {
    let g = glue(word);
    let s = &g.structure;
    let r = eval_lenient(s, t);
    let first = word[0].universe();
    first.iter().any(|&x| {
        first.iter().any(|&y| {
            let i = s.index_of(g.image(0, x).unwrap().name()).unwrap();
            let j = s.index_of(g.image(0, y).unwrap().name()).unwrap();
            r.contains(i, j)
        })
    })
}

/// Follows the derivatives of `l` along the atomic steps of `run` and
/// reports whether a term accepting at the run's target is reached.
pub fn derivatives_follow_run(s: &Structure, l: LTerm, run: &SRun) -> bool {
    // A run without edges has the empty decomposition.
    let steps: Vec<AtomicStep> = match run.decompose() {
        Ok(steps) => steps,
        Err(GraphError::EmptyRun) => Vec::new(),
        Err(e) => panic!("undecomposable run: {e}"),
    };
    let pointed = Pointed::new(s);
    let mut current: HashSet<LTerm> = HashSet::from([l]);
    for st in &steps {
        let mut next = HashSet::new();
        for &m in &current {
            for (tau, m2) in step(&pointed, m) {
                if &tau == st {
                    next.insert(m2);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        current = next;
    }
    let target = Label::V(run.targets()[0]);
    current.into_iter().any(|m| eps(target, m))
}

fn has_vertex(s: &Structure, v: &str) -> bool {
    s.contains_vertex(Name::new(v))
}

fn has_a_loop_at_1(s: &Structure) -> bool {
    has_vertex(s, "1") && s.has_edge(Name::new("a"), Name::new("1"), Name::new("1"))
}

/// Accepts when some letter with an `a`-loop at vertex 1 follows a letter
/// with two vertices. Walks right, then steps back to check.
pub struct LookBack;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LbState {
    Init,
    Seek,
    Back,
}

impl TwoAfa for LookBack {
    type State = LbState;

    fn initial(&self) -> LbState {
        LbState::Init
    }

    fn delta(&self, q: &LbState, sym: Sym<'_>) -> PosBool<LbState> {
        match (q, sym) {
            (LbState::Init, Sym::Begin) => PosBool::lit(LbState::Seek, 1),
            (LbState::Seek, Sym::Letter(s)) => {
                let mut f = PosBool::lit(LbState::Seek, 1);
                if has_a_loop_at_1(s) {
                    f.add_clause([(LbState::Back, -1)]);
                }
                f
            }
            (LbState::Back, Sym::Letter(s)) if s.len() == 2 => PosBool::tru(),
            _ => PosBool::fls(),
        }
    }

    fn states(&self) -> Vec<LbState> {
        vec![LbState::Init, LbState::Seek, LbState::Back]
    }
}

/// Accepts when every letter contains vertex 1 and some letter has an
/// `a`-edge; the two conditions run as a conjunction of branches.
pub struct AllAndSome;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AsState {
    Init,
    All,
    Some,
}

impl TwoAfa for AllAndSome {
    type State = AsState;

    fn initial(&self) -> AsState {
        AsState::Init
    }

    fn delta(&self, q: &AsState, sym: Sym<'_>) -> PosBool<AsState> {
        match (q, sym) {
            (AsState::Init, Sym::Begin) => PosBool::clause([(AsState::All, 1), (AsState::Some, 1)]),
            (AsState::All, Sym::Letter(s)) if has_vertex(s, "1") => PosBool::lit(AsState::All, 1),
            (AsState::All, Sym::End) => PosBool::tru(),
            (AsState::Some, Sym::Letter(s)) => {
                if s.edges(Name::new("a")).is_empty() {
                    PosBool::lit(AsState::Some, 1)
                } else {
                    PosBool::tru()
                }
            }
            _ => PosBool::fls(),
        }
    }

    fn states(&self) -> Vec<AsState> {
        vec![AsState::Init, AsState::All, AsState::Some]
    }
}
