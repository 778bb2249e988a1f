use std::collections::BTreeSet;

use super::bigraph::{dedup_iso, meet, series, BiGraph, Edge, GraphError};
use crate::syntax::{Name, Node, Term};

/// Default number of star unfoldings.
pub const DEFAULT_STAR_DEPTH: usize = 3;

fn products(xs: &[BiGraph], ys: &[BiGraph], f: impl Fn(&BiGraph, &BiGraph) -> BiGraph) -> Vec<BiGraph> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(f(x, y));
        }
    }
    out
}

/// `⋃_{n ≤ d} L^n` for a language of ⟨1,1⟩ graphs, starting from `unit`.
fn bounded_star(
    l: &[BiGraph],
    d: usize,
    unit: BiGraph,
    dedup: bool,
    compose: impl Fn(&BiGraph, &BiGraph) -> BiGraph,
) -> Vec<BiGraph> {
    let mut all = vec![unit.clone()];
    let mut power = vec![unit];
    for _ in 0..d {
        power = products(&power, l, &compose);
        if dedup {
            power = dedup_iso(power);
        }
        all.extend(power.iter().cloned());
    }
    if dedup {
        dedup_iso(all)
    } else {
        all
    }
}

fn seq(x: &BiGraph, y: &BiGraph) -> BiGraph {
    series(x, y).expect("⟨1,1⟩ graphs compose")
}

fn glang_rec(t: Term, d: usize, dedup: bool) -> Vec<BiGraph> {
    let out = match t.node() {
        Node::Var(a) => vec![BiGraph::edge(a)],
        Node::One => vec![BiGraph::identity(1)],
        Node::Zero => vec![],
        Node::Top => vec![BiGraph::top()],
        Node::Seq(a, b) => products(&glang_rec(a, d, dedup), &glang_rec(b, d, dedup), seq),
        Node::Sum(a, b) => {
            let mut v = glang_rec(a, d, dedup);
            v.extend(glang_rec(b, d, dedup));
            v
        }
        Node::Meet(a, b) => products(&glang_rec(a, d, dedup), &glang_rec(b, d, dedup), meet),
        Node::Star(a) => bounded_star(&glang_rec(a, d, dedup), d, BiGraph::identity(1), dedup, seq),
        Node::Conv(a) => glang_rec(a, d, dedup).iter().map(BiGraph::converse).collect(),
        Node::Compl(_) => panic!("graph languages are defined for complement-free terms"),
    };
    if dedup {
        dedup_iso(out)
    } else {
        out
    }
}

/// The graph language of a complement-free term with each star unfolded at
/// most `d` times, up to isomorphism. Exact when `t` is star-free.
pub fn glang(t: Term, d: usize) -> Vec<BiGraph> {
    glang_rec(t, d, true)
}

/// The same language without isomorphism deduplication.
pub fn glang_raw(t: Term, d: usize) -> Vec<BiGraph> {
    glang_rec(t, d, false)
}

/// The run of an intersection: fork, the two runs side by side, join.
fn meet_run(x: &BiGraph, y: &BiGraph) -> BiGraph {
    let mut fork = BiGraph::new(3);
    fork.add_edge(Edge::fork(0, 1, 2));
    fork.sources = vec![0];
    fork.targets = vec![1, 2];
    let mut join = BiGraph::new(3);
    join.add_edge(Edge::join(0, 1, 2));
    join.sources = vec![0, 1];
    join.targets = vec![2];
    let mid = super::bigraph::parallel(x, y);
    let g = series(&fork, &mid).expect("arity 2");
    series(&g, &join).expect("arity 2")
}

fn run_rec(t: Term, d: usize, dedup: bool) -> Result<Vec<BiGraph>, GraphError> {
    let out = match t.node() {
        Node::Var(a) => vec![BiGraph::edge(a)],
        Node::One => vec![BiGraph::identity(1)],
        Node::Zero => vec![],
        Node::Seq(a, b) => products(&run_rec(a, d, dedup)?, &run_rec(b, d, dedup)?, seq),
        Node::Sum(a, b) => {
            let mut v = run_rec(a, d, dedup)?;
            v.extend(run_rec(b, d, dedup)?);
            v
        }
        Node::Meet(a, b) => products(&run_rec(a, d, dedup)?, &run_rec(b, d, dedup)?, meet_run),
        Node::Star(a) => bounded_star(&run_rec(a, d, dedup)?, d, BiGraph::identity(1), dedup, seq),
        Node::Top | Node::Conv(_) | Node::Compl(_) => {
            return Err(GraphError::NotRun(format!("not a KL term: {}", t.render())))
        }
    };
    Ok(if dedup { dedup_iso(out) } else { out })
}

/// The run language of a KL term with stars unfolded at most `d` times.
pub fn run_lang(t: Term, d: usize) -> Result<Vec<BiGraph>, GraphError> {
    run_rec(t, d, true)
}

/// The same without deduplication (used when sampling runs).
pub fn run_lang_raw(t: Term, d: usize) -> Result<Vec<BiGraph>, GraphError> {
    run_rec(t, d, false)
}

pub type Word = Vec<Name>;

fn concat(xs: &BTreeSet<Word>, ys: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for x in xs {
        for y in ys {
            let mut w = x.clone();
            w.extend(y.iter().copied());
            out.insert(w);
        }
    }
    out
}

fn words_rec(t: Term, d: usize, sigma: &[Name]) -> Result<BTreeSet<Word>, GraphError> {
    Ok(match t.node() {
        Node::Var(a) => BTreeSet::from([vec![a]]),
        Node::One => BTreeSet::from([vec![]]),
        Node::Zero => BTreeSet::new(),
        Node::Top => {
            let mut all = BTreeSet::from([vec![]]);
            let mut layer: BTreeSet<Word> = BTreeSet::from([vec![]]);
            let letters: BTreeSet<Word> = sigma.iter().map(|&a| vec![a]).collect();
            for _ in 0..d {
                layer = concat(&layer, &letters);
                all.extend(layer.iter().cloned());
            }
            all
        }
        Node::Seq(a, b) => concat(&words_rec(a, d, sigma)?, &words_rec(b, d, sigma)?),
        Node::Sum(a, b) => {
            let mut v = words_rec(a, d, sigma)?;
            v.extend(words_rec(b, d, sigma)?);
            v
        }
        Node::Meet(a, b) => {
            let x = words_rec(a, d, sigma)?;
            let y = words_rec(b, d, sigma)?;
            x.intersection(&y).cloned().collect()
        }
        Node::Star(a) => {
            let l = words_rec(a, d, sigma)?;
            let mut all = BTreeSet::from([vec![]]);
            let mut power = BTreeSet::from([vec![]]);
            for _ in 0..d {
                power = concat(&power, &l);
                all.extend(power.iter().cloned());
            }
            all
        }
        Node::Conv(_) | Node::Compl(_) => {
            return Err(GraphError::NotRun(format!(
                "word languages cover 1, 0, ⊤, ;, +, ∩, * only: {}",
                t.render()
            )))
        }
    })
}

/// The word language over the names of `t`, with stars unfolded at most `d`
/// times and `⊤` limited to words of length at most `d`.
pub fn word_lang(t: Term, d: usize) -> Result<BTreeSet<Word>, GraphError> {
    let sigma: Vec<Name> = t.names().into_iter().collect();
    words_rec(t, d, &sigma)
}
