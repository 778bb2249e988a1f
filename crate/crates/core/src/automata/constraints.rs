use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use super::build::vertex_number;
use super::nfa::{explore, Dfa, Nfa};
use crate::model::{Rel, Structure};
use crate::syntax::{complement, dual, Name};

/// A language of words that do not denote a well-formed structure of the
/// intended class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Two adjacent letters with disjoint universes.
    Inac,
    /// Two adjacent letters disagreeing on a listed name, restricted to the
    /// vertices they share.
    Incon(Vec<Name>),
    /// A letter where the name is not the complete relation.
    Top(Name),
    /// A letter where a dual name is not the converse of its base.
    Conv(Vec<Name>),
    /// A letter where a test and its complement do not partition the
    /// identity.
    Tests(Vec<Name>),
    /// A nominal that is not a single loop on one glued vertex.
    Noms(Vec<Name>),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum NomState {
    Unseen,
    Track(usize),
    Gone,
    Bad,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Part {
    Fresh,
    /// Index of the previous letter.
    Prev(usize),
    /// Vertex mask of the previous letter.
    PrevVerts(u64),
    Found,
    Noms(Vec<NomState>),
}

/// Vertex numbers of a letter.
fn vertex_set(s: &Structure) -> Vec<usize> {
    s.universe()
        .iter()
        .map(|&v| vertex_number(v).expect("letter vertex"))
        .collect()
}

fn loops(r: &Rel, s: &Structure) -> (Vec<usize>, bool) {
    let mut l = Vec::new();
    let mut off_diagonal = false;
    for (i, j) in r.pairs() {
        if i == j {
            l.push(vertex_number(s.vertex(i)).expect("letter vertex"));
        } else {
            off_diagonal = true;
        }
    }
    (l, off_diagonal)
}

fn disagree(a: &Structure, b: &Structure, names: &[Name]) -> bool {
    let shared: Vec<Name> = a
        .universe()
        .iter()
        .copied()
        .filter(|&v| b.contains_vertex(v))
        .collect();
    names.iter().any(|&n| {
        shared.iter().any(|&x| {
            shared
                .iter()
                .any(|&y| a.has_edge(n, x, y) != b.has_edge(n, x, y))
        })
    })
}

fn letter_violates(c: &Constraint, s: &Structure) -> bool {
    let n = s.len();
    match c {
        Constraint::Top(t) => s.rel_or_empty(*t) != Rel::full(n),
        Constraint::Conv(names) => names
            .iter()
            .any(|&a| s.rel_or_empty(dual(a)) != s.rel_or_empty(a).transpose()),
        Constraint::Tests(names) => names.iter().any(|&b| {
            let p = s.rel_or_empty(b);
            let q = s.rel_or_empty(complement(b));
            !p.intersect(&q).is_empty() || p.union(&q) != Rel::identity(n)
        }),
        _ => false,
    }
}

impl Constraint {
    fn start(&self) -> Part {
        match self {
            Constraint::Noms(ls) => Part::Noms(vec![NomState::Unseen; ls.len()]),
            _ => Part::Fresh,
        }
    }

    fn step(&self, q: &Part, letter: usize, alphabet: &[Structure]) -> Part {
        if *q == Part::Found {
            return Part::Found;
        }
        let s = &alphabet[letter];
        match self {
            Constraint::Inac => {
                let mask = vertex_set(s).iter().fold(0u64, |m, &v| m | 1 << (v - 1));
                match *q {
                    Part::PrevVerts(prev) if prev & mask == 0 => Part::Found,
                    _ => Part::PrevVerts(mask),
                }
            }
            Constraint::Incon(names) => {
                if let Part::Prev(p) = *q {
                    if disagree(&alphabet[p], s, names) {
                        return Part::Found;
                    }
                }
                Part::Prev(letter)
            }
            Constraint::Noms(ls) => {
                let Part::Noms(states) = q else { unreachable!() };
                let verts = vertex_set(s);
                let next = ls
                    .iter()
                    .zip(states)
                    .map(|(&l, &st)| {
                        let (lp, off) = loops(&s.rel_or_empty(l), s);
                        if off || lp.len() > 1 {
                            return NomState::Bad;
                        }
                        let st = match st {
                            NomState::Track(x) if !verts.contains(&x) => NomState::Gone,
                            other => other,
                        };
                        match (st, lp.first()) {
                            (NomState::Bad, _) => NomState::Bad,
                            (st, None) => st,
                            (NomState::Unseen, Some(&x)) => NomState::Track(x),
                            (NomState::Track(x), Some(&y)) if x == y => NomState::Track(x),
                            _ => NomState::Bad,
                        }
                    })
                    .collect();
                Part::Noms(next)
            }
            _ => {
                if letter_violates(self, s) {
                    Part::Found
                } else {
                    q.clone()
                }
            }
        }
    }

    fn accepting(&self, q: &Part) -> bool {
        match q {
            Part::Found => true,
            Part::Noms(states) => states
                .iter()
                .any(|&s| matches!(s, NomState::Unseen | NomState::Bad)),
            _ => false,
        }
    }

    /// Every extension stays accepted.
    fn absorbing(&self, q: &Part) -> bool {
        match q {
            Part::Found => true,
            Part::Noms(states) => states.contains(&NomState::Bad),
            _ => false,
        }
    }
}

/// The union of several constraint languages as one deterministic automaton.
pub struct ConstraintDfa {
    constraints: Vec<Constraint>,
    alphabet: Vec<Structure>,
    inner: Mutex<Interned>,
}

#[derive(Default)]
struct Interned {
    states: Vec<Arc<Vec<Part>>>,
    ids: HashMap<Arc<Vec<Part>>, usize>,
    next: HashMap<(usize, usize), usize>,
}

impl ConstraintDfa {
    pub fn new(constraints: Vec<Constraint>, alphabet: Vec<Structure>) -> ConstraintDfa {
        let d = ConstraintDfa {
            alphabet,
            inner: Mutex::new(Interned::default()),
            constraints,
        };
        let start = d.constraints.iter().map(Constraint::start).collect();
        d.intern(start);
        d
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn intern(&self, s: Vec<Part>) -> usize {
        let mut inner = self.inner.lock();
        if let Some(&id) = inner.ids.get(&s) {
            return id;
        }
        let s = Arc::new(s);
        let id = inner.states.len();
        inner.states.push(s.clone());
        inner.ids.insert(s, id);
        id
    }

    fn state(&self, q: usize) -> Arc<Vec<Part>> {
        self.inner.lock().states[q].clone()
    }

    /// The state accepts and so does every extension.
    pub fn absorbing(&self, q: usize) -> bool {
        let s = self.state(q);
        self.constraints
            .iter()
            .zip(s.iter())
            .any(|(c, p)| c.absorbing(p))
    }
}

impl Dfa for ConstraintDfa {
    fn start(&self) -> usize {
        0
    }

    fn next(&self, q: usize, letter: usize) -> usize {
        if let Some(&r) = self.inner.lock().next.get(&(q, letter)) {
            return r;
        }
        let s = self.state(q);
        let t: Vec<Part> = self
            .constraints
            .iter()
            .zip(s.iter())
            .map(|(c, p)| c.step(p, letter, &self.alphabet))
            .collect();
        let r = self.intern(t);
        self.inner.lock().next.insert((q, letter), r);
        r
    }

    fn accepting(&self, q: usize) -> bool {
        let s = self.state(q);
        self.constraints
            .iter()
            .zip(s.iter())
            .any(|(c, p)| c.accepting(p))
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }
}

fn explicit(c: Constraint, alphabet: &[Structure]) -> Nfa {
    explore(&ConstraintDfa::new(vec![c], alphabet.to_vec()), usize::MAX).expect("unbounded")
}

/// Words with two adjacent letters sharing no vertex.
pub fn nfa_inac(alphabet: &[Structure]) -> Nfa {
    explicit(Constraint::Inac, alphabet)
}

/// Words with adjacent letters disagreeing on `names` over shared vertices.
pub fn nfa_incon(alphabet: &[Structure], names: &[Name]) -> Nfa {
    explicit(Constraint::Incon(names.to_vec()), alphabet)
}

/// Words with a letter where `top` is not complete.
pub fn nfa_top(alphabet: &[Structure], top: Name) -> Nfa {
    explicit(Constraint::Top(top), alphabet)
}

/// Words with a letter where some dual of `names` is not the converse.
pub fn nfa_conv(alphabet: &[Structure], names: &[Name]) -> Nfa {
    explicit(Constraint::Conv(names.to_vec()), alphabet)
}

/// Words with a letter where a test and its complement do not partition
/// the identity.
pub fn nfa_tests(alphabet: &[Structure], tests: &[Name]) -> Nfa {
    explicit(Constraint::Tests(tests.to_vec()), alphabet)
}

/// Words where some nominal is empty, not a loop, or loops on two distinct
/// glued vertices.
pub fn nfa_noms(alphabet: &[Structure], noms: &[Name]) -> Nfa {
    explicit(Constraint::Noms(noms.to_vec()), alphabet)
}
