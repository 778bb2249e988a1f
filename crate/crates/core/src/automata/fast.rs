use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use super::build::{Cl, KlAutomaton};
use super::nfa::Dfa;
use crate::model::{Rel, Structure};

/// Deterministic automaton for terms of intersection width one.
///
/// Every closure term then carries a single label, the L rule adds nothing
/// beyond the D rule, and the facts of one position form a transitively
/// closed relation. The state after a prefix is the relation of the last
/// position given everything to its left; two virtual nodes `START` and
/// `END`, linked to the initial pairs in the first letter, track acceptance.
pub struct FastDfa<'a> {
    kl: &'a KlAutomaton,
    alphabet: Vec<Structure>,
    n: usize,
    inner: Mutex<Interned>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct FastState {
    started: bool,
    umask: u64,
    rel: Rel,
}

#[derive(Default)]
struct Interned {
    states: Vec<Arc<FastState>>,
    ids: HashMap<Arc<FastState>, usize>,
    next: HashMap<(usize, usize), usize>,
}

impl<'a> FastDfa<'a> {
    /// `None` when some closure term has more than one label.
    pub fn new(kl: &'a KlAutomaton, alphabet: Vec<Structure>) -> Option<FastDfa<'a>> {
        let n = kl.closure_len();
        if (0..n as Cl).any(|i| kl.labels_of(i).len() > 1) {
            return None;
        }
        let dfa = FastDfa {
            kl,
            alphabet,
            n,
            inner: Mutex::new(Interned::default()),
        };
        dfa.intern(FastState {
            started: false,
            umask: 0,
            rel: Rel::empty(n + 2),
        });
        Some(dfa)
    }

    pub fn explored(&self) -> usize {
        self.inner.lock().states.len()
    }

    fn intern(&self, s: FastState) -> usize {
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

    fn transition(&self, s: &FastState, letter: &Structure) -> FastState {
        let (n, start, end) = (self.n, self.n, self.n + 1);
        let info = self.kl.letter_info(letter);
        let mut rel = Rel::empty(n + 2);
        for i in info.fit.ones() {
            for j in info.reach[i].ones() {
                rel.insert(i, j);
            }
        }
        if s.started {
            let shared = |i: usize| {
                i >= n || (info.fit.contains(i) && self.kl.fits(i as Cl, s.umask))
            };
            rel.union_with(&s.rel.restrict(shared));
        } else {
            for &(a, b) in self.kl.starts() {
                let (a, b) = (a as usize, b as usize);
                if info.fit.contains(a) && info.fit.contains(b) {
                    rel.insert(start, a);
                    rel.insert(b, end);
                }
            }
        }
        let rel = rel.star().restrict(|i| i >= n || info.fit.contains(i));
        FastState {
            started: true,
            umask: info.umask,
            rel,
        }
    }
}

impl Dfa for FastDfa<'_> {
    fn start(&self) -> usize {
        0
    }

    fn next(&self, q: usize, letter: usize) -> usize {
        if let Some(&r) = self.inner.lock().next.get(&(q, letter)) {
            return r;
        }
        let s = self.inner.lock().states[q].clone();
        let t = self.transition(&s, &self.alphabet[letter]);
        let r = self.intern(t);
        self.inner.lock().next.insert((q, letter), r);
        r
    }

    fn accepting(&self, q: usize) -> bool {
        let s = self.inner.lock().states[q].clone();
        s.started && s.rel.contains(self.n, self.n + 1)
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// `START → END` survives every later transition.
    fn accepts_extensions(&self, q: usize) -> bool {
        self.accepting(q)
    }
}
