use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use super::nfa::{Dfa, Nfa};
use super::posbool::Dnf;
use super::twoafa::{Sym, TwoAfa};
use crate::model::Structure;

/// What a prefix `▷ w1 … wj` tells about the rest of the word: for every
/// state at position `j`, the condition on position `j+1` under which it
/// holds in the least fixpoint, plus the same for acceptance.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Summary {
    sigma: Vec<Dnf<u32>>,
    acc: Dnf<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum Atom {
    /// A state at the current position.
    X(u32),
    /// A state at the next position.
    Y(u32),
}

/// A deterministic automaton equivalent to a [`TwoAfa`], built lazily over a
/// fixed alphabet of letters. States are interned summaries.
pub struct HornDfa<'a, A: TwoAfa> {
    a: &'a A,
    alphabet: Vec<Structure>,
    states: Vec<A::State>,
    index: HashMap<A::State, u32>,
    inner: Mutex<Interned>,
}

#[derive(Default)]
struct Interned {
    summaries: Vec<Arc<Summary>>,
    ids: HashMap<Arc<Summary>, usize>,
    next: HashMap<(usize, usize), usize>,
    accepting: HashMap<usize, bool>,
}

impl<'a, A: TwoAfa> HornDfa<'a, A> {
    pub fn new(a: &'a A, alphabet: Vec<Structure>) -> HornDfa<'a, A> {
        let states: Vec<A::State> = a.states().into_iter().filter(|q| !a.pruned(q)).collect();
        let index = states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i as u32))
            .collect();
        let dfa = HornDfa {
            a,
            alphabet,
            states,
            index,
            inner: Mutex::new(Interned::default()),
        };
        let start = dfa.solve(Sym::Begin, None);
        dfa.intern(start);
        dfa
    }

    pub fn alphabet(&self) -> &[Structure] {
        &self.alphabet
    }

    /// Number of summaries built so far.
    pub fn explored(&self) -> usize {
        self.inner.lock().summaries.len()
    }

    fn intern(&self, s: Summary) -> usize {
        let mut inner = self.inner.lock();
        if let Some(&id) = inner.ids.get(&s) {
            return id;
        }
        let s = Arc::new(s);
        let id = inner.summaries.len();
        inner.summaries.push(s.clone());
        inner.ids.insert(s, id);
        id
    }

    fn summary(&self, id: usize) -> Arc<Summary> {
        self.inner.lock().summaries[id].clone()
    }

    /// Clauses of `q`'s transition over current-position atoms, with
    /// backward literals already resolved through `prev`.
    fn rules(&self, q: &A::State, sym: Sym<'_>, prev: Option<&Summary>, last: bool) -> Vec<Dnf<Atom>> {
        let f = self.a.delta(q, sym);
        let mut out = Vec::new();
        'clause: for c in f.clauses() {
            let mut conj = Dnf::tru();
            for (q2, d) in c {
                let Some(&i) = self.index.get(q2) else {
                    continue 'clause;
                };
                let part = match d {
                    0 => Dnf::atom(Atom::X(i)),
                    1 if last => continue 'clause,
                    1 => Dnf::atom(Atom::Y(i)),
                    _ => match prev {
                        None => continue 'clause,
                        Some(p) => p.sigma[i as usize].substitute(|&x| Dnf::atom(Atom::X(x))),
                    },
                };
                conj = conj.and(&part);
                if conj.is_false() {
                    continue 'clause;
                }
            }
            out.push(conj);
        }
        out
    }

    fn solve(&self, sym: Sym<'_>, prev: Option<&Summary>) -> Summary {
        let n = self.states.len();
        let last = matches!(sym, Sym::End);
        let rules: Vec<Vec<Dnf<Atom>>> = self
            .states
            .iter()
            .map(|q| self.rules(q, sym, prev, last))
            .collect();
        let mut dependents: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, rs) in rules.iter().enumerate() {
            for r in rs {
                for c in r.clauses() {
                    for a in c {
                        if let Atom::X(x) = a {
                            dependents[*x as usize].push(q as u32);
                        }
                    }
                }
            }
        }
        for d in &mut dependents {
            d.sort_unstable();
            d.dedup();
        }
        let mut val: Vec<Dnf<u32>> = vec![Dnf::fls(); n];
        let mut queued = vec![true; n];
        let mut work: Vec<u32> = (0..n as u32).rev().collect();
        while let Some(q) = work.pop() {
            queued[q as usize] = false;
            let mut v = Dnf::fls();
            for r in &rules[q as usize] {
                v = v.or(&r.substitute(|a| match *a {
                    Atom::X(x) => val[x as usize].clone(),
                    Atom::Y(y) => Dnf::atom(y),
                }));
            }
            let v = self.saturate(&v);
            if v != val[q as usize] {
                val[q as usize] = v;
                for &d in &dependents[q as usize] {
                    if !queued[d as usize] {
                        queued[d as usize] = true;
                        work.push(d);
                    }
                }
            }
        }
        let acc = match prev {
            None => val[self.index[&self.a.initial()] as usize].clone(),
            Some(p) => p.acc.substitute(|&x| val[x as usize].clone()),
        };
        Summary { sigma: val, acc }
    }

    fn saturate(&self, d: &Dnf<u32>) -> Dnf<u32> {
        d.map_clauses(|c| {
            let mut qs: Vec<A::State> = c.iter().map(|&i| self.states[i as usize].clone()).collect();
            self.a.saturate_clause(&mut qs);
            *c = qs.iter().filter_map(|q| self.index.get(q).copied()).collect();
        })
    }
}

impl<A: TwoAfa> Dfa for HornDfa<'_, A> {
    fn start(&self) -> usize {
        0
    }

    fn next(&self, q: usize, letter: usize) -> usize {
        if let Some(&r) = self.inner.lock().next.get(&(q, letter)) {
            return r;
        }
        let s = self.summary(q);
        let succ = self.solve(Sym::Letter(&self.alphabet[letter]), Some(&s));
        let r = self.intern(succ);
        self.inner.lock().next.insert((q, letter), r);
        r
    }

    fn accepting(&self, q: usize) -> bool {
        if let Some(&b) = self.inner.lock().accepting.get(&q) {
            return b;
        }
        let s = self.summary(q);
        let end = self.solve(Sym::End, Some(&s));
        let b = end.acc.is_true();
        self.inner.lock().accepting.insert(q, b);
        b
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }
}

/// Converts a 2AFA into an explicit automaton over `alphabet` by exploring
/// its summary DFA; `None` when more than `max_states` summaries arise.
pub fn twoafa_to_nfa<A: TwoAfa>(a: &A, alphabet: &[Structure], max_states: usize) -> Option<Nfa> {
    let dfa = HornDfa::new(a, alphabet.to_vec());
    super::nfa::explore(&dfa, max_states)
}
