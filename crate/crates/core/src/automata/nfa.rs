use std::collections::{BTreeSet, HashMap, VecDeque};

/// A deterministic automaton over letter indices `0..alphabet_size`, with
/// states numbered on demand.
pub trait Dfa: Sync {
    fn start(&self) -> usize;
    fn next(&self, q: usize, letter: usize) -> usize;
    fn accepting(&self, q: usize) -> bool;
    fn alphabet_size(&self) -> usize;

    /// The state accepts and so does every extension of the word.
    fn accepts_extensions(&self, _q: usize) -> bool {
        false
    }

    fn accepts(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.start(), |q, &a| self.next(q, a));
        self.accepting(q)
    }
}

/// An explicit nondeterministic automaton over letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet_size: usize,
    pub num_states: usize,
    pub initial: BTreeSet<usize>,
    pub accepting: BTreeSet<usize>,
    /// `trans[q]` maps a letter to the successor states.
    pub trans: Vec<HashMap<usize, BTreeSet<usize>>>,
}

impl Nfa {
    pub fn new(alphabet_size: usize) -> Nfa {
        Nfa {
            alphabet_size,
            num_states: 0,
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
            trans: Vec::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.trans.push(HashMap::new());
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_transition(&mut self, p: usize, letter: usize, q: usize) {
        self.trans[p].entry(letter).or_default().insert(q);
    }

    pub fn step(&self, set: &BTreeSet<usize>, letter: usize) -> BTreeSet<usize> {
        set.iter()
            .filter_map(|&q| self.trans[q].get(&letter))
            .flatten()
            .copied()
            .collect()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let end = word
            .iter()
            .fold(self.initial.clone(), |s, &a| self.step(&s, a));
        end.iter().any(|q| self.accepting.contains(q))
    }

    /// Is the language empty? Returns a shortest accepted word otherwise.
    pub fn emptiness_witness(&self) -> Option<Vec<usize>> {
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut seen: BTreeSet<usize> = self.initial.clone();
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            if self.accepting.contains(&q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some(&(p, a)) = parent.get(&cur) {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            let mut moves: Vec<(&usize, &BTreeSet<usize>)> = self.trans[q].iter().collect();
            moves.sort();
            for (&a, succ) in moves {
                for &r in succ {
                    if seen.insert(r) {
                        parent.insert(r, (q, a));
                        queue.push_back(r);
                    }
                }
            }
        }
        None
    }
}

/// Disjoint union.
pub fn nfa_union(a: &Nfa, b: &Nfa) -> Nfa {
    assert_eq!(a.alphabet_size, b.alphabet_size);
    let off = a.num_states;
    let mut out = a.clone();
    for q in 0..b.num_states {
        out.add_state();
        for (&l, succ) in &b.trans[q] {
            for &r in succ {
                out.add_transition(q + off, l, r + off);
            }
        }
    }
    out.initial.extend(b.initial.iter().map(|q| q + off));
    out.accepting.extend(b.accepting.iter().map(|q| q + off));
    out
}

/// Product automaton.
pub fn nfa_intersect(a: &Nfa, b: &Nfa) -> Nfa {
    assert_eq!(a.alphabet_size, b.alphabet_size);
    let mut out = Nfa::new(a.alphabet_size);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in &a.initial {
        for &q in &b.initial {
            let id = out.add_state();
            ids.insert((p, q), id);
            out.initial.insert(id);
            queue.push_back((p, q));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let id = ids[&(p, q)];
        if a.accepting.contains(&p) && b.accepting.contains(&q) {
            out.accepting.insert(id);
        }
        for (&l, sp) in &a.trans[p] {
            let Some(sq) = b.trans[q].get(&l) else { continue };
            for &p2 in sp {
                for &q2 in sq {
                    let tgt = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        out.trans.push(HashMap::new());
                        out.num_states += 1;
                        out.num_states - 1
                    });
                    out.add_transition(id, l, tgt);
                }
            }
        }
    }
    out
}

/// Complement via subset construction; the result is deterministic and
/// total over the alphabet.
pub fn nfa_complement(a: &Nfa) -> Nfa {
    let mut out = Nfa::new(a.alphabet_size);
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = a.initial.clone();
    let s = out.add_state();
    ids.insert(start.clone(), s);
    out.initial.insert(s);
    queue.push_back(start);
    while let Some(set) = queue.pop_front() {
        let id = ids[&set];
        if !set.iter().any(|q| a.accepting.contains(q)) {
            out.accepting.insert(id);
        }
        for l in 0..a.alphabet_size {
            let succ = a.step(&set, l);
            let tgt = match ids.get(&succ) {
                Some(&t) => t,
                None => {
                    let t = out.add_state();
                    ids.insert(succ.clone(), t);
                    queue.push_back(succ);
                    t
                }
            };
            out.add_transition(id, l, tgt);
        }
    }
    out
}

/// Explores a lazy DFA into an explicit automaton; `None` past `max_states`.
pub fn explore<D: Dfa + ?Sized>(d: &D, max_states: usize) -> Option<Nfa> {
    let mut out = Nfa::new(d.alphabet_size());
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let s = d.start();
    ids.insert(s, out.add_state());
    out.initial.insert(0);
    queue.push_back(s);
    while let Some(q) = queue.pop_front() {
        let id = ids[&q];
        if d.accepting(q) {
            out.accepting.insert(id);
        }
        for l in 0..d.alphabet_size() {
            let r = d.next(q, l);
            let tgt = match ids.get(&r) {
                Some(&t) => t,
                None => {
                    if out.num_states >= max_states {
                        return None;
                    }
                    let t = out.add_state();
                    ids.insert(r, t);
                    queue.push_back(r);
                    t
                }
            };
            out.add_transition(id, l, tgt);
        }
    }
    Some(out)
}
