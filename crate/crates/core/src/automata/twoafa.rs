use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use super::posbool::PosBool;
use crate::model::Structure;

/// A tape symbol: the two end markers or a letter.
#[derive(Clone, Copy, Debug)]
pub enum Sym<'a> {
    Begin,
    End,
    Letter(&'a Structure),
}

/// A two-way alternating automaton over structures, with lazily computed
/// transitions.
pub trait TwoAfa: Sync {
    type State: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn initial(&self) -> Self::State;

    fn delta(&self, q: &Self::State, sym: Sym<'_>) -> PosBool<Self::State>;

    /// Every state, for constructions that need the full state set.
    fn states(&self) -> Vec<Self::State>;

    /// States known never to hold anywhere; they may be treated as false.
    fn pruned(&self, _q: &Self::State) -> bool {
        false
    }

    /// Rewrites a clause of next-position states into an equivalent one
    /// (true facts of one position are assumed closed under the rewrite).
    fn saturate_clause(&self, _clause: &mut Vec<Self::State>) {}
}

/// Least-fixpoint acceptance of `▷ w ◁`: the set of derivable pairs
/// (state, position) is computed goal-directed from `(initial, 0)` with
/// unit propagation over the clauses.
pub fn membership<A: TwoAfa>(a: &A, word: &[Structure]) -> bool {
    let n = word.len();
    let sym = |i: usize| -> Sym<'_> {
        if i == 0 {
            Sym::Begin
        } else if i == n + 1 {
            Sym::End
        } else {
            Sym::Letter(&word[i - 1])
        }
    };
    type Node = usize;
    let mut ids: HashMap<(A::State, usize), Node> = HashMap::new();
    let mut keys: Vec<(A::State, usize)> = Vec::new();
    // For each node: its clauses as lists of node ids.
    let mut clauses: Vec<Vec<Vec<Node>>> = Vec::new();
    let mut queue: VecDeque<Node> = VecDeque::new();
    let intern = |q: A::State,
                      i: usize,
                      ids: &mut HashMap<(A::State, usize), Node>,
                      keys: &mut Vec<(A::State, usize)>,
                      queue: &mut VecDeque<Node>| {
        *ids.entry((q.clone(), i)).or_insert_with(|| {
            keys.push((q, i));
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let root = intern(a.initial(), 0, &mut ids, &mut keys, &mut queue);
    while let Some(v) = queue.pop_front() {
        let (q, i) = keys[v].clone();
        let f = if a.pruned(&q) {
            PosBool::fls()
        } else {
            a.delta(&q, sym(i))
        };
        let mut cs = Vec::new();
        'clause: for c in f.clauses() {
            let mut ls = Vec::new();
            for (q2, d) in c {
                let j = i as i64 + *d as i64;
                if j < 0 || j > n as i64 + 1 || a.pruned(q2) {
                    continue 'clause;
                }
                ls.push(intern(q2.clone(), j as usize, &mut ids, &mut keys, &mut queue));
            }
            cs.push(ls);
        }
        while clauses.len() <= v {
            clauses.push(Vec::new());
        }
        clauses[v] = cs;
    }
    // Unit propagation: count unsatisfied literals per clause.
    let total = keys.len();
    clauses.resize(total, Vec::new());
    let mut watchers: Vec<Vec<(Node, usize)>> = vec![Vec::new(); total];
    let mut missing: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut truth = vec![false; total];
    let mut work: Vec<Node> = Vec::new();
    for (v, cs) in clauses.iter().enumerate() {
        let mut m = Vec::with_capacity(cs.len());
        for (ci, c) in cs.iter().enumerate() {
            let mut lits = c.clone();
            lits.sort_unstable();
            lits.dedup();
            for &l in &lits {
                watchers[l].push((v, ci));
            }
            m.push(lits.len());
            if lits.is_empty() && !truth[v] {
                truth[v] = true;
                work.push(v);
            }
        }
        missing.push(m);
    }
    while let Some(l) = work.pop() {
        for &(v, ci) in &watchers[l] {
            missing[v][ci] -= 1;
            if missing[v][ci] == 0 && !truth[v] {
                truth[v] = true;
                work.push(v);
            }
        }
    }
    truth[root]
}
