use std::collections::BTreeSet;
use std::fmt::Debug;

/// A literal: a state together with a head move in `{-1, 0, +1}`.
pub type Lit<S> = (S, i8);

/// A positive boolean formula in disjunctive normal form. `true` is the
/// single empty clause, `false` has no clauses.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PosBool<S: Ord> {
    clauses: BTreeSet<BTreeSet<Lit<S>>>,
}

impl<S: Ord + Clone + Debug> PosBool<S> {
    pub fn fls() -> Self {
        PosBool {
            clauses: BTreeSet::new(),
        }
    }

    pub fn tru() -> Self {
        PosBool {
            clauses: BTreeSet::from([BTreeSet::new()]),
        }
    }

    pub fn lit(q: S, d: i8) -> Self {
        debug_assert!((-1..=1).contains(&d));
        PosBool {
            clauses: BTreeSet::from([BTreeSet::from([(q, d)])]),
        }
    }

    pub fn clause(lits: impl IntoIterator<Item = Lit<S>>) -> Self {
        PosBool {
            clauses: BTreeSet::from([lits.into_iter().collect()]),
        }
    }

    pub fn is_false(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    pub fn clauses(&self) -> impl Iterator<Item = &BTreeSet<Lit<S>>> {
        self.clauses.iter()
    }

    pub fn or(mut self, other: Self) -> Self {
        self.clauses.extend(other.clauses);
        self
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit<S>>) {
        self.clauses.insert(lits.into_iter().collect());
    }

    pub fn and(&self, other: &Self) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.clauses {
            for b in &other.clauses {
                out.insert(a.union(b).cloned().collect());
            }
        }
        PosBool { clauses: out }
    }

    /// Evaluates under an assignment of literals.
    pub fn eval(&self, mut val: impl FnMut(&S, i8) -> bool) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(|(q, d)| val(q, *d)))
    }
}

/// A monotone boolean function over atoms of type `A`, kept as the antichain
/// of its minimal clauses (a canonical form).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Dnf<A: Ord> {
    clauses: Vec<Vec<A>>,
}

impl<A: Ord + Clone> Dnf<A> {
    pub fn fls() -> Self {
        Dnf { clauses: vec![] }
    }

    pub fn tru() -> Self {
        Dnf {
            clauses: vec![vec![]],
        }
    }

    pub fn atom(a: A) -> Self {
        Dnf {
            clauses: vec![vec![a]],
        }
    }

    pub fn is_false(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.clauses.first().is_some_and(|c| c.is_empty())
    }

    pub fn clauses(&self) -> &[Vec<A>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Builds from arbitrary clauses, dropping subsumed ones.
    pub fn from_clauses(clauses: impl IntoIterator<Item = Vec<A>>) -> Self {
        let mut cs: Vec<Vec<A>> = clauses
            .into_iter()
            .map(|mut c| {
                c.sort();
                c.dedup();
                c
            })
            .collect();
        cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cs.dedup();
        let mut kept: Vec<Vec<A>> = Vec::with_capacity(cs.len());
        for c in cs {
            if !kept.iter().any(|k| is_subset_sorted(k, &c)) {
                kept.push(c);
            }
        }
        kept.sort();
        Dnf { clauses: kept }
    }

    pub fn or(&self, other: &Self) -> Self {
        if other.is_false() {
            return self.clone();
        }
        if self.is_false() {
            return other.clone();
        }
        Dnf::from_clauses(self.clauses.iter().chain(&other.clauses).cloned())
    }

    pub fn and(&self, other: &Self) -> Self {
        if self.is_false() || other.is_false() {
            return Dnf::fls();
        }
        if self.is_true() {
            return other.clone();
        }
        if other.is_true() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.clauses.len() * other.clauses.len());
        for a in &self.clauses {
            for b in &other.clauses {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                out.push(c);
            }
        }
        Dnf::from_clauses(out)
    }

    /// Whether `self` implies `other` (every clause of `self` is subsumed).
    pub fn implies(&self, other: &Self) -> bool {
        self.clauses
            .iter()
            .all(|c| other.clauses.iter().any(|k| is_subset_sorted(k, c)))
    }

    /// Replaces every atom by a formula over a new atom type.
    pub fn substitute<B: Ord + Clone>(&self, mut f: impl FnMut(&A) -> Dnf<B>) -> Dnf<B> {
        let mut acc = Dnf::fls();
        for c in &self.clauses {
            let mut term = Dnf::tru();
            for a in c {
                term = term.and(&f(a));
                if term.is_false() {
                    break;
                }
            }
            acc = acc.or(&term);
        }
        acc
    }

    pub fn eval(&self, mut val: impl FnMut(&A) -> bool) -> bool {
        self.clauses.iter().any(|c| c.iter().all(&mut val))
    }

    /// Rewrites each clause through `f` (which must preserve meaning).
    pub fn map_clauses(&self, mut f: impl FnMut(&mut Vec<A>)) -> Self {
        Dnf::from_clauses(self.clauses.iter().map(|c| {
            let mut c = c.clone();
            f(&mut c);
            c
        }))
    }
}

fn is_subset_sorted<A: Ord>(small: &[A], big: &[A]) -> bool {
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}
