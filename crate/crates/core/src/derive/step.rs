use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::eps::{eps_label, nullable};
use super::lterm::{LNode, LTerm, Label};
use crate::model::{Rel, Structure};
use crate::syntax::{Name, Node, Term};

/// `S•`: a structure plus the isolated vertex `•`, seen through labels.
#[derive(Clone, Debug)]
pub struct Pointed {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    succ: HashMap<Name, Vec<Vec<usize>>>,
    /// No fork or join happens at `•`.
    frozen: bool,
}

impl Pointed {
    pub fn new(s: &Structure) -> Pointed {
        Pointed::build(s, true, false)
    }

    /// `S` itself, without the extra vertex.
    pub fn plain(s: &Structure) -> Pointed {
        Pointed::build(s, false, false)
    }

    /// `S•` where threads at `•` stay idle: no fork or join happens there,
    /// so each `•` label of a term survives unchanged and in order.
    pub fn local(s: &Structure) -> Pointed {
        Pointed::build(s, true, true)
    }

    fn build(s: &Structure, bullet: bool, frozen: bool) -> Pointed {
        let mut labels: Vec<Label> = s.universe().iter().map(|&v| Label::V(v)).collect();
        if bullet {
            labels.push(Label::Bullet);
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let succ = s
            .names()
            .map(|a| {
                let r = s.rel(a).expect("declared");
                let mut rows: Vec<Vec<usize>> =
                    (0..s.len()).map(|i| r.successors(i).collect()).collect();
                if bullet {
                    rows.push(vec![]);
                }
                (a, rows)
            })
            .collect();
        Pointed {
            labels,
            index,
            succ,
            frozen,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, x: Label) -> bool {
        self.index.contains_key(&x)
    }

    /// `a`-successors of `x`; undeclared names have none.
    pub fn successors(&self, a: Name, x: Label) -> impl Iterator<Item = Label> + '_ {
        let row = match (self.succ.get(&a), self.index.get(&x)) {
            (Some(rows), Some(&i)) => rows[i].as_slice(),
            _ => &[],
        };
        row.iter().map(move |&j| self.labels[j])
    }
}

/// The shape of an atomic run.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StepKind {
    /// An `a`-edge from the source at `pos` to `target`.
    Var { name: Name, target: Label },
    /// Duplicates the label at `pos`.
    Fork,
    /// Merges the labels at `pos` and `pos + 1` (which must be equal).
    Join,
}

/// An atomic run over `S•`, with its source label vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AtomicStep {
    pub kind: StepKind,
    /// 1-based position in `sources`.
    pub pos: usize,
    pub sources: Vec<Label>,
}

impl AtomicStep {
    /// The label vector after the step.
    pub fn targets(&self) -> Vec<Label> {
        let mut v = self.sources.clone();
        let i = self.pos - 1;
        match self.kind {
            StepKind::Var { target, .. } => v[i] = target,
            StepKind::Fork => v.insert(i, v[i]),
            StepKind::Join => {
                v.remove(i);
            }
        }
        v
    }
}

impl fmt::Display for AtomicStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src: Vec<String> = self.sources.iter().map(|l| l.to_string()).collect();
        let n = self.sources.len();
        match self.kind {
            StepKind::Var { name, target } => write!(
                f,
                "{}^{}_{} [{}] -> {}",
                name,
                n,
                self.pos,
                src.join(","),
                target
            ),
            StepKind::Fork => write!(f, "f^{}_{} [{}]", n, self.pos, src.join(",")),
            StepKind::Join => write!(f, "j^{}_{} [{}]", n - 1, self.pos, src.join(",")),
        }
    }
}

/// One-step derivatives of `λ` over `s` (already pointed if `•` is wanted).
pub fn step(s: &Pointed, l: LTerm) -> Vec<(AtomicStep, LTerm)> {
    let sources = l.labels().to_vec();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (kind, pos, next) in raw_steps(s, l) {
        if seen.insert((kind, pos, next)) {
            out.push((
                AtomicStep {
                    kind,
                    pos,
                    sources: sources.clone(),
                },
                next,
            ));
        }
    }
    out
}

/// Successor terms only, without descriptors.
pub fn successors(s: &Pointed, l: LTerm) -> Vec<LTerm> {
    let mut v: Vec<LTerm> = raw_steps(s, l).into_iter().map(|(_, _, n)| n).collect();
    v.sort_unstable();
    v.dedup();
    v
}

type Raw = (StepKind, usize, LTerm);

fn raw_steps(s: &Pointed, l: LTerm) -> Vec<Raw> {
    let mut out = Vec::new();
    steps_into(s, l, &mut out);
    out
}

fn steps_into(s: &Pointed, l: LTerm, out: &mut Vec<Raw>) {
    match l.node() {
        LNode::Zero => {}
        LNode::At(x, t) => steps_at(s, x, t, out),
        LNode::Seq(inner, u) => {
            for (k, p, n) in raw_steps(s, inner) {
                out.push((k, p, LTerm::seq(n, u)));
            }
            if let Some(z) = eps_label(inner) {
                steps_at(s, z, u, out);
            }
        }
        LNode::Meet(a, b) => {
            let wa = a.width();
            for (k, p, n) in raw_steps(s, a) {
                out.push((k, p, LTerm::meet(n, b)));
            }
            for (k, p, n) in raw_steps(s, b) {
                out.push((k, p + wa, LTerm::meet(a, n)));
            }
            if let (Some(za), Some(zb)) = (eps_label(a), eps_label(b)) {
                if za == zb && !(s.frozen && za == Label::Bullet) {
                    out.push((StepKind::Join, 1, LTerm::at(za, Term::one())));
                }
            }
        }
    }
}

fn steps_at(s: &Pointed, x: Label, t: Term, out: &mut Vec<Raw>) {
    match t.node() {
        Node::One | Node::Zero => {}
        Node::Var(a) => {
            for y in s.successors(a, x) {
                out.push((
                    StepKind::Var { name: a, target: y },
                    1,
                    LTerm::at(y, Term::one()),
                ));
            }
        }
        Node::Seq(a, b) => {
            let mut inner = Vec::new();
            steps_at(s, x, a, &mut inner);
            for (k, p, n) in inner {
                out.push((k, p, LTerm::seq(n, b)));
            }
            if nullable(a) {
                steps_at(s, x, b, out);
            }
        }
        Node::Sum(a, b) => {
            steps_at(s, x, a, out);
            steps_at(s, x, b, out);
        }
        Node::Star(a) => {
            let mut inner = Vec::new();
            steps_at(s, x, a, &mut inner);
            for (k, p, n) in inner {
                out.push((k, p, LTerm::seq(n, t)));
            }
        }
        Node::Meet(_, _) if s.frozen && x == Label::Bullet => {}
        Node::Meet(a, b) => out.push((
            StepKind::Fork,
            1,
            LTerm::meet(LTerm::at(x, a), LTerm::at(x, b)),
        )),
        Node::Top | Node::Conv(_) | Node::Compl(_) => {
            panic!("derivatives are defined on KL terms only: {}", t.render())
        }
    }
}

/// `{λ} ∪ D^S(λ)`: everything reachable by zero or more steps.
pub fn reach(s: &Pointed, l: LTerm) -> HashSet<LTerm> {
    let mut seen = HashSet::from([l]);
    let mut queue = VecDeque::from([l]);
    while let Some(m) = queue.pop_front() {
        for n in successors(s, m) {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen
}

/// `{(x, z) | some λ' reachable from @x.t has EPS_z(λ')}`.
pub fn semantics_via_derivatives(s: &Structure, t: Term) -> Rel {
    let p = Pointed::plain(s);
    let mut r = Rel::empty(s.len());
    for (i, &x) in s.universe().iter().enumerate() {
        for m in reach(&p, LTerm::at(Label::V(x), t)) {
            if let Some(Label::V(z)) = eps_label(m) {
                let j = s.index_of(z).expect("labels stay in the structure");
                r.insert(i, j);
            }
        }
    }
    r
}

/// A shortest derivation from `@x.t` to a term with `EPS_z`, for `z` given
/// or any `z` when `None`.
pub fn trace(s: &Structure, t: Term, x: Name, z: Option<Name>) -> Option<Vec<(AtomicStep, LTerm)>> {
    let p = Pointed::plain(s);
    let start = LTerm::at(Label::V(x), t);
    let accept = |m: LTerm| match (eps_label(m), z) {
        (Some(Label::V(w)), Some(z)) => w == z,
        (Some(_), None) => true,
        _ => false,
    };
    let mut parent: HashMap<LTerm, (LTerm, AtomicStep)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = HashSet::from([start]);
    while let Some(m) = queue.pop_front() {
        if accept(m) {
            let mut path = Vec::new();
            let mut cur = m;
            while let Some((prev, st)) = parent.get(&cur) {
                path.push((st.clone(), cur));
                cur = *prev;
            }
            path.reverse();
            return Some(path);
        }
        for (st, n) in step(&p, m) {
            if seen.insert(n) {
                parent.insert(n, (m, st));
                queue.push_back(n);
            }
        }
    }
    None
}
