use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;

use crate::syntax::{Name, Node, Term};

/// A label: a structure vertex, or the distinguished isolated vertex `•`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    V(Name),
    Bullet,
}

impl Label {
    pub fn v(s: &str) -> Label {
        Label::V(Name::new(s))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::V(n) => f.write_str(n.as_str()),
            Label::Bullet => f.write_str("•"),
        }
    }
}

/// A hash-consed labelled term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LTerm(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LNode {
    /// The empty labelled term; every zero-denoting shape collapses here.
    Zero,
    At(Label, Term),
    Seq(LTerm, Term),
    Meet(LTerm, LTerm),
}

struct Entry {
    node: LNode,
    labels: Arc<[Label]>,
}

struct LTable {
    entries: Vec<Entry>,
    index: HashMap<LNode, u32>,
}

fn table() -> &'static RwLock<LTable> {
    static TABLE: OnceLock<RwLock<LTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(LTable {
            entries: Vec::new(),
            index: HashMap::new(),
        })
    })
}

impl LTerm {
    fn intern(node: LNode) -> LTerm {
        if let Some(&id) = table().read().index.get(&node) {
            return LTerm(id);
        }
        let labels: Arc<[Label]> = match node {
            LNode::Zero => Arc::from(vec![]),
            LNode::At(x, _) => Arc::from(vec![x]),
            LNode::Seq(l, _) => l.labels(),
            LNode::Meet(a, b) => {
                let mut v = a.labels().to_vec();
                v.extend_from_slice(&b.labels());
                Arc::from(v)
            }
        };
        let mut t = table().write();
        if let Some(&id) = t.index.get(&node) {
            return LTerm(id);
        }
        let id = t.entries.len() as u32;
        t.entries.push(Entry { node, labels });
        t.index.insert(node, id);
        LTerm(id)
    }

    pub fn zero() -> LTerm {
        LTerm::intern(LNode::Zero)
    }

    /// `@x.t`; `@x.0` is zero.
    pub fn at(x: Label, t: Term) -> LTerm {
        if t.node() == Node::Zero {
            return LTerm::zero();
        }
        LTerm::intern(LNode::At(x, t))
    }

    /// `λ ;₁ u`; zero on either side gives zero.
    pub fn seq(l: LTerm, u: Term) -> LTerm {
        if l.is_zero() || u.node() == Node::Zero {
            return LTerm::zero();
        }
        LTerm::intern(LNode::Seq(l, u))
    }

    /// `λ1 ∩₁ λ2`; zero on either side gives zero.
    pub fn meet(a: LTerm, b: LTerm) -> LTerm {
        if a.is_zero() || b.is_zero() {
            return LTerm::zero();
        }
        LTerm::intern(LNode::Meet(a, b))
    }

    pub fn node(self) -> LNode {
        table().read().entries[self.0 as usize].node
    }

    pub fn is_zero(self) -> bool {
        self.node() == LNode::Zero
    }

    /// The left-to-right label vector.
    pub fn labels(self) -> Arc<[Label]> {
        table().read().entries[self.0 as usize].labels.clone()
    }

    pub fn width(self) -> usize {
        table().read().entries[self.0 as usize].labels.len()
    }

    /// Replaces the whole label vector; `labels.len()` must equal the width.
    pub fn relabel(self, labels: &[Label]) -> LTerm {
        assert_eq!(labels.len(), self.width());
        self.relabel_from(labels).0
    }

    fn relabel_from<'a>(self, labels: &'a [Label]) -> (LTerm, &'a [Label]) {
        match self.node() {
            LNode::Zero => (self, labels),
            LNode::At(_, t) => (LTerm::at(labels[0], t), &labels[1..]),
            LNode::Seq(l, u) => {
                let (l2, rest) = l.relabel_from(labels);
                (LTerm::seq(l2, u), rest)
            }
            LNode::Meet(a, b) => {
                let (a2, rest) = a.relabel_from(labels);
                let (b2, rest) = b.relabel_from(rest);
                (LTerm::meet(a2, b2), rest)
            }
        }
    }

    /// `λ[x/i]`: replaces only the `i`-th (1-based) label occurrence.
    pub fn substitute(self, i: usize, x: Label) -> LTerm {
        let mut labels = self.labels().to_vec();
        labels[i - 1] = x;
        self.relabel(&labels)
    }

    pub fn render(self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(self, out: &mut String) {
        match self.node() {
            LNode::Zero => out.push('0'),
            LNode::At(x, t) => out.push_str(&format!("@{}.{}", x, wrap_term(t))),
            LNode::Seq(l, u) => {
                out.push('(');
                l.render_into(out);
                out.push_str(") ;₁ ");
                out.push_str(&wrap_term(u));
            }
            LNode::Meet(a, b) => {
                out.push('(');
                a.render_into(out);
                out.push_str(") ∩₁ (");
                b.render_into(out);
                out.push(')');
            }
        }
    }
}

fn wrap_term(t: Term) -> String {
    match t.node() {
        Node::Var(_) | Node::One | Node::Zero | Node::Top => t.render(),
        _ => format!("({})", t.render()),
    }
}

impl fmt::Debug for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The label vector of `λ`.
pub fn label_vector(l: LTerm) -> Vec<Label> {
    l.labels().to_vec()
}
