use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use parking_lot::RwLock;

/// An interned relation name.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Name(u32);

struct NameTable {
    strings: Vec<&'static str>,
    index: HashMap<&'static str, u32>,
}

fn names() -> &'static RwLock<NameTable> {
    static TABLE: OnceLock<RwLock<NameTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(NameTable {
            strings: Vec::new(),
            index: HashMap::new(),
        })
    })
}

impl Name {
    pub fn new(s: &str) -> Name {
        if let Some(&id) = names().read().index.get(s) {
            return Name(id);
        }
        let mut table = names().write();
        if let Some(&id) = table.index.get(s) {
            return Name(id);
        }
        // Names live for the whole process; the set is small in practice.
        let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
        let id = table.strings.len() as u32;
        table.strings.push(leaked);
        table.index.insert(leaked, id);
        Name(id)
    }

    pub fn as_str(self) -> &'static str {
        names().read().strings[self.0 as usize]
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    /// Lexicographic, so that every derived ordering is independent of
    /// interning order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            return std::cmp::Ordering::Equal;
        }
        self.as_str().cmp(other.as_str())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A hash-consed term. Equal terms have equal ids, so comparison and hashing
/// are O(1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Var(Name),
    One,
    Zero,
    Top,
    Seq(Term, Term),
    Sum(Term, Term),
    Meet(Term, Term),
    Star(Term),
    Conv(Term),
    /// Complement relative to the identity; only meaningful on test subterms.
    Compl(Term),
}

struct TermTable {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
}

fn terms() -> &'static RwLock<TermTable> {
    static TABLE: OnceLock<RwLock<TermTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(TermTable {
            nodes: Vec::new(),
            index: HashMap::new(),
        })
    })
}

impl Term {
    pub fn mk(node: Node) -> Term {
        if let Some(&id) = terms().read().index.get(&node) {
            return Term(id);
        }
        let mut table = terms().write();
        if let Some(&id) = table.index.get(&node) {
            return Term(id);
        }
        let id = table.nodes.len() as u32;
        table.nodes.push(node);
        table.index.insert(node, id);
        Term(id)
    }

    pub fn node(self) -> Node {
        terms().read().nodes[self.0 as usize]
    }

    pub fn var(name: &str) -> Term {
        Term::mk(Node::Var(Name::new(name)))
    }
    pub fn name(name: Name) -> Term {
        Term::mk(Node::Var(name))
    }
    pub fn one() -> Term {
        Term::mk(Node::One)
    }
    pub fn zero() -> Term {
        Term::mk(Node::Zero)
    }
    pub fn top() -> Term {
        Term::mk(Node::Top)
    }
    pub fn seq(a: Term, b: Term) -> Term {
        Term::mk(Node::Seq(a, b))
    }
    pub fn sum(a: Term, b: Term) -> Term {
        Term::mk(Node::Sum(a, b))
    }
    pub fn meet(a: Term, b: Term) -> Term {
        Term::mk(Node::Meet(a, b))
    }
    pub fn star(a: Term) -> Term {
        Term::mk(Node::Star(a))
    }
    pub fn conv(a: Term) -> Term {
        Term::mk(Node::Conv(a))
    }
    pub fn compl(a: Term) -> Term {
        Term::mk(Node::Compl(a))
    }

    /// Left-nested sequential composition of a nonempty list.
    pub fn seq_all(items: &[Term]) -> Term {
        let mut it = items.iter().copied();
        let first = it.next().expect("seq_all needs at least one term");
        it.fold(first, Term::seq)
    }

    /// `t+`, written `t;t*`.
    pub fn plus(a: Term) -> Term {
        Term::seq(a, Term::star(a))
    }

    pub fn children(self) -> Vec<Term> {
        match self.node() {
            Node::Var(_) | Node::One | Node::Zero | Node::Top => vec![],
            Node::Seq(a, b) | Node::Sum(a, b) | Node::Meet(a, b) => vec![a, b],
            Node::Star(a) | Node::Conv(a) | Node::Compl(a) => vec![a],
        }
    }

    /// Number of symbols: atoms count 1, every operator adds 1.
    pub fn size(self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    /// Intersection width: additive on `&`, maximum on `;` and `+`.
    pub fn iw(self) -> usize {
        match self.node() {
            Node::Var(_) | Node::One | Node::Zero | Node::Top => 1,
            Node::Seq(a, b) | Node::Sum(a, b) => a.iw().max(b.iw()),
            Node::Meet(a, b) => a.iw() + b.iw(),
            Node::Star(a) | Node::Conv(a) | Node::Compl(a) => a.iw(),
        }
    }

    /// True when the term avoids `T`, `~` and `^-`.
    pub fn is_kl(self) -> bool {
        match self.node() {
            Node::Top | Node::Conv(_) | Node::Compl(_) => false,
            _ => self.children().into_iter().all(Term::is_kl),
        }
    }

    pub fn is_star_free(self) -> bool {
        match self.node() {
            Node::Star(_) => false,
            _ => self.children().into_iter().all(Term::is_star_free),
        }
    }

    pub fn names(self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(self, out: &mut BTreeSet<Name>) {
        match self.node() {
            Node::Var(n) => {
                out.insert(n);
            }
            _ => {
                for c in self.children() {
                    c.collect_names(out);
                }
            }
        }
    }

    pub fn contains_name(self, name: Name) -> bool {
        match self.node() {
            Node::Var(n) => n == name,
            _ => self.children().into_iter().any(|c| c.contains_name(name)),
        }
    }

    pub fn render(self) -> String {
        let mut s = String::new();
        render_into(self, 0, &mut s);
        s
    }
}

// Binding strength: `+` < `&` < `;` < postfix < atom.
fn level(t: Term) -> u8 {
    match t.node() {
        Node::Sum(..) => 0,
        Node::Meet(..) => 1,
        Node::Seq(..) => 2,
        Node::Star(_) | Node::Conv(_) | Node::Compl(_) => 3,
        _ => 4,
    }
}

fn render_into(t: Term, min: u8, out: &mut String) {
    let paren = level(t) < min;
    if paren {
        out.push('(');
    }
    match t.node() {
        Node::Var(n) => out.push_str(n.as_str()),
        Node::One => out.push('1'),
        Node::Zero => out.push('0'),
        Node::Top => out.push('T'),
        Node::Sum(a, b) => {
            render_into(a, 0, out);
            out.push_str(" + ");
            render_into(b, 1, out);
        }
        Node::Meet(a, b) => {
            render_into(a, 1, out);
            out.push_str(" & ");
            render_into(b, 2, out);
        }
        Node::Seq(a, b) => {
            render_into(a, 2, out);
            out.push(';');
            render_into(b, 3, out);
        }
        Node::Star(a) => {
            render_into(a, 3, out);
            out.push('*');
        }
        Node::Conv(a) => {
            render_into(a, 3, out);
            out.push('~');
        }
        Node::Compl(a) => {
            render_into(a, 3, out);
            out.push_str("^-");
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", self.render())
    }
}
