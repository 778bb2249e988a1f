use std::collections::HashMap;

use thiserror::Error;

use super::rel::Rel;
use super::structure::Structure;
use crate::syntax::{Name, Node, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("name `{0}` has no relation in the structure")]
    UnknownName(String),
}

/// Relational semantics of `t` on `s`. Every name of `t` must be declared.
pub fn eval(s: &Structure, t: Term) -> Result<Rel, EvalError> {
    Evaluator::new(s, false).eval(t)
}

/// Like [`eval`] but undeclared names denote the empty relation.
pub fn eval_lenient(s: &Structure, t: Term) -> Rel {
    Evaluator::new(s, true)
        .eval(t)
        .expect("lenient evaluation never fails")
}

/// Memoizing evaluator; reuse it for many terms over one structure.
pub struct Evaluator<'s> {
    s: &'s Structure,
    lenient: bool,
    memo: HashMap<Term, Rel>,
}

impl<'s> Evaluator<'s> {
    pub fn new(s: &'s Structure, lenient: bool) -> Evaluator<'s> {
        Evaluator {
            s,
            lenient,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, t: Term) -> Result<Rel, EvalError> {
        if let Some(r) = self.memo.get(&t) {
            return Ok(r.clone());
        }
        let n = self.s.len();
        let r = match t.node() {
            Node::Var(a) => self.atom(a)?,
            Node::One => Rel::identity(n),
            Node::Zero => Rel::empty(n),
            Node::Top => Rel::full(n),
            Node::Seq(a, b) => self.eval(a)?.compose(&self.eval(b)?),
            Node::Sum(a, b) => self.eval(a)?.union(&self.eval(b)?),
            Node::Meet(a, b) => self.eval(a)?.intersect(&self.eval(b)?),
            Node::Star(a) => self.eval(a)?.star(),
            Node::Conv(a) => self.eval(a)?.transpose(),
            Node::Compl(a) => Rel::identity(n).difference(&self.eval(a)?),
        };
        self.memo.insert(t, r.clone());
        Ok(r)
    }

    fn atom(&self, a: Name) -> Result<Rel, EvalError> {
        match self.s.rel(a) {
            Some(r) => Ok(r.clone()),
            None if self.lenient => Ok(Rel::empty(self.s.len())),
            None => Err(EvalError::UnknownName(a.to_string())),
        }
    }
}

/// `None` when `⟦t1⟧ ⊆ ⟦t2⟧` on `s`; otherwise the least violating pair.
pub fn check_leq_on(s: &Structure, t1: Term, t2: Term) -> Result<Option<(Name, Name)>, EvalError> {
    let mut ev = Evaluator::new(s, false);
    let r1 = ev.eval(t1)?;
    let r2 = ev.eval(t2)?;
    Ok(r1
        .difference(&r2)
        .pairs()
        .next()
        .map(|(i, j)| (s.vertex(i), s.vertex(j))))
}

/// Lenient variant of [`check_leq_on`].
pub fn check_leq_on_lenient(s: &Structure, t1: Term, t2: Term) -> Option<(Name, Name)> {
    let mut ev = Evaluator::new(s, true);
    let r1 = ev.eval(t1).expect("lenient");
    let r2 = ev.eval(t2).expect("lenient");
    r1.difference(&r2)
        .pairs()
        .next()
        .map(|(i, j)| (s.vertex(i), s.vertex(j)))
}
