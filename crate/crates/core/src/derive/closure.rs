use std::collections::BTreeSet;

use super::lterm::{LNode, LTerm, Label};
use crate::syntax::{Node, Term};

/// `cl_L(t)` for a KL term.
pub fn closure_term(t: Term, labels: &[Label]) -> BTreeSet<LTerm> {
    let mut out = BTreeSet::new();
    cl_term(t, labels, &mut out);
    out
}

/// `cl_L(λ)`.
pub fn closure(l: LTerm, labels: &[Label]) -> BTreeSet<LTerm> {
    match l.node() {
        LNode::Zero => BTreeSet::from([LTerm::zero()]),
        LNode::At(_, t) => closure_term(t, labels),
        LNode::Seq(inner, u) => {
            let mut out: BTreeSet<LTerm> = closure(inner, labels)
                .into_iter()
                .map(|m| LTerm::seq(m, u))
                .collect();
            cl_term(u, labels, &mut out);
            out
        }
        LNode::Meet(a, b) => {
            let mut out = ones(labels);
            let ca = closure(a, labels);
            let cb = closure(b, labels);
            for &x in &ca {
                for &y in &cb {
                    out.insert(LTerm::meet(x, y));
                }
            }
            out
        }
    }
}

fn ones(labels: &[Label]) -> BTreeSet<LTerm> {
    labels.iter().map(|&z| LTerm::at(z, Term::one())).collect()
}

fn anchored(t: Term, labels: &[Label], out: &mut BTreeSet<LTerm>) {
    out.extend(labels.iter().map(|&z| LTerm::at(z, t)));
}

fn cl_term(t: Term, labels: &[Label], out: &mut BTreeSet<LTerm>) {
    match t.node() {
        Node::Zero => {
            out.insert(LTerm::zero());
        }
        Node::One => anchored(t, labels, out),
        Node::Var(_) => {
            anchored(t, labels, out);
            anchored(Term::one(), labels, out);
        }
        Node::Seq(a, b) => {
            anchored(t, labels, out);
            for m in closure_term(a, labels) {
                out.insert(LTerm::seq(m, b));
            }
            cl_term(b, labels, out);
        }
        Node::Sum(a, b) => {
            anchored(t, labels, out);
            cl_term(a, labels, out);
            cl_term(b, labels, out);
        }
        Node::Star(a) => {
            anchored(t, labels, out);
            for m in closure_term(a, labels) {
                out.insert(LTerm::seq(m, t));
            }
        }
        Node::Meet(a, b) => {
            anchored(t, labels, out);
            anchored(Term::one(), labels, out);
            let ca = closure_term(a, labels);
            let cb = closure_term(b, labels);
            for &x in &ca {
                for &y in &cb {
                    out.insert(LTerm::meet(x, y));
                }
            }
        }
        Node::Top | Node::Conv(_) | Node::Compl(_) => {
            panic!("closure is defined on KL terms only: {}", t.render())
        }
    }
}
