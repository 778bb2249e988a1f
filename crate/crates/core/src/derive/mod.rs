//! Labelled terms and their derivatives with respect to atomic runs.

mod closure;
mod eps;
mod lterm;
mod step;

pub use closure::{closure, closure_term};
pub use eps::{eps, eps_label, nullable};
pub use lterm::{label_vector, LNode, LTerm, Label};
pub use step::{
    reach, semantics_via_derivatives, step, successors, trace, AtomicStep, Pointed, StepKind,
};

use crate::syntax::{Node, Term};

/// Cosmetic form used when printing traces: `(@y.1) ;₁ u` reads as `@y.u`
/// and `(@y.m) ;₁ u` as `@y.(m;u)`, recursively. Not used by any procedure.
pub fn display_simplify(l: LTerm) -> LTerm {
    match l.node() {
        LNode::Zero | LNode::At(..) => l,
        LNode::Seq(inner, u) => match display_simplify(inner).node() {
            LNode::At(y, m) if m.node() == Node::One => LTerm::at(y, u),
            LNode::At(y, m) => LTerm::at(y, Term::seq(m, u)),
            _ => LTerm::seq(display_simplify(inner), u),
        },
        LNode::Meet(a, b) => LTerm::meet(display_simplify(a), display_simplify(b)),
    }
}
