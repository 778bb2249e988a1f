use super::lterm::{LNode, LTerm, Label};
use crate::syntax::{Node, Term};

/// Whether `t` accepts the empty run without forking: `1` and stars do,
/// atoms, `0` and intersections do not.
pub fn nullable(t: Term) -> bool {
    match t.node() {
        Node::One | Node::Star(_) => true,
        Node::Seq(a, b) => nullable(a) && nullable(b),
        Node::Sum(a, b) => nullable(a) || nullable(b),
        _ => false,
    }
}

/// `EPS_z(λ)`.
pub fn eps(z: Label, l: LTerm) -> bool {
    match l.node() {
        LNode::Zero | LNode::Meet(..) => false,
        LNode::At(x, t) => x == z && nullable(t),
        LNode::Seq(inner, u) => eps(z, inner) && nullable(u),
    }
}

/// The unique `z` with `EPS_z(λ)`, if any.
pub fn eps_label(l: LTerm) -> Option<Label> {
    match l.node() {
        LNode::Zero | LNode::Meet(..) => None,
        LNode::At(x, t) => nullable(t).then_some(x),
        LNode::Seq(inner, u) => {
            if nullable(u) {
                eps_label(inner)
            } else {
                None
            }
        }
    }
}
