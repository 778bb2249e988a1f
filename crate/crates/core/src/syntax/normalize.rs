use thiserror::Error;

use super::signature::{complement, dual, C_TOP, L_MARK, R_MARK};
use super::term::{Name, Node, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WrapError {
    #[error("term is not a KL term: {0}")]
    NotKl(String),
    #[error("reserved name `{0}` already occurs in the term")]
    ReservedName(String),
}

/// Rebuilds `t` bottom-up, applying `f` to every rebuilt node.
fn rewrite(t: Term, f: &mut impl FnMut(Term) -> Term) -> Term {
    let rebuilt = match t.node() {
        Node::Var(_) | Node::One | Node::Zero | Node::Top => t,
        Node::Seq(a, b) => Term::seq(rewrite(a, f), rewrite(b, f)),
        Node::Sum(a, b) => Term::sum(rewrite(a, f), rewrite(b, f)),
        Node::Meet(a, b) => Term::meet(rewrite(a, f), rewrite(b, f)),
        Node::Star(a) => Term::star(rewrite(a, f)),
        Node::Conv(a) => Term::conv(rewrite(a, f)),
        Node::Compl(a) => Term::compl(rewrite(a, f)),
    };
    f(rebuilt)
}

/// `T ⇝ c_top*`.
pub fn normalize_top(t: Term) -> Term {
    rewrite(t, &mut |u| match u.node() {
        Node::Top => Term::star(Term::var(C_TOP)),
        _ => u,
    })
}

/// Converse of a converse-free term, pushed to the atoms.
fn converse_of(t: Term) -> Term {
    match t.node() {
        Node::Var(n) => Term::name(dual(n)),
        Node::One | Node::Zero | Node::Top => t,
        Node::Seq(a, b) => Term::seq(converse_of(b), converse_of(a)),
        Node::Sum(a, b) => Term::sum(converse_of(a), converse_of(b)),
        Node::Meet(a, b) => Term::meet(converse_of(a), converse_of(b)),
        Node::Star(a) => Term::star(converse_of(a)),
        // Tests denote subsets of the identity and are symmetric.
        Node::Compl(_) => t,
        Node::Conv(a) => a,
    }
}

/// Converse normal form: `~` is eliminated, `a~` becomes the dual name.
pub fn normalize_converse(t: Term) -> Term {
    rewrite(t, &mut |u| match u.node() {
        Node::Conv(a) => converse_of(a),
        _ => u,
    })
}

fn complement_of(p: Term) -> Term {
    match p.node() {
        Node::Var(n) => Term::name(complement(n)),
        Node::One => Term::zero(),
        Node::Zero => Term::one(),
        Node::Seq(a, b) => Term::sum(complement_of(a), complement_of(b)),
        Node::Sum(a, b) => Term::seq(complement_of(a), complement_of(b)),
        Node::Compl(a) => a,
        _ => Term::compl(p),
    }
}

/// Pushes `^-` down to test atoms, introducing complement names.
pub fn normalize_tests(t: Term) -> Term {
    rewrite(t, &mut |u| match u.node() {
        Node::Compl(a) => complement_of(a),
        _ => u,
    })
}

/// Full translation into a KL term: tops, then converses, then tests.
pub fn to_kl(t: Term) -> Term {
    normalize_tests(normalize_converse(normalize_top(t)))
}

/// True when `c_top` occurs only as the body of a star.
fn c_top_only_starred(t: Term, c_top: Name) -> bool {
    match t.node() {
        Node::Var(n) => n != c_top,
        Node::Star(a) if a.node() == Node::Var(c_top) => true,
        _ => t.children().into_iter().all(|c| c_top_only_starred(c, c_top)),
    }
}

/// `c_top* ; __l ; t ; __r ; c_top*`.
pub fn wrap_for_decision(t: Term) -> Result<Term, WrapError> {
    if !t.is_kl() {
        return Err(WrapError::NotKl(t.render()));
    }
    for mark in [L_MARK, R_MARK] {
        if t.contains_name(Name::new(mark)) {
            return Err(WrapError::ReservedName(mark.to_string()));
        }
    }
    if !c_top_only_starred(t, Name::new(C_TOP)) {
        return Err(WrapError::ReservedName(C_TOP.to_string()));
    }
    let top = Term::star(Term::var(C_TOP));
    Ok(Term::seq_all(&[
        top,
        Term::var(L_MARK),
        t,
        Term::var(R_MARK),
        top,
    ]))
}
