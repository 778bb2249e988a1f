//! Terms, surface syntax and the rewriting normal forms.

mod gen;
mod normalize;
mod parse;
mod signature;
mod term;

pub use gen::TermGen;
pub use normalize::{
    normalize_converse, normalize_tests, normalize_top, to_kl, wrap_for_decision, WrapError,
};
pub use parse::{is_test_term, parse, parse_term, SyntaxError};
pub use signature::{
    complement, dual, is_derived, is_reserved, Signature, COMPL_PREFIX, C_TOP, DUAL_PREFIX,
    L_MARK, R_MARK,
};
pub use term::{Name, Node, Term};

/// `t.size()`, the number of symbols.
pub fn term_size(t: Term) -> usize {
    t.size()
}

/// `t.iw()`, the intersection width.
pub fn intersection_width(t: Term) -> usize {
    t.iw()
}
