//! Two-way alternating automata over words of structures, their conversion
//! to deterministic automata, constraint languages and the decision
//! pipeline.

mod build;
mod constraints;
mod decide;
mod fast;
mod horn;
mod letters;
mod nfa;
mod posbool;
mod twoafa;

pub use build::{vertex_label, vertex_number, Cl, KState, KlAutomaton, LetterInfo};
pub use constraints::{
    nfa_conv, nfa_inac, nfa_incon, nfa_noms, nfa_tests, nfa_top, Constraint, ConstraintDfa,
};
pub use decide::{
    decide, decision_term, refute, Bounds, Certificate, Counterexample, DecideError, DecideOptions,
    Mode, Outcome, Sweep, Verdict,
};
pub use fast::FastDfa;
pub use horn::{twoafa_to_nfa, HornDfa, Summary};
pub use letters::{
    letter_count, letter_signature, letters, quotient_letters, AlphabetSpec, LetterClass,
};
pub use nfa::{explore, nfa_complement, nfa_intersect, nfa_union, Dfa, Nfa};
pub use posbool::{Dnf, Lit, PosBool};
pub use twoafa::{membership, Sym, TwoAfa};

/// `build_2afa(k, t)`: the automaton of a KL term at width `k`.
pub fn build_2afa(k: usize, t: crate::syntax::Term) -> KlAutomaton {
    KlAutomaton::new(k, t)
}
