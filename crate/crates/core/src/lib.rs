//! Decision procedures for the equational theory of the positive calculus of
//! relations with transitive closure, tests and nominals.
//!
//! Layers, bottom-up: [`syntax`] (terms and normal forms), [`model`] (finite
//! structures and their semantics), [`graphs`] (graph and run languages,
//! homomorphism oracle), [`derive`] (derivatives of labelled terms) and
//! [`automata`] (two-way alternating automata and the decision pipeline).

pub mod syntax;
pub mod model;
pub mod graphs;
pub mod derive;
pub mod automata;
