//! Graphs with source and target interfaces, runs, their languages, and the
//! graph-language inclusion oracle.

mod bigraph;
mod lang;
mod oracle;
mod runs;

pub use bigraph::{
    dedup_iso, find_hom, hom_exists, isomorphic, meet, parallel, series, BiGraph, ELabel, Edge,
    GraphError,
};
pub use lang::{glang, glang_raw, run_lang, run_lang_raw, word_lang, Word, DEFAULT_STAR_DEPTH};
pub use oracle::{graph_satisfies, oracle_leq, OracleResult};
pub use runs::{
    compose_atomic, decompose_atomic, left_quotient, render_atomic, sample_srun, AtomicRun, SRun,
};
