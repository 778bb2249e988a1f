use rayon::prelude::*;

use super::bigraph::BiGraph;
use super::lang::glang;
use crate::model::eval_lenient;
use crate::syntax::Term;

/// Outcome of the graph-language inclusion oracle.
#[derive(Clone, Debug)]
pub enum OracleResult {
    Valid,
    /// A member of the left language whose interface pair is not in the
    /// right term's semantics on the graph read as a structure.
    Invalid(BiGraph),
    /// No counterexample with stars unfolded up to the given depth.
    ValidUpToDepth(usize),
}

impl OracleResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleResult::Valid)
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, OracleResult::Invalid(_))
    }
}

/// Whether the source-target pair of `g` lies in the semantics of `t` on
/// `g` read as a structure.
pub fn graph_satisfies(g: &BiGraph, t: Term) -> bool {
    let (s, x, y) = g.to_structure();
    let r = eval_lenient(&s, t);
    r.contains(s.index_of(x).expect("vertex"), s.index_of(y).expect("vertex"))
}

/// `t1 ≤ t2` checked on every graph of `glang(t1, d)`; exact when `t1` is
/// star-free. Both terms must be complement-free.
pub fn oracle_leq(t1: Term, t2: Term, d: usize) -> OracleResult {
    let graphs = glang(t1, d);
    if let Some(g) = graphs.into_par_iter().find_first(|g| !graph_satisfies(g, t2)) {
        return OracleResult::Invalid(g);
    }
    if t1.is_star_free() {
        OracleResult::Valid
    } else {
        OracleResult::ValidUpToDepth(d)
    }
}
