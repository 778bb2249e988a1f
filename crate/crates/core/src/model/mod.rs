//! Finite structures, relational semantics, gluing and structure classes.

mod classes;
mod enumerate;
mod eval;
mod glue;
mod rel;
mod structure;

pub use classes::{class_membership, in_class, Class};
pub use enumerate::{enumerate_structures, ModelSpace};
pub use eval::{check_leq_on, check_leq_on_lenient, eval, eval_lenient, EvalError, Evaluator};
pub use glue::{glue, is_path_decomposition, Glued, GluedVertex};
pub use rel::Rel;
pub use structure::{word_from_json, word_to_json, Structure, StructureError, StructureJson};
