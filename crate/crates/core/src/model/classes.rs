use super::rel::Rel;
use super::structure::Structure;
use crate::syntax::{complement, dual, Name};

/// A structure class constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    /// For each listed name `a`, the dual name denotes the converse of `a`.
    Conv(Vec<Name>),
    /// Each listed name is a subset of the identity; when its complement
    /// name is declared, the two partition the identity.
    Tests(Vec<Name>),
    /// Each listed name is a single loop `{(x, x)}`.
    Noms(Vec<Name>),
}

/// Membership of `s` in every listed class.
pub fn class_membership(s: &Structure, classes: &[Class]) -> bool {
    classes.iter().all(|c| in_class(s, c))
}

pub fn in_class(s: &Structure, class: &Class) -> bool {
    let n = s.len();
    let id = Rel::identity(n);
    match class {
        Class::Conv(names) => names
            .iter()
            .all(|&a| s.rel_or_empty(dual(a)) == s.rel_or_empty(a).transpose()),
        Class::Tests(names) => names.iter().all(|&b| {
            let r = s.rel_or_empty(b);
            if !r.is_subset(&id) {
                return false;
            }
            match s.rel(complement(b)) {
                Some(c) => c.intersect(&r).is_empty() && c.union(&r) == id,
                None => true,
            }
        }),
        Class::Noms(names) => names.iter().all(|&l| {
            let r = s.rel_or_empty(l);
            r.len() == 1 && r.is_subset(&id)
        }),
    }
}
