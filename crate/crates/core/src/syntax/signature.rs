use std::collections::BTreeSet;

use super::term::Name;

/// Name of the fresh variable standing for the full relation.
pub const C_TOP: &str = "c_top";
/// Left and right markers inserted by [`super::wrap_for_decision`].
pub const L_MARK: &str = "__l";
pub const R_MARK: &str = "__r";
/// Prefix of converse duals (`conv_a` stands for `a~`).
pub const DUAL_PREFIX: &str = "conv_";
/// Prefix of test complements (`not_b` stands for `b^-`).
pub const COMPL_PREFIX: &str = "not_";

/// Declared names. Variables are open-ended: any identifier that is not a
/// test, not reserved and not derived is a variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub tests: BTreeSet<String>,
    pub nominals: BTreeSet<String>,
    /// Accept reserved and derived spellings (used when reading back
    /// normalized terms).
    pub allow_internal: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn with_tests<I, S>(mut self, tests: I) -> Signature
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.tests.extend(tests.into_iter().map(Into::into));
        self
    }

    pub fn with_nominals<I, S>(mut self, noms: I) -> Signature
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.nominals.extend(noms.into_iter().map(Into::into));
        self
    }

    pub fn internal() -> Signature {
        Signature {
            allow_internal: true,
            ..Signature::default()
        }
    }

    pub fn is_test(&self, name: &str) -> bool {
        if self.tests.contains(name) {
            return true;
        }
        match name.strip_prefix(COMPL_PREFIX) {
            Some(base) => self.tests.contains(base),
            None => false,
        }
    }

    pub fn test_names(&self) -> impl Iterator<Item = Name> + '_ {
        self.tests.iter().map(|s| Name::new(s))
    }

    pub fn nominal_names(&self) -> impl Iterator<Item = Name> + '_ {
        self.nominals.iter().map(|s| Name::new(s))
    }
}

pub fn is_reserved(name: &str) -> bool {
    name == C_TOP || name == L_MARK || name == R_MARK
}

pub fn is_derived(name: &str) -> bool {
    name.starts_with(DUAL_PREFIX) || name.starts_with(COMPL_PREFIX)
}

/// `a ↦ conv_a`, `conv_a ↦ a`; `c_top` is its own dual.
pub fn dual(name: Name) -> Name {
    let s = name.as_str();
    if s == C_TOP {
        return name;
    }
    match s.strip_prefix(DUAL_PREFIX) {
        Some(base) => Name::new(base),
        None => Name::new(&format!("{DUAL_PREFIX}{s}")),
    }
}

/// `b ↦ not_b`, `not_b ↦ b`.
pub fn complement(name: Name) -> Name {
    let s = name.as_str();
    match s.strip_prefix(COMPL_PREFIX) {
        Some(base) => Name::new(base),
        None => Name::new(&format!("{COMPL_PREFIX}{s}")),
    }
}
