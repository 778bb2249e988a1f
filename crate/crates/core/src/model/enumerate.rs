use super::classes::{class_membership, Class};
use super::rel::Rel;
use super::structure::Structure;
use crate::syntax::{complement, dual, Name};

/// A family of structures over universes `{1..n}` generated directly inside
/// a class: free names range over all relations, tests over subsets of the
/// identity, nominals over single loops. Derived names are filled in.
#[derive(Clone, Debug, Default)]
pub struct ModelSpace {
    pub free: Vec<Name>,
    pub tests: Vec<Name>,
    pub noms: Vec<Name>,
    /// Names whose dual is added as their converse.
    pub conv: Vec<Name>,
    /// Adds the complement name of every test.
    pub complements: bool,
}

impl ModelSpace {
    pub fn free(names: &[Name]) -> ModelSpace {
        ModelSpace {
            free: names.to_vec(),
            ..ModelSpace::default()
        }
    }

    /// Number of structures with exactly `n` vertices, if it fits in `u128`.
    pub fn count(&self, n: usize) -> Option<u128> {
        let bits = n * n * self.free.len() + n * self.tests.len();
        let mut c: u128 = 1u128.checked_shl(bits as u32).filter(|_| bits < 128)?;
        for _ in &self.noms {
            c = c.checked_mul(n as u128)?;
        }
        Some(c)
    }

    /// The `idx`-th structure with `n` vertices, `idx < count(n)`.
    pub fn structure(&self, n: usize, mut idx: u128) -> Structure {
        let mut s = Structure::numbered(n);
        let mut take_bit = || {
            let b = idx & 1 == 1;
            idx >>= 1;
            b
        };
        let mut free_rels = Vec::new();
        for &a in &self.free {
            let mut r = Rel::empty(n);
            for i in 0..n {
                for j in 0..n {
                    if take_bit() {
                        r.insert(i, j);
                    }
                }
            }
            free_rels.push((a, r));
        }
        let mut test_rels = Vec::new();
        for &b in &self.tests {
            let mut r = Rel::empty(n);
            for i in 0..n {
                if take_bit() {
                    r.insert(i, i);
                }
            }
            test_rels.push((b, r));
        }
        for (a, r) in free_rels {
            s.set_rel(a, r);
        }
        for (b, r) in test_rels {
            if self.complements {
                s.set_rel(complement(b), Rel::identity(n).difference(&r));
            }
            s.set_rel(b, r);
        }
        for &l in &self.noms {
            let x = (idx % n as u128) as usize;
            idx /= n as u128;
            s.set_rel(l, Rel::from_pairs(n, [(x, x)]));
        }
        for &a in &self.conv {
            let t = s.rel_or_empty(a).transpose();
            s.set_rel(dual(a), t);
        }
        s
    }

    /// All structures with `1..=max_n` vertices, smallest first.
    pub fn iter(&self, max_n: usize) -> impl Iterator<Item = Structure> + '_ {
        (1..=max_n).flat_map(move |n| {
            let total = self.count(n).expect("model space too large to enumerate");
            (0..total).map(move |i| self.structure(n, i))
        })
    }
}

/// Every structure over `{1..n}`, `1 ≤ n ≤ max_n`, interpreting `names`,
/// that belongs to all `classes`.
pub fn enumerate_structures<'a>(
    max_n: usize,
    names: &[Name],
    classes: &'a [Class],
) -> impl Iterator<Item = Structure> + 'a {
    let space = ModelSpace::free(names);
    (1..=max_n)
        .flat_map(move |n| {
            let total = space.count(n).expect("model space too large to enumerate");
            let space = space.clone();
            (0..total).map(move |i| space.structure(n, i))
        })
        .filter(move |s| class_membership(s, classes))
}
