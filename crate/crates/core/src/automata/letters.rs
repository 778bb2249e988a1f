use std::collections::HashMap;

use super::build::{vertex_number, KlAutomaton};
use crate::model::{Rel, Structure};
use crate::syntax::{complement, dual, Name};

/// Nonempty subsets of `1..=k` as bitmasks, smallest first.
fn universes(k: usize) -> Vec<u64> {
    let mut us: Vec<u64> = (1..(1u64 << k)).collect();
    us.sort_by_key(|m| (m.count_ones(), *m));
    us
}

fn letter_frame(umask: u64) -> Structure {
    let names: Vec<String> = (0..64)
        .filter(|i| umask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    Structure::new(&names).expect("nonempty universe")
}

/// Number of letters of [`letters`], if it fits in `u128`.
pub fn letter_count(k: usize, names: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for u in universes(k) {
        let n = u.count_ones() as usize;
        let bits = n * n * names;
        if bits >= 128 {
            return None;
        }
        total = total.checked_add(1u128 << bits)?;
    }
    Some(total)
}

/// Every structure with universe a nonempty subset of `1..=k` interpreting
/// `names`, all names declared.
pub fn letters(k: usize, names: &[Name]) -> Vec<Structure> {
    let mut out = Vec::new();
    for u in universes(k) {
        let frame = letter_frame(u);
        let n = frame.len();
        let bits = n * n * names.len();
        for idx in 0..(1u64 << bits) {
            let mut s = frame.clone();
            let mut b = 0;
            for &a in names {
                s.declare(a);
                for i in 0..n {
                    for j in 0..n {
                        if idx >> b & 1 == 1 {
                            s.add_edge_idx(a, i, j);
                        }
                        b += 1;
                    }
                }
            }
            out.push(s);
        }
    }
    out
}

/// The names a decision alphabet interprets, grouped by role.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlphabetSpec {
    pub k: usize,
    /// Ordinary edge names (including the position markers).
    pub edges: Vec<Name>,
    /// Edge names whose dual is present and must denote the converse.
    pub conv: Vec<Name>,
    /// Test names; their complements are added.
    pub tests: Vec<Name>,
    pub noms: Vec<Name>,
    /// Name interpreted as the complete relation on each letter.
    pub top: Option<Name>,
}

impl AlphabetSpec {
    /// Every name a letter of this alphabet declares.
    pub fn all_names(&self) -> Vec<Name> {
        let mut v: Vec<Name> = self.edges.clone();
        v.extend(self.conv.iter().map(|&a| dual(a)));
        for &b in &self.tests {
            v.push(b);
            v.push(complement(b));
        }
        v.extend(self.noms.iter().copied());
        v.extend(self.top);
        v.sort();
        v.dedup();
        v
    }

    /// Letters carrying at most one edge group each: one edge (with its
    /// converse partner when required) or one nominal loop, on a universe
    /// with complete `top`, and with every test decided on every vertex.
    /// Gluing such letters yields every structure of bounded pathwidth.
    pub fn sparse_letters(&self) -> Vec<Structure> {
        let mut out = Vec::new();
        let names = self.all_names();
        for u in universes(self.k) {
            let mut frame = letter_frame(u);
            let n = frame.len();
            for &a in &names {
                frame.declare(a);
            }
            if let Some(top) = self.top {
                frame.set_rel(top, Rel::full(n));
            }
            // Test assignments: one bit per (test, vertex).
            let tbits = n * self.tests.len();
            let mut framed = Vec::new();
            for idx in 0..(1u64 << tbits) {
                let mut s = frame.clone();
                for (t, &b) in self.tests.iter().enumerate() {
                    for v in 0..n {
                        let name = if idx >> (t * n + v) & 1 == 1 { b } else { complement(b) };
                        s.add_edge_idx(name, v, v);
                    }
                }
                framed.push(s);
            }
            for base in framed {
                out.push(base.clone());
                for &a in &self.edges {
                    let conv = self.conv.contains(&a);
                    for i in 0..n {
                        for j in 0..n {
                            let mut s = base.clone();
                            s.add_edge_idx(a, i, j);
                            if conv {
                                s.add_edge_idx(dual(a), j, i);
                            }
                            out.push(s);
                        }
                    }
                }
                for &l in &self.noms {
                    for i in 0..n {
                        let mut s = base.clone();
                        s.add_edge_idx(l, i, i);
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// Number of sparse letters, without building them.
    pub fn sparse_count(&self) -> u128 {
        universes(self.k)
            .into_iter()
            .map(|u| {
                let n = u.count_ones() as u128;
                let tests = 1u128 << (n as usize * self.tests.len()).min(127);
                let groups = 1 + self.edges.len() as u128 * n * n + self.noms.len() as u128 * n;
                tests * groups
            })
            .sum()
    }
}

/// A class of letters that every automaton of a pipeline treats alike.
#[derive(Clone, Debug)]
pub struct LetterClass {
    pub signature: String,
    pub representative: Structure,
    pub size: usize,
}

/// The behaviour signature of a letter: its universe, the derivative
/// reachability it induces in each automaton, and its restriction to the
/// names the constraint automata inspect.
pub fn letter_signature(letter: &Structure, automata: &[&KlAutomaton], inspected: &[Name]) -> String {
    let mut sig = String::new();
    let mut verts: Vec<usize> = letter
        .universe()
        .iter()
        .map(|&v| vertex_number(v).unwrap_or(0))
        .collect();
    verts.sort_unstable();
    sig.push_str(&format!("{verts:?}"));
    for a in automata {
        let info = a.letter_info(letter);
        sig.push('|');
        for i in info.fit.ones() {
            sig.push_str(&format!("{i}:"));
            for j in info.reach[i].ones() {
                sig.push_str(&format!("{j},"));
            }
            sig.push(';');
        }
    }
    sig.push('|');
    sig.push_str(&letter.restrict_names(inspected).key());
    sig
}

/// Groups letters by signature, keeping the first member as representative.
pub fn quotient_letters(
    letters: &[Structure],
    automata: &[&KlAutomaton],
    inspected: &[Name],
) -> Vec<LetterClass> {
    use rayon::prelude::*;
    let sigs: Vec<String> = letters
        .par_iter()
        .map(|l| letter_signature(l, automata, inspected))
        .collect();
    let mut classes: Vec<LetterClass> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (l, sig) in letters.iter().zip(sigs) {
        match index.get(&sig) {
            Some(&i) => classes[i].size += 1,
            None => {
                index.insert(sig.clone(), classes.len());
                classes.push(LetterClass {
                    signature: sig,
                    representative: l.clone(),
                    size: 1,
                });
            }
        }
    }
    classes
}
