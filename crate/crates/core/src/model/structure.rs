use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rel::Rel;
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not in the universe")]
    UnknownVertex(String),
    #[error("malformed structure JSON: {0}")]
    Json(String),
}

/// A finite structure: a nonempty universe of named vertices and one binary
/// relation per declared name. Names without a relation read as empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Structure {
    universe: Vec<Name>,
    index: HashMap<Name, usize>,
    rels: BTreeMap<Name, Rel>,
}

impl Structure {
    pub fn new<S: AsRef<str>>(universe: &[S]) -> Result<Structure, StructureError> {
        Structure::from_names(universe.iter().map(|s| Name::new(s.as_ref())).collect())
    }

    pub fn from_names(universe: Vec<Name>) -> Result<Structure, StructureError> {
        if universe.is_empty() {
            return Err(StructureError::EmptyUniverse);
        }
        let mut index = HashMap::new();
        for (i, &v) in universe.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(StructureError::DuplicateVertex(v.to_string()));
            }
        }
        Ok(Structure {
            universe,
            index,
            rels: BTreeMap::new(),
        })
    }

    /// Universe `{1, …, n}`.
    pub fn numbered(n: usize) -> Structure {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        Structure::new(&names).expect("n ≥ 1")
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn universe(&self) -> &[Name] {
        &self.universe
    }

    pub fn vertex(&self, i: usize) -> Name {
        self.universe[i]
    }

    pub fn index_of(&self, v: Name) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains_vertex(&self, v: Name) -> bool {
        self.index.contains_key(&v)
    }

    /// Declared relation names, in lexicographic order.
    pub fn names(&self) -> impl Iterator<Item = Name> + '_ {
        self.rels.keys().copied()
    }

    pub fn has_name(&self, a: Name) -> bool {
        self.rels.contains_key(&a)
    }

    /// Declares `a` with an empty relation if it is not declared yet.
    pub fn declare(&mut self, a: Name) {
        let n = self.len();
        self.rels.entry(a).or_insert_with(|| Rel::empty(n));
    }

    pub fn rel(&self, a: Name) -> Option<&Rel> {
        self.rels.get(&a)
    }

    /// The relation of `a`, empty when undeclared.
    pub fn rel_or_empty(&self, a: Name) -> Rel {
        self.rels
            .get(&a)
            .cloned()
            .unwrap_or_else(|| Rel::empty(self.len()))
    }

    pub fn set_rel(&mut self, a: Name, r: Rel) {
        assert_eq!(r.size(), self.len());
        self.rels.insert(a, r);
    }

    pub fn add_edge_idx(&mut self, a: Name, i: usize, j: usize) {
        self.declare(a);
        self.rels.get_mut(&a).expect("declared").insert(i, j);
    }

    pub fn add_edge(&mut self, a: &str, x: &str, y: &str) -> Result<(), StructureError> {
        let i = self
            .index_of(Name::new(x))
            .ok_or_else(|| StructureError::UnknownVertex(x.to_string()))?;
        let j = self
            .index_of(Name::new(y))
            .ok_or_else(|| StructureError::UnknownVertex(y.to_string()))?;
        self.add_edge_idx(Name::new(a), i, j);
        Ok(())
    }

    pub fn has_edge(&self, a: Name, x: Name, y: Name) -> bool {
        match (self.rels.get(&a), self.index_of(x), self.index_of(y)) {
            (Some(r), Some(i), Some(j)) => r.contains(i, j),
            _ => false,
        }
    }

    /// Edges of `a` as vertex-name pairs.
    pub fn edges(&self, a: Name) -> Vec<(Name, Name)> {
        match self.rels.get(&a) {
            Some(r) => r
                .pairs()
                .map(|(i, j)| (self.universe[i], self.universe[j]))
                .collect(),
            None => vec![],
        }
    }

    /// Total number of edges over all names.
    pub fn edge_count(&self) -> usize {
        self.rels.values().map(Rel::len).sum()
    }

    /// The structure with one extra isolated vertex `v`.
    pub fn with_isolated(&self, v: Name) -> Structure {
        let mut universe = self.universe.clone();
        universe.push(v);
        let mut s = Structure::from_names(universe).expect("fresh vertex");
        for (&a, r) in &self.rels {
            s.declare(a);
            for (i, j) in r.pairs() {
                s.add_edge_idx(a, i, j);
            }
        }
        s
    }

    /// Renames vertices through `f`; `f` must be injective on the universe.
    pub fn rename(&self, f: impl Fn(Name) -> Name) -> Structure {
        let mut s = Structure::from_names(self.universe.iter().map(|&v| f(v)).collect())
            .expect("injective renaming");
        s.rels = self.rels.clone();
        s
    }

    /// Keeps exactly the listed names; those absent here become empty.
    pub fn restrict_names(&self, keep: &[Name]) -> Structure {
        let mut s = Structure::from_names(self.universe.clone()).expect("nonempty");
        for &a in keep {
            let r = self.rels.get(&a).cloned().unwrap_or_else(|| Rel::empty(self.len()));
            s.rels.insert(a, r);
        }
        s
    }

    /// A canonical fingerprint that ignores declared-but-empty names.
    pub fn key(&self) -> String {
        let mut out = String::new();
        for v in &self.universe {
            out.push_str(v.as_str());
            out.push(',');
        }
        for (a, r) in &self.rels {
            if r.is_empty() {
                continue;
            }
            out.push('|');
            out.push_str(a.as_str());
            for (i, j) in r.pairs() {
                out.push_str(&format!(" {}>{}", self.universe[i], self.universe[j]));
            }
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(StructureJson::from(self)).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StructureJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Structure, StructureError> {
        let raw: StructureJson =
            serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        raw.try_into()
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Structure, StructureError> {
        let raw: StructureJson = serde_json::from_value(v.clone())
            .map_err(|e| StructureError::Json(e.to_string()))?;
        raw.try_into()
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Wire format: `{"universe":["x","y"],"rel":{"a":[["x","y"]]}}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct StructureJson {
    pub universe: Vec<String>,
    #[serde(default)]
    pub rel: BTreeMap<String, Vec<[String; 2]>>,
}

impl From<&Structure> for StructureJson {
    fn from(s: &Structure) -> StructureJson {
        StructureJson {
            universe: s.universe.iter().map(|v| v.to_string()).collect(),
            rel: s
                .rels
                .iter()
                .map(|(a, r)| {
                    let edges = r
                        .pairs()
                        .map(|(i, j)| [s.universe[i].to_string(), s.universe[j].to_string()])
                        .collect();
                    (a.to_string(), edges)
                })
                .collect(),
        }
    }
}

impl TryFrom<StructureJson> for Structure {
    type Error = StructureError;

    fn try_from(raw: StructureJson) -> Result<Structure, StructureError> {
        let mut s = Structure::new(&raw.universe)?;
        for (a, edges) in &raw.rel {
            s.declare(Name::new(a));
            for [x, y] in edges {
                s.add_edge(a, x, y)?;
            }
        }
        Ok(s)
    }
}

/// Reads a JSON array of structures (a word of bags).
pub fn word_from_json(text: &str) -> Result<Vec<Structure>, StructureError> {
    let raw: Vec<StructureJson> =
        serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
    raw.into_iter().map(Structure::try_from).collect()
}

pub fn word_to_json(word: &[Structure]) -> serde_json::Value {
    serde_json::Value::Array(word.iter().map(Structure::to_json_value).collect())
}
