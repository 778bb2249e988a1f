use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::structure::Structure;
use crate::syntax::Name;

/// A vertex of a glued structure: the least index (1-based) of the run of
/// consecutive bags it belongs to, and its local name there.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GluedVertex {
    pub bag: usize,
    pub local: Name,
}

impl GluedVertex {
    pub fn name(self) -> Name {
        Name::new(&self.to_string())
    }
}

impl fmt::Display for GluedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.bag, self.local)
    }
}

/// The result of gluing a word of bags.
#[derive(Clone, Debug)]
pub struct Glued {
    pub structure: Structure,
    /// For each bag, its local vertices mapped to glued vertices.
    pub images: Vec<HashMap<Name, GluedVertex>>,
}

impl Glued {
    /// The glued vertex of local vertex `x` in bag `i` (0-based).
    pub fn image(&self, i: usize, x: Name) -> Option<GluedVertex> {
        self.images.get(i)?.get(&x).copied()
    }

    /// Each bag renamed into the glued structure.
    pub fn bag_images(&self, bags: &[Structure]) -> Vec<Structure> {
        bags.iter()
            .enumerate()
            .map(|(i, b)| b.rename(|x| self.images[i][&x].name()))
            .collect()
    }
}

/// Glues `bags` left to right: a local name shared by adjacent bags denotes
/// one vertex, relations are unioned. `bags` must be nonempty.
pub fn glue(bags: &[Structure]) -> Glued {
    assert!(!bags.is_empty(), "glue needs at least one bag");
    let mut images: Vec<HashMap<Name, GluedVertex>> = Vec::with_capacity(bags.len());
    let mut order: Vec<GluedVertex> = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let mut img = HashMap::new();
        for &x in bag.universe() {
            let v = match i.checked_sub(1).and_then(|p| images[p].get(&x)) {
                Some(&v) => v,
                None => {
                    let v = GluedVertex { bag: i + 1, local: x };
                    order.push(v);
                    v
                }
            };
            img.insert(x, v);
        }
        images.push(img);
    }
    let mut s = Structure::from_names(order.iter().map(|v| v.name()).collect())
        .expect("glued vertices are distinct");
    let index: HashMap<GluedVertex, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (i, bag) in bags.iter().enumerate() {
        for a in bag.names() {
            s.declare(a);
            for (x, y) in bag.edges(a) {
                s.add_edge_idx(a, index[&images[i][&x]], index[&images[i][&y]]);
            }
        }
    }
    Glued {
        structure: s,
        images,
    }
}

/// `Some(width)` when the universes of `bags` form a path decomposition of
/// `s`: every vertex is covered, every edge lies in a bag, each vertex
/// occupies an interval of bags, and each bag's edges are edges of `s`.
pub fn is_path_decomposition(bags: &[Structure], s: &Structure) -> Option<usize> {
    if bags.is_empty() {
        return None;
    }
    let sets: Vec<BTreeSet<Name>> = bags
        .iter()
        .map(|b| b.universe().iter().copied().collect())
        .collect();
    for (b, set) in bags.iter().zip(&sets) {
        if !set.iter().all(|&v| s.contains_vertex(v)) {
            return None;
        }
        for a in b.names() {
            if !b.edges(a).into_iter().all(|(x, y)| s.has_edge(a, x, y)) {
                return None;
            }
        }
    }
    for &v in s.universe() {
        let hits: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].contains(&v)).collect();
        match (hits.first(), hits.last()) {
            (Some(&lo), Some(&hi)) if hi - lo + 1 == hits.len() => {}
            _ => return None,
        }
    }
    for a in s.names() {
        for (x, y) in s.edges(a) {
            if !sets.iter().any(|set| set.contains(&x) && set.contains(&y)) {
                return None;
            }
        }
    }
    sets.iter().map(|set| set.len()).max().map(|m| m - 1)
}
