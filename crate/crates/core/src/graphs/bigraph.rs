use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::model::Structure;
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("interface mismatch: {0} targets against {1} sources")]
    Arity(usize, usize),
    #[error("the run is empty")]
    EmptyRun,
    #[error("not a run: {0}")]
    NotRun(String),
}

/// Edge labels: letters of type ⟨1,1⟩, forks ⟨1,2⟩ and joins ⟨2,1⟩.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ELabel {
    Sym(Name),
    Fork,
    Join,
}

impl ELabel {
    pub fn ty(self) -> (usize, usize) {
        match self {
            ELabel::Sym(_) => (1, 1),
            ELabel::Fork => (1, 2),
            ELabel::Join => (2, 1),
        }
    }
}

impl fmt::Display for ELabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ELabel::Sym(a) => write!(f, "{a}"),
            ELabel::Fork => write!(f, "f"),
            ELabel::Join => write!(f, "j"),
        }
    }
}

/// A hyperedge: its inputs followed by its outputs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub label: ELabel,
    pub verts: Vec<usize>,
}

impl Edge {
    pub fn sym(a: Name, x: usize, y: usize) -> Edge {
        Edge {
            label: ELabel::Sym(a),
            verts: vec![x, y],
        }
    }

    pub fn fork(x: usize, y1: usize, y2: usize) -> Edge {
        Edge {
            label: ELabel::Fork,
            verts: vec![x, y1, y2],
        }
    }

    pub fn join(x1: usize, x2: usize, y: usize) -> Edge {
        Edge {
            label: ELabel::Join,
            verts: vec![x1, x2, y],
        }
    }

    pub fn inputs(&self) -> &[usize] {
        &self.verts[..self.label.ty().0]
    }

    pub fn outputs(&self) -> &[usize] {
        &self.verts[self.label.ty().0..]
    }
}

/// A graph with an ordered source interface and an ordered target
/// interface. Vertices are `0..n`; edge sets carry no duplicates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BiGraph {
    n: usize,
    edges: Vec<Edge>,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

impl BiGraph {
    pub fn new(n: usize) -> BiGraph {
        BiGraph {
            n,
            edges: Vec::new(),
            sources: Vec::new(),
            targets: Vec::new(),
        }
    }

    /// `1ⁿ`: `n` vertices, each both the i-th source and the i-th target.
    pub fn identity(n: usize) -> BiGraph {
        BiGraph {
            n,
            edges: Vec::new(),
            sources: (0..n).collect(),
            targets: (0..n).collect(),
        }
    }

    /// One `a`-edge between two vertices, with ⟨1,1⟩-interface.
    pub fn edge(a: Name) -> BiGraph {
        BiGraph {
            n: 2,
            edges: vec![Edge::sym(a, 0, 1)],
            sources: vec![0],
            targets: vec![1],
        }
    }

    /// Two isolated vertices, source and target.
    pub fn top() -> BiGraph {
        BiGraph {
            n: 2,
            edges: Vec::new(),
            sources: vec![0],
            targets: vec![1],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn ty(&self) -> (usize, usize) {
        (self.sources.len(), self.targets.len())
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, e: Edge) {
        assert!(e.verts.iter().all(|&v| v < self.n), "edge vertex out of range");
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
    }

    /// The converse: interfaces swapped.
    pub fn converse(&self) -> BiGraph {
        BiGraph {
            n: self.n,
            edges: self.edges.clone(),
            sources: self.targets.clone(),
            targets: self.sources.clone(),
        }
    }

    /// Identifies vertices by the partition `class`, renumbering classes
    /// in order of first occurrence.
    fn quotient(&self, class: &[usize]) -> BiGraph {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut map = vec![0; self.n];
        for v in 0..self.n {
            let next = ids.len();
            map[v] = *ids.entry(class[v]).or_insert(next);
        }
        let mut g = BiGraph::new(ids.len());
        for e in &self.edges {
            g.add_edge(Edge {
                label: e.label,
                verts: e.verts.iter().map(|&v| map[v]).collect(),
            });
        }
        g.sources = self.sources.iter().map(|&v| map[v]).collect();
        g.targets = self.targets.iter().map(|&v| map[v]).collect();
        g
    }

    /// Disjoint union; the second graph's vertices are shifted by `self.n`.
    fn disjoint(&self, other: &BiGraph) -> BiGraph {
        let off = self.n;
        let mut g = self.clone();
        g.n += other.n;
        for e in &other.edges {
            g.add_edge(Edge {
                label: e.label,
                verts: e.verts.iter().map(|&v| v + off).collect(),
            });
        }
        g
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n  rankdir=LR;\n");
        for v in 0..self.n {
            out.push_str(&format!("  v{v} [shape=circle,label=\"{v}\"];\n"));
        }
        for (i, &s) in self.sources.iter().enumerate() {
            out.push_str(&format!("  in{i} [shape=none,label=\"{}\"];\n  in{i} -> v{s};\n", i + 1));
        }
        for (i, &t) in self.targets.iter().enumerate() {
            out.push_str(&format!("  out{i} [shape=none,label=\"{}\"];\n  v{t} -> out{i};\n", i + 1));
        }
        for (k, e) in self.edges.iter().enumerate() {
            match e.label {
                ELabel::Sym(a) => {
                    out.push_str(&format!("  v{} -> v{} [label=\"{a}\"];\n", e.verts[0], e.verts[1]))
                }
                _ => {
                    out.push_str(&format!("  e{k} [shape=box,label=\"{}\"];\n", e.label));
                    for (i, &x) in e.inputs().iter().enumerate() {
                        out.push_str(&format!("  v{x} -> e{k} [label=\"{}\"];\n", i + 1));
                    }
                    for (i, &y) in e.outputs().iter().enumerate() {
                        out.push_str(&format!("  e{k} -> v{y} [label=\"{}\"];\n", i + 1));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// The graph as a structure over vertices named `0..n`, with the
    /// source and target of a ⟨1,1⟩-interface. Forks and joins are dropped.
    pub fn to_structure(&self) -> (Structure, Name, Name) {
        let names: Vec<String> = (0..self.n).map(|v| v.to_string()).collect();
        let mut s = Structure::new(&names).expect("nonempty graph");
        for e in &self.edges {
            if let ELabel::Sym(a) = e.label {
                s.add_edge_idx(a, e.verts[0], e.verts[1]);
            }
        }
        let (x, y) = (s.vertex(self.sources[0]), s.vertex(self.targets[0]));
        (s, x, y)
    }

    /// `G̃(S, x⃗, y⃗)`: the structure as a graph with a fork and a join loop
    /// on every vertex.
    pub fn of_structure(s: &Structure, xs: &[Name], ys: &[Name]) -> BiGraph {
        let mut g = BiGraph::new(s.len());
        for a in s.names() {
            for (x, y) in s.rel(a).expect("declared").pairs() {
                g.add_edge(Edge::sym(a, x, y));
            }
        }
        for v in 0..s.len() {
            g.add_edge(Edge::fork(v, v, v));
            g.add_edge(Edge::join(v, v, v));
        }
        g.sources = xs.iter().map(|&x| s.index_of(x).expect("vertex")).collect();
        g.targets = ys.iter().map(|&y| s.index_of(y).expect("vertex")).collect();
        g
    }

    /// Edge-successor relation over vertices.
    fn successor_lists(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n];
        for e in &self.edges {
            for &x in e.inputs() {
                succ[x].extend_from_slice(e.outputs());
            }
        }
        succ
    }

    /// The run conditions: acyclic, and every vertex has in- and out-degree
    /// one counting interface occurrences.
    pub fn check_run(&self) -> Result<(), GraphError> {
        let mut indeg = vec![0usize; self.n];
        let mut outdeg = vec![0usize; self.n];
        for &s in &self.sources {
            indeg[s] += 1;
        }
        for &t in &self.targets {
            outdeg[t] += 1;
        }
        for e in &self.edges {
            for &x in e.inputs() {
                outdeg[x] += 1;
            }
            for &y in e.outputs() {
                indeg[y] += 1;
            }
        }
        for v in 0..self.n {
            if indeg[v] != 1 || outdeg[v] != 1 {
                return Err(GraphError::NotRun(format!(
                    "vertex {v} has in-degree {} and out-degree {}",
                    indeg[v], outdeg[v]
                )));
            }
        }
        // Kahn's algorithm over the successor relation.
        let succ = self.successor_lists();
        let mut pending = vec![0usize; self.n];
        for s in &succ {
            for &y in s {
                pending[y] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| pending[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &y in &succ[v] {
                pending[y] -= 1;
                if pending[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if seen != self.n {
            return Err(GraphError::NotRun("cycle".into()));
        }
        Ok(())
    }

    pub fn is_run(&self) -> bool {
        self.check_run().is_ok()
    }

    /// Isomorphism-invariant summary used to bucket graphs before an exact
    /// isomorphism test.
    pub fn invariant(&self) -> (usize, usize, usize, usize, Vec<(ELabel, usize)>) {
        let mut labels: BTreeMap<ELabel, usize> = BTreeMap::new();
        for e in &self.edges {
            *labels.entry(e.label).or_default() += 1;
        }
        (
            self.n,
            self.edges.len(),
            self.sources.len(),
            self.targets.len(),
            labels.into_iter().collect(),
        )
    }
}

/// `g1 ◇ g2`: the i-th target of `g1` merged with the i-th source of `g2`.
pub fn series(g1: &BiGraph, g2: &BiGraph) -> Result<BiGraph, GraphError> {
    if g1.targets.len() != g2.sources.len() {
        return Err(GraphError::Arity(g1.targets.len(), g2.sources.len()));
    }
    let off = g1.n;
    let mut g = g1.disjoint(g2);
    g.sources = g1.sources.clone();
    g.targets = g2.targets.iter().map(|&v| v + off).collect();
    let mut uf = UnionFind::new(g.n);
    for (&t, &s) in g1.targets.iter().zip(&g2.sources) {
        uf.union(t, s + off);
    }
    let class: Vec<usize> = (0..g.n).map(|v| uf.find(v)).collect();
    Ok(g.quotient(&class))
}

/// `g1 ∥ g2`: disjoint union with concatenated interfaces.
pub fn parallel(g1: &BiGraph, g2: &BiGraph) -> BiGraph {
    let off = g1.n;
    let mut g = g1.disjoint(g2);
    g.sources.extend(g2.sources.iter().map(|&v| v + off));
    g.targets.extend(g2.targets.iter().map(|&v| v + off));
    g
}

/// Parallel composition of two ⟨1,1⟩ graphs with merged sources and merged
/// targets, as in the graph language of an intersection.
pub fn meet(g1: &BiGraph, g2: &BiGraph) -> BiGraph {
    let off = g1.n;
    let mut g = g1.disjoint(g2);
    let mut uf = UnionFind::new(g.n);
    uf.union(g1.sources[0], g2.sources[0] + off);
    uf.union(g1.targets[0], g2.targets[0] + off);
    g.sources = vec![g1.sources[0]];
    g.targets = vec![g1.targets[0]];
    let class: Vec<usize> = (0..g.n).map(|v| uf.find(v)).collect();
    g.quotient(&class)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, v: usize) -> usize {
        let p = self.0[v];
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.0[v] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Search for an interface-preserving, edge-preserving vertex map.
struct HomSearch<'a> {
    g: &'a BiGraph,
    h: &'a BiGraph,
    injective: bool,
    /// Edges of `h` by label.
    h_edges: HashMap<ELabel, Vec<&'a [usize]>>,
    /// Edges of `g` incident to each vertex.
    incident: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(g: &'a BiGraph, h: &'a BiGraph, injective: bool) -> HomSearch<'a> {
        let mut h_edges: HashMap<ELabel, Vec<&[usize]>> = HashMap::new();
        for e in &h.edges {
            h_edges.entry(e.label).or_default().push(&e.verts);
        }
        let mut incident = vec![Vec::new(); g.n];
        for (k, e) in g.edges.iter().enumerate() {
            let mut vs = e.verts.clone();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                incident[v].push(k);
            }
        }
        // Most-constrained first: interface vertices, then repeatedly the
        // vertex with most edges into the already ordered ones.
        let mut placed = vec![false; g.n];
        let mut order = Vec::new();
        for &v in g.sources.iter().chain(&g.targets) {
            if !placed[v] {
                placed[v] = true;
                order.push(v);
            }
        }
        while order.len() < g.n {
            let best = (0..g.n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let linked = incident[v]
                        .iter()
                        .filter(|&&k| g.edges[k].verts.iter().any(|&u| placed[u]))
                        .count();
                    (linked, incident[v].len(), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed[best] = true;
            order.push(best);
        }
        HomSearch {
            g,
            h,
            injective,
            h_edges,
            incident,
            order,
        }
    }

    fn consistent(&self, v: usize, map: &[Option<usize>]) -> bool {
        self.incident[v].iter().all(|&k| {
            let e = &self.g.edges[k];
            if e.verts.iter().any(|&u| map[u].is_none()) {
                return true;
            }
            let img: Vec<usize> = e.verts.iter().map(|&u| map[u].unwrap()).collect();
            self.h_edges
                .get(&e.label)
                .is_some_and(|es| es.iter().any(|&f| f == img.as_slice()))
        })
    }

    fn run(&self) -> Option<Vec<usize>> {
        if self.g.ty() != self.h.ty() {
            return None;
        }
        let mut map: Vec<Option<usize>> = vec![None; self.g.n];
        let mut used = vec![false; self.h.n];
        for (&x, &y) in self
            .g
            .sources
            .iter()
            .chain(&self.g.targets)
            .zip(self.h.sources.iter().chain(&self.h.targets))
        {
            match map[x] {
                Some(z) if z != y => return None,
                Some(_) => {}
                None => {
                    if self.injective && used[y] {
                        return None;
                    }
                    map[x] = Some(y);
                    used[y] = true;
                }
            }
        }
        let fixed: Vec<usize> = (0..self.g.n).filter(|&v| map[v].is_some()).collect();
        if fixed.iter().any(|&v| !self.consistent(v, &map)) {
            return None;
        }
        let free: Vec<usize> = self.order.iter().copied().filter(|&v| map[v].is_none()).collect();
        if self.extend(&free, 0, &mut map, &mut used) {
            Some(map.into_iter().map(|m| m.expect("assigned")).collect())
        } else {
            None
        }
    }

    fn extend(&self, free: &[usize], i: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        if i == free.len() {
            return true;
        }
        let v = free[i];
        for y in 0..self.h.n {
            if self.injective && used[y] {
                continue;
            }
            map[v] = Some(y);
            if self.consistent(v, map) {
                used[y] = true;
                if self.extend(free, i + 1, map, used) {
                    return true;
                }
                used[y] = false;
            }
            map[v] = None;
        }
        false
    }
}

/// A homomorphism from `g` to `h` preserving both interfaces, if any.
pub fn find_hom(g: &BiGraph, h: &BiGraph) -> Option<Vec<usize>> {
    HomSearch::new(g, h, false).run()
}

/// Is there an interface-preserving, edge-preserving map from `g` to `h`?
pub fn hom_exists(g: &BiGraph, h: &BiGraph) -> Result<bool, GraphError> {
    if g.ty() != h.ty() {
        return Err(GraphError::Arity(g.ty().0 + g.ty().1, h.ty().0 + h.ty().1));
    }
    Ok(find_hom(g, h).is_some())
}

/// Graph isomorphism preserving both interfaces.
pub fn isomorphic(g: &BiGraph, h: &BiGraph) -> bool {
    g.invariant() == h.invariant() && HomSearch::new(g, h, true).run().is_some()
}

/// Removes isomorphic duplicates, keeping first occurrences.
pub fn dedup_iso(gs: Vec<BiGraph>) -> Vec<BiGraph> {
    let mut buckets: HashMap<(usize, usize, usize, usize, Vec<(ELabel, usize)>), Vec<usize>> = HashMap::new();
    let mut out: Vec<BiGraph> = Vec::new();
    for g in gs {
        let bucket = buckets.entry(g.invariant()).or_default();
        if bucket.iter().any(|&i| isomorphic(&out[i], &g)) {
            continue;
        }
        bucket.push(out.len());
        out.push(g);
    }
    out
}
