use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::bigraph::{dedup_iso, find_hom, series, BiGraph, ELabel, Edge, GraphError};
use super::lang::run_lang_raw;
use crate::derive::{AtomicStep, Label, StepKind};
use crate::model::Structure;
use crate::syntax::{Name, Term};

/// An atomic run `a^n_i`, `f^n_i` or `j^n_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AtomicRun {
    pub label: ELabel,
    pub n: usize,
    pub i: usize,
}

impl AtomicRun {
    /// `1^{i-1} ∥ e ∥ 1^{n-i}` as a graph.
    pub fn graph(&self) -> BiGraph {
        let (p, q) = self.label.ty();
        let mut core = BiGraph::new(p + q);
        let mut verts: Vec<usize> = (0..p + q).collect();
        if let ELabel::Sym(_) = self.label {
            verts = vec![0, 1];
        }
        core.add_edge(Edge {
            label: self.label,
            verts,
        });
        core.sources = (0..p).collect();
        core.targets = (p..p + q).collect();
        let left = BiGraph::identity(self.i - 1);
        let right = BiGraph::identity(self.n - self.i);
        super::bigraph::parallel(&super::bigraph::parallel(&left, &core), &right)
    }
}

impl fmt::Display for AtomicRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_{}", self.label, self.n, self.i)
    }
}

/// Renders `a¹₁ ◇ …` with unicode super- and subscripts.
pub fn render_atomic(rs: &[AtomicRun]) -> String {
    fn script(n: usize, digits: &[char; 10]) -> String {
        n.to_string()
            .chars()
            .map(|c| digits[c.to_digit(10).expect("digit") as usize])
            .collect()
    }
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    rs.iter()
        .map(|r| format!("{}{}{}", r.label, script(r.n, &SUP), script(r.i, &SUB)))
        .collect::<Vec<_>>()
        .join("◇")
}

/// One step of the decomposition with the positions it acted on.
struct Peel {
    atom: AtomicRun,
    /// Frontier before the step.
    before: Vec<usize>,
    edge: usize,
}

/// Peels edges off the front of a run in a left-to-right topological order.
/// Any applicable edge may be taken first, so the greedy choice never
/// blocks.
fn peel(r: &BiGraph) -> Result<Vec<Peel>, GraphError> {
    r.check_run()?;
    if r.edges().is_empty() {
        return Err(GraphError::EmptyRun);
    }
    let mut frontier = r.sources.clone();
    let mut done = vec![false; r.edges().len()];
    let mut out = Vec::new();
    while out.len() < r.edges().len() {
        let mut chosen = None;
        'scan: for (pos, &v) in frontier.iter().enumerate() {
            for (k, e) in r.edges().iter().enumerate() {
                if done[k] || e.inputs()[0] != v {
                    continue;
                }
                let ok = match e.label {
                    ELabel::Join => frontier.get(pos + 1) == Some(&e.inputs()[1]),
                    _ => true,
                };
                if ok {
                    chosen = Some((pos, k));
                    break 'scan;
                }
            }
        }
        let (pos, k) = chosen.ok_or_else(|| GraphError::NotRun("no applicable atomic step".into()))?;
        let e = &r.edges()[k];
        let before = frontier.clone();
        let n = match e.label {
            ELabel::Join => frontier.len() - 1,
            _ => frontier.len(),
        };
        frontier.splice(pos..pos + e.inputs().len(), e.outputs().iter().copied());
        done[k] = true;
        out.push(Peel {
            atom: AtomicRun {
                label: e.label,
                n,
                i: pos + 1,
            },
            before,
            edge: k,
        });
    }
    if frontier != r.targets {
        return Err(GraphError::NotRun("targets out of order".into()));
    }
    Ok(out)
}

/// A sequence of atomic runs whose series product is `r`.
pub fn decompose_atomic(r: &BiGraph) -> Result<Vec<AtomicRun>, GraphError> {
    Ok(peel(r)?.into_iter().map(|p| p.atom).collect())
}

/// The series product of atomic runs starting from `1ⁿ`.
pub fn compose_atomic(n: usize, rs: &[AtomicRun]) -> Result<BiGraph, GraphError> {
    rs.iter()
        .try_fold(BiGraph::identity(n), |g, a| series(&g, &a.graph()))
}

/// All `s` (up to isomorphism) with `p ◇ s ≅ r`.
pub fn left_quotient(r: &BiGraph, p: &BiGraph) -> Vec<BiGraph> {
    if p.sources.len() != r.sources.len() || p.edges().len() > r.edges().len() {
        return Vec::new();
    }
    let mut found = Vec::new();
    let mut map: Vec<Option<usize>> = vec![None; p.len()];
    let mut used = vec![false; r.len()];
    for (&x, &y) in p.sources.iter().zip(&r.sources) {
        match map[x] {
            Some(z) if z != y => return Vec::new(),
            Some(_) => {}
            None => {
                if used[y] {
                    return Vec::new();
                }
                map[x] = Some(y);
                used[y] = true;
            }
        }
    }
    embed(r, p, 0, &mut map, &mut used, &mut found);
    dedup_iso(found)
}

/// Injective embeddings of `p` into `r` by backtracking over vertices in
/// order; each complete one yields a candidate residual.
fn embed(
    r: &BiGraph,
    p: &BiGraph,
    v: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    found: &mut Vec<BiGraph>,
) {
    let edges_ok = |map: &[Option<usize>]| {
        p.edges().iter().all(|e| {
            if e.verts.iter().any(|&u| map[u].is_none()) {
                return true;
            }
            let img: Vec<usize> = e.verts.iter().map(|&u| map[u].unwrap()).collect();
            r.edges().iter().any(|f| f.label == e.label && f.verts == img)
        })
    };
    if v == p.len() {
        let phi: Vec<usize> = map.iter().map(|m| m.unwrap()).collect();
        if let Some(s) = residual(r, p, &phi) {
            found.push(s);
        }
        return;
    }
    if map[v].is_some() {
        embed(r, p, v + 1, map, used, found);
        return;
    }
    for y in 0..r.len() {
        if used[y] {
            continue;
        }
        map[v] = Some(y);
        if edges_ok(map) {
            used[y] = true;
            embed(r, p, v + 1, map, used, found);
            used[y] = false;
        }
        map[v] = None;
    }
}

/// The graph `s` left after removing the image of `p`, if `p ◇ s = r`.
fn residual(r: &BiGraph, p: &BiGraph, phi: &[usize]) -> Option<BiGraph> {
    let mut in_p = vec![false; r.len()];
    for &y in phi {
        in_p[y] = true;
    }
    let mut keep: Vec<bool> = in_p.iter().map(|&b| !b).collect();
    for &t in &p.targets {
        keep[phi[t]] = true;
    }
    let image: Vec<Edge> = p
        .edges()
        .iter()
        .map(|e| Edge {
            label: e.label,
            verts: e.verts.iter().map(|&u| phi[u]).collect(),
        })
        .collect();
    let rest: Vec<&Edge> = r.edges().iter().filter(|e| !image.contains(e)).collect();
    if rest.len() + image.len() != r.edges().len() {
        return None;
    }
    let mut ids = vec![usize::MAX; r.len()];
    let mut s = BiGraph::new(0);
    for y in 0..r.len() {
        if keep[y] {
            ids[y] = s.add_vertex();
        }
    }
    for e in rest {
        if e.verts.iter().any(|&u| !keep[u]) {
            return None;
        }
        s.add_edge(Edge {
            label: e.label,
            verts: e.verts.iter().map(|&u| ids[u]).collect(),
        });
    }
    if r.targets.iter().any(|&t| !keep[t]) {
        return None;
    }
    s.sources = p.targets.iter().map(|&t| ids[phi[t]]).collect();
    s.targets = r.targets.iter().map(|&t| ids[t]).collect();
    // Vertices of p's image other than its targets must not reappear.
    let back = series(p, &s).ok()?;
    super::bigraph::isomorphic(&back, r).then_some(s)
}

/// A run together with a homomorphism into `G̃(S, x⃗, y⃗)`.
#[derive(Clone, Debug)]
pub struct SRun {
    pub run: BiGraph,
    /// Structure vertex of each run vertex.
    pub map: Vec<Name>,
}

impl SRun {
    pub fn sources(&self) -> Vec<Name> {
        self.run.sources.iter().map(|&v| self.map[v]).collect()
    }

    pub fn targets(&self) -> Vec<Name> {
        self.run.targets.iter().map(|&v| self.map[v]).collect()
    }

    /// Every letter edge maps into the structure; forks and joins map to
    /// single vertices.
    pub fn is_valid(&self, s: &Structure) -> bool {
        self.run.is_run()
            && self.map.len() == self.run.len()
            && self.run.edges().iter().all(|e| match e.label {
                ELabel::Sym(a) => s.has_edge(a, self.map[e.verts[0]], self.map[e.verts[1]]),
                _ => e.verts.iter().all(|&u| self.map[u] == self.map[e.verts[0]]),
            })
    }

    /// Atomic Σ-runs with their source label vectors, in series order.
    pub fn decompose(&self) -> Result<Vec<AtomicStep>, GraphError> {
        Ok(peel(&self.run)?
            .into_iter()
            .map(|p| {
                let e = &self.run.edges()[p.edge];
                let kind = match e.label {
                    ELabel::Sym(name) => StepKind::Var {
                        name,
                        target: Label::V(self.map[e.verts[1]]),
                    },
                    ELabel::Fork => StepKind::Fork,
                    ELabel::Join => StepKind::Join,
                };
                AtomicStep {
                    kind,
                    pos: p.atom.i,
                    sources: p.before.iter().map(|&v| Label::V(self.map[v])).collect(),
                }
            })
            .collect())
    }
}

/// A random Σ-run of `t` on `s` starting at `x`: a run drawn from the run
/// language at star depth `d` and a homomorphism into the structure.
pub fn sample_srun<R: Rng + ?Sized>(
    t: Term,
    s: &Structure,
    x: Name,
    d: usize,
    rng: &mut R,
) -> Result<Option<SRun>, GraphError> {
    let mut runs = run_lang_raw(t, d)?;
    runs.shuffle(rng);
    let mut targets: Vec<Name> = s.universe().to_vec();
    targets.shuffle(rng);
    for run in runs {
        for &y in &targets {
            let h = BiGraph::of_structure(s, &[x], &[y]);
            if let Some(m) = find_hom(&run, &h) {
                let map = m.into_iter().map(|v| s.vertex(v)).collect();
                return Ok(Some(SRun { run, map }));
            }
        }
    }
    Ok(None)
}
