use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use parking_lot::Mutex;

use super::posbool::PosBool;
use super::twoafa::{Sym, TwoAfa};
use crate::derive::{closure_term, eps_label, reach, LTerm, Label, Pointed};
use crate::model::Structure;
use crate::syntax::{Name, Term};

/// Index of a closure term.
pub type Cl = u32;

/// States: the initial token, and pairs of closure terms tagged `?` or `✓`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum KState {
    Init,
    Ask(Cl, Cl),
    Check(Cl, Cl),
}

/// Per-letter data: which closure terms fit the letter, and the derivative
/// reachability relation over `S•` among them.
#[derive(Debug)]
pub struct LetterInfo {
    pub umask: u64,
    pub fit: FixedBitSet,
    /// `reach[i]` for fit `i`; empty rows for non-fit terms.
    pub reach: Vec<FixedBitSet>,
}

/// The two-way alternating automaton of a KL term at width `k`, reading
/// words of structures over the vertices `1..=k`.
pub struct KlAutomaton {
    k: usize,
    term: Term,
    cl: Vec<LTerm>,
    index: HashMap<LTerm, Cl>,
    labels: Vec<Vec<Label>>,
    /// Bit `v-1` set when vertex `v` occurs among the labels.
    masks: Vec<u64>,
    pot: Vec<FixedBitSet>,
    starts: Vec<(Cl, Cl)>,
    letter_cache: Mutex<HashMap<String, Arc<LetterInfo>>>,
}

/// The label of vertex `i` (1-based) of the letter alphabet.
pub fn vertex_label(i: usize) -> Label {
    Label::V(Name::new(&i.to_string()))
}

/// The 1-based vertex number of a letter vertex name.
pub fn vertex_number(v: Name) -> Option<usize> {
    v.as_str().parse().ok()
}

impl KlAutomaton {
    pub fn new(k: usize, term: Term) -> KlAutomaton {
        assert!(k >= 1 && k <= 63, "k out of range");
        assert!(term.is_kl(), "the automaton is defined for KL terms");
        let mut labels_all: Vec<Label> = (1..=k).map(vertex_label).collect();
        labels_all.push(Label::Bullet);
        let cl: Vec<LTerm> = closure_term(term, &labels_all).into_iter().collect();
        let index: HashMap<LTerm, Cl> = cl.iter().enumerate().map(|(i, &l)| (l, i as Cl)).collect();
        let labels: Vec<Vec<Label>> = cl.iter().map(|l| l.labels().to_vec()).collect();
        let masks = labels
            .iter()
            .map(|ls| {
                ls.iter().fold(0u64, |m, l| match l {
                    Label::V(v) => m | 1 << (vertex_number(*v).expect("letter vertex") - 1),
                    Label::Bullet => m,
                })
            })
            .collect();
        // The complete structure over 1..=k interpreting every name of the
        // term; any derivative over a letter maps into it.
        let mut complete = Structure::numbered(k);
        for a in term.names() {
            for i in 0..k {
                for j in 0..k {
                    complete.add_edge_idx(a, i, j);
                }
            }
        }
        let kp = Pointed::new(&complete);
        let n = cl.len();
        let pot = cl
            .iter()
            .map(|&l| {
                let mut row = FixedBitSet::with_capacity(n);
                for m in reach(&kp, l) {
                    row.insert(index[&m] as usize);
                }
                row
            })
            .collect();
        let mut starts = Vec::new();
        for x in 1..=k {
            let s = index[&LTerm::at(vertex_label(x), term)];
            for (j, &l2) in cl.iter().enumerate() {
                if let Some(Label::V(_)) = eps_label(l2) {
                    starts.push((s, j as Cl));
                }
            }
        }
        KlAutomaton {
            k,
            term,
            cl,
            index,
            labels,
            masks,
            pot,
            starts,
            letter_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn term(&self) -> Term {
        self.term
    }

    pub fn closure(&self) -> &[LTerm] {
        &self.cl
    }

    pub fn closure_len(&self) -> usize {
        self.cl.len()
    }

    pub fn index_of(&self, l: LTerm) -> Option<Cl> {
        self.index.get(&l).copied()
    }

    pub fn term_at(&self, i: Cl) -> LTerm {
        self.cl[i as usize]
    }

    pub fn labels_of(&self, i: Cl) -> &[Label] {
        &self.labels[i as usize]
    }

    pub fn mask_of(&self, i: Cl) -> u64 {
        self.masks[i as usize]
    }

    /// Initial pairs `(@x.t, λ2)` with `EPS_y(λ2)`, `x, y` vertices.
    pub fn starts(&self) -> &[(Cl, Cl)] {
        &self.starts
    }

    /// Whether `λ2` is reachable from `λ1` over the complete structure.
    pub fn potential(&self, a: Cl, b: Cl) -> bool {
        self.pot[a as usize].contains(b as usize)
    }

    pub fn fits(&self, i: Cl, umask: u64) -> bool {
        self.masks[i as usize] & !umask == 0
    }

    /// `λ[x/pos]` as a closure index.
    pub fn substitute(&self, i: Cl, pos: usize, x: Label) -> Cl {
        self.index[&self.cl[i as usize].substitute(pos, x)]
    }

    /// The universe bitmask of a letter; `None` when a vertex is outside
    /// `1..=k`.
    pub fn umask(&self, letter: &Structure) -> Option<u64> {
        let mut m = 0u64;
        for &v in letter.universe() {
            let i = vertex_number(v).filter(|&i| i >= 1 && i <= self.k)?;
            m |= 1 << (i - 1);
        }
        Some(m)
    }

    pub fn letter_info(&self, letter: &Structure) -> Arc<LetterInfo> {
        let key = letter.key();
        if let Some(info) = self.letter_cache.lock().get(&key) {
            return info.clone();
        }
        let info = Arc::new(self.compute_letter_info(letter));
        self.letter_cache.lock().insert(key, info.clone());
        info
    }

    fn compute_letter_info(&self, letter: &Structure) -> LetterInfo {
        let n = self.cl.len();
        let umask = self.umask(letter).expect("letter vertices must lie in 1..=k");
        let mut fit = FixedBitSet::with_capacity(n);
        for i in 0..n {
            if self.fits(i as Cl, umask) {
                fit.insert(i);
            }
        }
        let p = Pointed::local(letter);
        let reach_rows = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                if fit.contains(i) {
                    for m in reach(&p, self.cl[i]) {
                        row.insert(self.index[&m] as usize);
                    }
                }
                row
            })
            .collect();
        LetterInfo {
            umask,
            fit,
            reach: reach_rows,
        }
    }

    /// Accepts by forward chaining of the rules to saturation over every
    /// position; computes the same least fixpoint as [`super::membership`].
    pub fn accepts(&self, word: &[Structure]) -> bool {
        if word.is_empty() {
            return false;
        }
        let facts = self.derived(word);
        let first = self.letter_info(&word[0]);
        self.starts.iter().any(|&(s, e)| {
            first.fit.contains(s as usize)
                && first.fit.contains(e as usize)
                && facts[0][s as usize].contains(e as usize)
        })
    }

    /// The derivable `✓` pairs at each position: `facts[j][a]` holds `b` when
    /// `⟨λa, λb⟩✓` is derivable at letter `j`.
    pub fn derived(&self, word: &[Structure]) -> Vec<Vec<FixedBitSet>> {
        let infos: Vec<Arc<LetterInfo>> = word.iter().map(|s| self.letter_info(s)).collect();
        let mut facts: Vec<Vec<FixedBitSet>> = infos.iter().map(|inf| inf.reach.clone()).collect();
        let bullet_pos: Vec<Vec<usize>> = self
            .labels
            .iter()
            .map(|ls| {
                ls.iter()
                    .enumerate()
                    .filter(|(_, &l)| l == Label::Bullet)
                    .map(|(p, _)| p + 1)
                    .collect()
            })
            .collect();
        let mut subst_cache: HashMap<(Cl, usize, usize), Cl> = HashMap::new();
        let mut subst = |i: Cl, pos: usize, x: usize| -> Cl {
            *subst_cache
                .entry((i, pos, x))
                .or_insert_with(|| self.substitute(i, pos, vertex_label(x)))
        };
        loop {
            let mut changed = false;
            for j in 0..word.len() {
                // Transfers from the neighbours, for pairs fitting both.
                for nb in [j.wrapping_sub(1), j + 1] {
                    if nb >= word.len() {
                        continue;
                    }
                    let mut both = infos[j].fit.clone();
                    both.intersect_with(&infos[nb].fit);
                    for a in both.ones() {
                        let mut row = facts[nb][a].clone();
                        row.intersect_with(&both);
                        if !row.is_subset(&facts[j][a]) {
                            facts[j][a].union_with(&row);
                            changed = true;
                        }
                    }
                }
                // Transitivity and the L rule, to saturation.
                loop {
                    let mut local = false;
                    let fit: Vec<usize> = infos[j].fit.ones().collect();
                    for &m in &fit {
                        for &a in &fit {
                            if facts[j][a].contains(m) {
                                let row_m = facts[j][m].clone();
                                if !row_m.is_subset(&facts[j][a]) {
                                    facts[j][a].union_with(&row_m);
                                    local = true;
                                }
                            }
                        }
                    }
                    let umask = infos[j].umask;
                    let mut add = Vec::new();
                    for &a in &fit {
                        if bullet_pos[a].is_empty() {
                            continue;
                        }
                        for b in facts[j][a].ones() {
                            // Bullets are idle threads: the i-th on each side
                            // is the same one.
                            if bullet_pos[a].len() != bullet_pos[b].len() {
                                continue;
                            }
                            for (&l, &r) in bullet_pos[a].iter().zip(&bullet_pos[b]) {
                                for x in 1..=self.k {
                                    if umask >> (x - 1) & 1 == 1 {
                                        add.push((subst(a as Cl, l, x), subst(b as Cl, r, x)));
                                    }
                                }
                            }
                        }
                    }
                    for (a, b) in add {
                        if !facts[j][a as usize].contains(b as usize) {
                            facts[j][a as usize].insert(b as usize);
                            local = true;
                        }
                    }
                    if !local {
                        break;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        facts
    }

    fn ask(&self, a: Cl, b: Cl) -> Option<KState> {
        self.potential(a, b).then_some(KState::Ask(a, b))
    }

    fn check(&self, a: Cl, b: Cl) -> Option<KState> {
        self.potential(a, b).then_some(KState::Check(a, b))
    }
}

impl TwoAfa for KlAutomaton {
    type State = KState;

    fn initial(&self) -> KState {
        KState::Init
    }

    fn delta(&self, q: &KState, sym: Sym<'_>) -> PosBool<KState> {
        match (*q, sym) {
            (KState::Init, Sym::Begin) => {
                let mut f = PosBool::fls();
                for &(s, e) in &self.starts {
                    if let Some(st) = self.ask(s, e) {
                        f.add_clause([(st, 1)]);
                    }
                }
                f
            }
            (KState::Ask(a, b), Sym::Letter(s)) => {
                let um = self.umask(s).expect("letter vertices must lie in 1..=k");
                match self.check(a, b) {
                    Some(st) if self.fits(a, um) && self.fits(b, um) => PosBool::lit(st, 0),
                    _ => PosBool::fls(),
                }
            }
            (KState::Check(a, b), Sym::Letter(s)) => {
                let info = self.letter_info(s);
                if !info.fit.contains(a as usize) || !info.fit.contains(b as usize) {
                    return PosBool::fls();
                }
                if info.reach[a as usize].contains(b as usize) {
                    return PosBool::tru();
                }
                let mut f = PosBool::fls();
                if let Some(st) = self.ask(a, b) {
                    f.add_clause([(st, -1)]);
                    f.add_clause([(st, 1)]);
                }
                for m in info.fit.ones() {
                    let m = m as Cl;
                    if m == a || m == b {
                        continue;
                    }
                    if let (Some(p), Some(r)) = (self.check(a, m), self.check(m, b)) {
                        f.add_clause([(p, 0), (r, 0)]);
                    }
                }
                let la = &self.labels[a as usize];
                let lb = &self.labels[b as usize];
                let rank = |ls: &[Label], p: usize| ls[..p].iter().filter(|&&z| z == Label::Bullet).count();
                let same_count = la.iter().filter(|&&z| z == Label::Bullet).count()
                    == lb.iter().filter(|&&z| z == Label::Bullet).count();
                for (l, &x) in la.iter().enumerate() {
                    if x == Label::Bullet || !same_count {
                        continue;
                    }
                    for (r, &y) in lb.iter().enumerate() {
                        if x == y && rank(la, l) == rank(lb, r) {
                            let a2 = self.substitute(a, l + 1, Label::Bullet);
                            let b2 = self.substitute(b, r + 1, Label::Bullet);
                            if let Some(st) = self.check(a2, b2) {
                                f.add_clause([(st, 0)]);
                            }
                        }
                    }
                }
                f
            }
            _ => PosBool::fls(),
        }
    }

    fn states(&self) -> Vec<KState> {
        let mut v = vec![KState::Init];
        let n = self.cl.len() as Cl;
        for a in 0..n {
            for b in 0..n {
                v.push(KState::Ask(a, b));
                v.push(KState::Check(a, b));
            }
        }
        v
    }

    fn pruned(&self, q: &KState) -> bool {
        match *q {
            KState::Init => false,
            KState::Ask(a, b) | KState::Check(a, b) => !self.potential(a, b),
        }
    }

    /// Next-position `?` facts that hold are closed under composition.
    fn saturate_clause(&self, clause: &mut Vec<KState>) {
        let mut pairs: Vec<(Cl, Cl)> = clause
            .iter()
            .filter_map(|q| match *q {
                KState::Ask(a, b) => Some((a, b)),
                _ => None,
            })
            .collect();
        if pairs.len() < 2 {
            return;
        }
        loop {
            let mut add = Vec::new();
            for &(a, b) in &pairs {
                for &(c, d) in &pairs {
                    if b == c && a != d && !pairs.contains(&(a, d)) && !add.contains(&(a, d)) {
                        add.push((a, d));
                    }
                }
            }
            if add.is_empty() {
                break;
            }
            pairs.extend(add);
        }
        for (a, b) in pairs {
            let q = KState::Ask(a, b);
            if !clause.contains(&q) {
                clause.push(q);
            }
        }
    }
}
