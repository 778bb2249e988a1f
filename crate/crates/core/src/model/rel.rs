/// A binary relation on `0..n`, stored as one bitset row per source vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rel {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Rel {
    pub fn empty(n: usize) -> Rel {
        let words = n.div_ceil(64).max(1);
        Rel {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Rel {
        let mut r = Rel::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Rel {
        let mut r = Rel::empty(n);
        for i in 0..n {
            for j in 0..n {
                r.insert(i, j);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Rel {
        let mut r = Rel::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] &= !(1 << (j % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(i);
        (0..self.n).filter(move |&j| row[j / 64] >> (j % 64) & 1 == 1)
    }

    pub fn union(&self, other: &Rel) -> Rel {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn union_with(&mut self, other: &Rel) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &Rel) -> Rel {
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        r
    }

    pub fn difference(&self, other: &Rel) -> Rel {
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
        r
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn compose(&self, other: &Rel) -> Rel {
        let mut r = Rel::empty(self.n);
        for i in 0..self.n {
            for k in self.successors(i).collect::<Vec<_>>() {
                let src: Vec<u64> = other.row(k).to_vec();
                for (a, b) in r.row_mut(i).iter_mut().zip(&src) {
                    *a |= b;
                }
            }
        }
        r
    }

    pub fn transpose(&self) -> Rel {
        Rel::from_pairs(self.n, self.pairs().map(|(i, j)| (j, i)).collect::<Vec<_>>())
    }

    /// Reflexive-transitive closure, by a worklist over rows.
    pub fn star(&self) -> Rel {
        let mut r = self.union(&Rel::identity(self.n));
        // Warshall on bitset rows: after round k, paths through 0..=k are in.
        for k in 0..self.n {
            let row_k: Vec<u64> = r.row(k).to_vec();
            for i in 0..self.n {
                if r.contains(i, k) {
                    for (a, b) in r.row_mut(i).iter_mut().zip(&row_k) {
                        *a |= b;
                    }
                }
            }
        }
        r
    }

    /// Keeps only pairs whose endpoints both satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Rel {
        let kept: Vec<bool> = (0..self.n).map(keep).collect();
        Rel::from_pairs(
            self.n,
            self.pairs().filter(|&(i, j)| kept[i] && kept[j]).collect::<Vec<_>>(),
        )
    }
}
