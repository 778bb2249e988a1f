use rand::Rng;

use super::term::Term;

/// Shape of randomly generated terms.
#[derive(Clone, Debug)]
pub struct TermGen {
    pub names: Vec<String>,
    pub allow_meet: bool,
    pub allow_star: bool,
    pub allow_zero: bool,
    pub allow_converse: bool,
    pub allow_top: bool,
}

impl TermGen {
    pub fn kl(names: &[&str]) -> TermGen {
        TermGen {
            names: names.iter().map(|s| s.to_string()).collect(),
            allow_meet: true,
            allow_star: true,
            allow_zero: true,
            allow_converse: false,
            allow_top: false,
        }
    }

    fn atom<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        let roll = rng.gen_range(0..10);
        if roll == 0 {
            Term::one()
        } else if roll == 1 && self.allow_zero {
            Term::zero()
        } else if roll == 2 && self.allow_top {
            Term::top()
        } else {
            Term::var(&self.names[rng.gen_range(0..self.names.len())])
        }
    }

    /// A term of size exactly `size` (size ≥ 1).
    pub fn sized<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Term {
        if size <= 1 {
            return self.atom(rng);
        }
        let unary = self.allow_star || self.allow_converse;
        if size == 2 {
            return if unary {
                self.unary(rng, size)
            } else {
                self.atom(rng)
            };
        }
        if unary && rng.gen_range(0..4) == 0 {
            return self.unary(rng, size);
        }
        let left = rng.gen_range(1..size - 1);
        let a = self.sized(rng, left);
        let b = self.sized(rng, size - 1 - left);
        let ops = if self.allow_meet { 3 } else { 2 };
        match rng.gen_range(0..ops) {
            0 => Term::seq(a, b),
            1 => Term::sum(a, b),
            _ => Term::meet(a, b),
        }
    }

    fn unary<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Term {
        let body = self.sized(rng, size - 1);
        let star = self.allow_star && (!self.allow_converse || rng.gen_bool(0.5));
        if star {
            Term::star(body)
        } else {
            Term::conv(body)
        }
    }

    /// A term of size uniformly drawn from `1..=max_size`.
    pub fn up_to<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Term {
        let size = rng.gen_range(1..=max_size.max(1));
        self.sized(rng, size)
    }
}
