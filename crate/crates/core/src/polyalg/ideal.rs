use super::groebner::GroebnerBasis;
use super::monomial::TermOrder;
use super::polynomial::Polynomial;

/// Generators of an ideal in a fixed ambient polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(nvars: usize, gens: Vec<Polynomial>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { nvars, gens }
    }

    pub fn zero(nvars: usize) -> Self {
        Ideal { nvars, gens: Vec::new() }
    }

    pub fn unit(nvars: usize) -> Self {
        Ideal { nvars, gens: vec![Polynomial::one(nvars)] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn push(&mut self, g: Polynomial) {
        if !g.is_zero() {
            self.gens.push(g);
        }
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal { nvars: self.nvars, gens }
    }

    pub fn groebner(&self, ord: TermOrder) -> GroebnerBasis {
        GroebnerBasis::compute(self.nvars, &self.gens, ord)
    }

    pub fn is_unit(&self) -> bool {
        self.groebner(TermOrder::DegRevLex).is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }
}

pub fn ideal_membership(f: &Polynomial, ideal: &Ideal) -> bool {
    ideal.groebner(TermOrder::DegRevLex).contains(f)
}

/// Rabinowitsch: `f ∈ √I` iff `1 ∈ I + (1 - y f)` with `y` a fresh last variable.
pub fn radical_membership(f: &Polynomial, ideal: &Ideal) -> bool {
    if f.is_zero() {
        return true;
    }
    let n = ideal.nvars();
    let y = Polynomial::var(n + 1, n);
    let mut gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.extend(1)).collect();
    gens.push(&Polynomial::one(n + 1) - &(&y * &f.extend(1)));
    GroebnerBasis::compute(n + 1, &gens, TermOrder::DegRevLex).is_unit()
}

/// `I ∩ ℚ[keep]`, returned in the ambient of the kept variables (in `keep` order).
pub fn elimination_ideal(ideal: &Ideal, keep: &[usize]) -> Ideal {
    let n = ideal.nvars();
    let elim: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    // new position of each old variable: eliminated block first
    let mut target = vec![0; n];
    for (pos, &v) in elim.iter().chain(keep.iter()).enumerate() {
        target[v] = pos;
    }
    let gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.embed(n, &target)).collect();
    let gb = GroebnerBasis::compute(n, &gens, TermOrder::Block(elim.len()));
    let kept_positions: Vec<usize> = (elim.len()..n).collect();
    let out = gb.polynomials().into_iter().filter_map(|g| g.restrict_to(&kept_positions)).collect();
    Ideal::new(keep.len(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let x = Polynomial::var(1, 0);
        let x2 = &x * &x;
        assert!(!ideal_membership(&x, &Ideal::new(1, vec![x2.clone()])));
        assert!(ideal_membership(&x2, &Ideal::new(1, vec![x.clone()])));
    }

    #[test]
    fn radical_examples() {
        let x = Polynomial::var(1, 0);
        assert!(radical_membership(&x, &Ideal::new(1, vec![&x * &x])));
        let one = Polynomial::one(1);
        assert!(radical_membership(&one, &Ideal::new(1, vec![x.clone(), &x - &one])));
        let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        assert!(!radical_membership(&x, &Ideal::new(2, vec![y])));
    }

    #[test]
    fn twisted_cubic_elimination() {
        // variables t, u, v
        let (t, u, v) = (Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2));
        let i = Ideal::new(3, vec![&u - &t.pow(2), &v - &t.pow(3)]);
        let e = elimination_ideal(&i, &[1, 2]);
        let (u2, v2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let expected = &u2.pow(3) - &v2.pow(2);
        assert_eq!(e.generators().len(), 1);
        assert!(e.generators()[0] == expected || e.generators()[0] == -&expected);
    }

    #[test]
    fn elimination_trivial_cases() {
        let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        assert!(elimination_ideal(&Ideal::new(2, vec![&x - &y]), &[1]).is_zero());
        let e = elimination_ideal(&Ideal::unit(2), &[0]);
        assert!(e.generators()[0].is_one());
    }
}
