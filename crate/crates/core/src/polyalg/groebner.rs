//! Multivariate division and Buchberger's algorithm over ℚ.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::{One, Zero};

use super::monomial::{Monomial, TermOrder};
use super::polynomial::Polynomial;
use super::Q;

/// Terms sorted ascending under a fixed order; the leading term is last.
#[derive(Clone, Debug)]
struct OrdPoly {
    terms: Vec<(Monomial, Q)>,
}

impl OrdPoly {
    fn from_poly(p: &Polynomial, ord: TermOrder) -> Self {
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        OrdPoly { terms }
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(nvars, self.terms.iter().cloned())
    }

    fn lead(&self) -> Option<&(Monomial, Q)> {
        self.terms.last()
    }

    fn lm(&self) -> &Monomial {
        &self.terms.last().expect("zero polynomial has no leading monomial").0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.last() {
            let inv = c.recip();
            if !inv.is_one() {
                for t in &mut self.terms {
                    t.1 = &t.1 * &inv;
                }
            }
        }
    }
}

/// `p - c * m * g` on ascending term lists.
fn sub_scaled(p: &[(Monomial, Q)], c: &Q, m: &Monomial, g: &[(Monomial, Q)], ord: TermOrder) -> Vec<(Monomial, Q)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < g.len() {
        if j == g.len() {
            out.extend_from_slice(&p[i..]);
            break;
        }
        let gm = g[j].0.mul(m);
        if i == p.len() {
            out.push((gm, -(c * &g[j].1)));
            j += 1;
            continue;
        }
        match ord.cmp(&p[i].0, &gm) {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((gm, -(c * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &p[i].1 - c * &g[j].1;
                if !v.is_zero() {
                    out.push((gm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full reduction of `f` by `basis`, trying divisors in list order.
fn reduce(f: &OrdPoly, basis: &[OrdPoly], ord: TermOrder) -> OrdPoly {
    // irreducible terms collected in descending order, reversed at the end
    let mut rem: Vec<(Monomial, Q)> = Vec::new();
    let mut p = f.terms.clone();
    while let Some((lm, lc)) = p.last().cloned() {
        let divisor = basis.iter().find(|g| !g.is_zero() && g.lm().divides(&lm));
        match divisor {
            Some(g) => {
                let (glm, glc) = g.lead().unwrap();
                let q = glm.quotient_of(&lm).unwrap();
                let c = &lc / glc;
                p = sub_scaled(&p, &c, &q, &g.terms, ord);
            }
            None => {
                rem.push(p.pop().unwrap());
            }
        }
    }
    rem.reverse();
    OrdPoly { terms: rem }
}

fn s_polynomial(f: &OrdPoly, g: &OrdPoly, ord: TermOrder) -> OrdPoly {
    let (fm, fc) = f.lead().unwrap();
    let (gm, gc) = g.lead().unwrap();
    let l = fm.lcm(gm);
    let uf = fm.quotient_of(&l).unwrap();
    let ug = gm.quotient_of(&l).unwrap();
    // (l/fm)/fc * f - (l/gm)/gc * g
    let mut a: Vec<(Monomial, Q)> = f.terms.iter().map(|(m, c)| (m.mul(&uf), c / fc)).collect();
    a = sub_scaled(&a, &gc.recip(), &ug, &g.terms, ord);
    OrdPoly { terms: a }
}

/// Normal form of `f` modulo `divisors` under `ord` (divisors tried in list order).
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial], ord: TermOrder) -> Polynomial {
    let basis: Vec<OrdPoly> = divisors.iter().map(|g| OrdPoly::from_poly(g, ord)).collect();
    reduce(&OrdPoly::from_poly(f, ord), &basis, ord).to_poly(f.nvars())
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted by ascending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    nvars: usize,
    order: TermOrder,
    polys: Vec<OrdPoly>,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm with the product and chain criteria.
    pub fn compute(nvars: usize, generators: &[Polynomial], order: TermOrder) -> Self {
        let mut basis: Vec<OrdPoly> = Vec::new();
        for g in generators {
            assert_eq!(g.nvars(), nvars, "generator ambient mismatch");
            if g.is_zero() {
                continue;
            }
            let mut p = OrdPoly::from_poly(g, order);
            p.make_monic();
            basis.push(p);
        }
        if basis.iter().any(|p| p.lm().is_one()) {
            return Self::unit(nvars, order);
        }

        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
        for j in 0..basis.len() {
            for i in 0..j {
                pending.insert((i, j));
            }
        }

        while let Some(&(i, j)) =
            pending.iter().min_by_key(|&&(i, j)| (basis[i].lm().lcm(basis[j].lm()).degree(), i, j))
        {
            pending.remove(&(i, j));
            let (mi, mj) = (basis[i].lm().clone(), basis[j].lm().clone());
            if mi.is_coprime(&mj) {
                continue;
            }
            let l = mi.lcm(&mj);
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lm().divides(&l)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = s_polynomial(&basis[i], &basis[j], order);
            let mut h = reduce(&s, &basis, order);
            if h.is_zero() {
                continue;
            }
            h.make_monic();
            if h.lm().is_one() {
                return Self::unit(nvars, order);
            }
            let k = basis.len();
            basis.push(h);
            for i in 0..k {
                pending.insert((i, k));
            }
        }

        // minimize: drop elements whose leading monomial is divisible by another's
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..basis.len() {
            let redundant = (0..basis.len())
                .any(|j| j != i && basis[j].lm().divides(basis[i].lm()) && (basis[j].lm() != basis[i].lm() || j < i));
            if !redundant {
                keep.push(i);
            }
        }
        let minimal: Vec<OrdPoly> = keep.into_iter().map(|i| basis[i].clone()).collect();

        // inter-reduce each element by the others
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<OrdPoly> =
                minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            let mut r = reduce(&minimal[i], &others, order);
            r.make_monic();
            reduced.push(r);
        }
        reduced.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        GroebnerBasis { nvars, order, polys: reduced }
    }

    fn unit(nvars: usize, order: TermOrder) -> Self {
        GroebnerBasis { nvars, order, polys: vec![OrdPoly { terms: vec![(Monomial::one(nvars), Q::one())] }] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm().is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|p| p.to_poly(self.nvars)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        reduce(&OrdPoly::from_poly(f, self.order), &self.polys, self.order).to_poly(self.nvars)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }
}

/// The S-polynomial of `f` and `g` under `ord`, exposed for property checks.
pub fn s_poly(f: &Polynomial, g: &Polynomial, ord: TermOrder) -> Polynomial {
    s_polynomial(&OrdPoly::from_poly(f, ord), &OrdPoly::from_poly(g, ord), ord).to_poly(f.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn division_examples() {
        // x^2 mod [x] = 0
        let x = var(1, 0);
        assert!(normal_form(&(&x * &x), std::slice::from_ref(&x), TermOrder::DegRevLex).is_zero());
        // x^2 y + y mod [x^2 - 1] = 2y
        let (x, y) = (var(2, 0), var(2, 1));
        let f = &(&(&x * &x) * &y) + &y;
        let g = &(&x * &x) - &Polynomial::one(2);
        let r = normal_form(&f, &[g], TermOrder::DegRevLex);
        assert_eq!(r, &y + &y);
        // x mod [y] under lex = x
        assert_eq!(normal_form(&x, std::slice::from_ref(&y), TermOrder::Lex), x);
    }

    #[test]
    fn buchberger_examples() {
        let (x, y) = (var(2, 0), var(2, 1));
        let gb = GroebnerBasis::compute(2, std::slice::from_ref(&x), TermOrder::DegRevLex);
        assert_eq!(gb.polynomials(), vec![x.clone()]);

        // (x^2 - y, y^2) under lex: already reduced
        let f = &(&x * &x) - &y;
        let g = &y * &y;
        let gb = GroebnerBasis::compute(2, &[f.clone(), g.clone()], TermOrder::Lex);
        let polys = gb.polynomials();
        assert_eq!(polys.len(), 2);
        assert!(polys.contains(&f) && polys.contains(&g));

        // (x, 1 - x) is the unit ideal
        let x1 = var(1, 0);
        let gb = GroebnerBasis::compute(1, &[x1.clone(), &Polynomial::one(1) - &x1], TermOrder::DegRevLex);
        assert!(gb.is_unit());
    }

    #[test]
    fn s_polynomials_of_output_reduce_to_zero() {
        let (x, y, z) = (var(3, 0), var(3, 1), var(3, 2));
        let gens = vec![&(&x * &y) - &z, &(&y * &z) - &x, &(&x * &z) - &y];
        let gb = GroebnerBasis::compute(3, &gens, TermOrder::DegRevLex);
        let polys = gb.polynomials();
        for a in &polys {
            for b in &polys {
                if a != b {
                    assert!(normal_form(&s_poly(a, b, TermOrder::DegRevLex), &polys, TermOrder::DegRevLex).is_zero());
                }
            }
        }
        for g in &gens {
            assert!(gb.contains(g));
        }
    }
}
