use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::monomial::{Monomial, TermOrder};
use super::Q;

/// Multivariate polynomial over ℚ.
///
/// Terms are kept sorted by descending degrevlex with no zero coefficients and
/// no repeated monomials, so structural equality is ring equality in ℚ[vars].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Q)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Q::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Polynomial { nvars, terms: vec![(Monomial::var(nvars, i), Q::one())] }
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| TermOrder::DegRevLex.cmp(&b.0, &a.0));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending degrevlex order.
    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value if the polynomial has no variables in it.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn leading_term(&self, ord: TermOrder) -> Option<&(Monomial, Q)> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(m, _)| m.exponents()[i] > 0)).collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `images[i]` for variable `i`. All images share one ambient.
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "substitution arity mismatch");
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target_nvars)]; self.nvars];
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-embeds into a bigger (or permuted) ambient; variable `i` becomes `target[i]`.
    pub fn embed(&self, nvars: usize, target: &[usize]) -> Self {
        Polynomial::from_terms(nvars, self.terms.iter().map(|(m, c)| (m.embed(nvars, target), c.clone())))
    }

    /// Appends `extra` fresh variables at the end of the ambient.
    pub fn extend(&self, extra: usize) -> Self {
        let target: Vec<usize> = (0..self.nvars).collect();
        self.embed(self.nvars + extra, &target)
    }

    /// Restricts to the variables in `keep`, which must contain the support.
    pub fn restrict_to(&self, keep: &[usize]) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponents();
            if (0..self.nvars).any(|i| e[i] > 0 && !keep.contains(&i)) {
                return None;
            }
            let exps = keep.iter().map(|&i| e[i]).collect();
            terms.push((Monomial::from_exponents(exps), c.clone()));
        }
        Some(Polynomial::from_terms(keep.len(), terms))
    }

    /// Scales so the degrevlex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Renders with the given variable names, e.g. `3/4*x^2*y - z + 1`.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() || !abs.is_one() {
                let _ = write!(s, "{}", fmt_rational(&abs));
                if !factors.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

pub fn fmt_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn merge(a: &[(Monomial, Q)], b: &[(Monomial, Q)], negate_b: bool) -> Vec<(Monomial, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let ord = TermOrder::DegRevLex;
    while i < a.len() && j < b.len() {
        match ord.cmp(&a[i].0, &b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -b[j].1.clone() } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for t in &b[j..] {
        let c = if negate_b { -t.1.clone() } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        Polynomial { nvars: self.nvars, terms: merge(&self.terms, &rhs.terms, false) }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        Polynomial { nvars: self.nvars, terms: merge(&self.terms, &rhs.terms, true) }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                *acc.entry(m.mul(n)).or_insert_with(Q::zero) += a * b;
            }
        }
        Polynomial::from_terms(self.nvars, acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
