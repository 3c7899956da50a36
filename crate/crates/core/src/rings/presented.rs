use std::fmt;

use crate::error::{Result, WorkbenchError};
use crate::polyalg::{radical_membership, GroebnerBasis, Ideal, Polynomial, TermOrder};

/// `ℚ[vars]/(relations)` with an eagerly computed degrevlex Gröbner basis.
#[derive(Clone)]
pub struct PresentedRing {
    vars: Vec<String>,
    relations: Vec<Polynomial>,
    gb: GroebnerBasis,
}

impl PresentedRing {
    /// Refuses the zero ring.
    pub fn new(vars: Vec<String>, relations: Vec<Polynomial>) -> Result<Self> {
        let n = vars.len();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(WorkbenchError::Construction(format!("duplicate variable `{v}`")));
            }
        }
        if relations.iter().any(|r| r.nvars() != n) {
            return Err(WorkbenchError::Internal("relation ambient mismatch".into()));
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let gb = GroebnerBasis::compute(n, &relations, TermOrder::DegRevLex);
        if gb.is_unit() {
            let shown: Vec<String> = relations.iter().map(|r| r.display(&vars)).collect();
            return Err(WorkbenchError::ZeroRing(format!("ℚ[{}]/({})", vars.join(","), shown.join(", "))));
        }
        Ok(PresentedRing { vars, relations, gb })
    }

    pub fn polynomial_ring(vars: &[&str]) -> Self {
        Self::new(vars.iter().map(|s| s.to_string()).collect(), Vec::new()).expect("polynomial rings are nonzero")
    }

    /// The base field ℚ.
    pub fn rationals() -> Self {
        Self::polynomial_ring(&[])
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn relation_ideal(&self) -> Ideal {
        Ideal::new(self.nvars(), self.relations.clone())
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// Canonical representative modulo the relations.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.gb.reduce(f)
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.gb.contains(f)
    }

    pub fn equal(&self, f: &Polynomial, g: &Polynomial) -> bool {
        self.is_zero(&(f - g))
    }

    /// `f ∈ (relations) + extra`.
    pub fn ideal_contains(&self, f: &Polynomial, extra: &[Polynomial]) -> bool {
        let mut gens = self.relations.clone();
        gens.extend(extra.iter().cloned());
        GroebnerBasis::compute(self.nvars(), &gens, TermOrder::DegRevLex).contains(f)
    }

    /// `f ∈ √((relations) + extra)`.
    pub fn radical_contains(&self, f: &Polynomial, extra: &[Polynomial]) -> bool {
        let mut gens = self.relations.clone();
        gens.extend(extra.iter().cloned());
        radical_membership(f, &Ideal::new(self.nvars(), gens))
    }

    /// Whether `(relations) + extra` is the unit ideal.
    pub fn generates_unit(&self, extra: &[Polynomial]) -> bool {
        self.ideal_contains(&self.one(), extra)
    }

    pub fn is_unit(&self, f: &Polynomial) -> bool {
        self.generates_unit(std::slice::from_ref(f))
    }

    /// A polynomial `g` with `f·g ≡ 1`, if `f` is a unit.
    pub fn inverse(&self, f: &Polynomial) -> Option<Polynomial> {
        let n = self.nvars();
        // z comes first and dominates
        let shift: Vec<usize> = (1..=n).collect();
        let mut gens: Vec<Polynomial> = self.relations.iter().map(|r| r.embed(n + 1, &shift)).collect();
        let z = Polynomial::var(n + 1, 0);
        gens.push(&(&z * &f.embed(n + 1, &shift)) - &Polynomial::one(n + 1));
        let gb = GroebnerBasis::compute(n + 1, &gens, TermOrder::Block(1));
        if gb.is_unit() {
            return None;
        }
        let r = gb.reduce(&z);
        let g = r.restrict_to(&shift)?;
        let g = self.reduce(&g);
        if self.equal(&(&g * f), &self.one()) {
            Some(g)
        } else {
            None
        }
    }

    pub fn display(&self, f: &Polynomial) -> String {
        f.display(&self.vars)
    }

    /// A variable name not yet used in this ring, preferring `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        fresh_name(&self.vars, base)
    }

    /// Same variables and same relation ideal.
    pub fn same_presentation(&self, other: &PresentedRing) -> bool {
        self.vars == other.vars && self.gb.polynomials() == other.gb.polynomials()
    }
}

pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|v| v == base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|c| !taken.contains(c)).unwrap()
}

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.display(r)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}
