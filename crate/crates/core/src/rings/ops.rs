use std::sync::Arc;

use super::certificate::{LocalizationCertificate, Section};
use super::map::RingMap;
use super::presented::{fresh_name, PresentedRing};
use crate::error::{Result, WorkbenchError};
use crate::polyalg::{elimination_ideal, GroebnerBasis, Ideal, Polynomial, TermOrder};

/// `A[w]/(relations + (w·s − 1))` with `w` appended last.
pub fn localized_ring(a: &PresentedRing, s: &Polynomial) -> Result<(PresentedRing, usize)> {
    let degenerate = || WorkbenchError::DegenerateLocalization(a.display(s));
    if a.is_zero(s) {
        return Err(degenerate());
    }
    let n = a.nvars();
    let mut vars = a.vars().to_vec();
    vars.push(fresh_name(a.vars(), "w"));
    let mut rels: Vec<Polynomial> = a.relations().iter().map(|r| r.extend(1)).collect();
    let w = Polynomial::var(n + 1, n);
    rels.push(&(&w * &s.extend(1)) - &Polynomial::one(n + 1));
    let ring = PresentedRing::new(vars, rels).map_err(|_| degenerate())?;
    Ok((ring, n))
}

/// The canonical localization map `A → A_s` with its tautological certificate.
pub fn localize(a: &Arc<PresentedRing>, s: &Polynomial) -> Result<(Arc<PresentedRing>, RingMap)> {
    let (ring, w) = localized_ring(a, s)?;
    let ring = Arc::new(ring);
    let images = (0..a.nvars()).map(|i| ring.var(i)).collect();
    let mut sections: Vec<Section> = (0..a.nvars()).map(|i| Section { numerator: a.var(i), power: 0 }).collect();
    sections.push(Section { numerator: a.one(), power: 1 });
    let cert = LocalizationCertificate { witness: a.reduce(s), sections, inverse: ring.var(w) };
    let map = RingMap::new(a.clone(), ring.clone(), images)?.with_certificate_unchecked(cert);
    Ok((ring, map))
}

/// Pushout `A ⊗_R B` of `f: R → A` and `g: R → B`, with both coprojections.
///
/// Colliding variable names from `B` get a numeric suffix. A coprojection is certified
/// when the opposite leg is.
pub fn tensor_product(f: &RingMap, g: &RingMap) -> Result<(Arc<PresentedRing>, RingMap, RingMap)> {
    if !f.source().same_presentation(g.source()) {
        return Err(WorkbenchError::InvalidRingMap("tensor legs have different sources".into()));
    }
    let (a, b, r) = (f.target(), g.target(), f.source());
    let (na, nb) = (a.nvars(), b.nvars());
    let n = na + nb;

    let mut vars = a.vars().to_vec();
    for v in b.vars() {
        let name = if vars.contains(v) {
            (2..).map(|k| format!("{v}_{k}")).find(|c| !vars.contains(c) && !b.vars().contains(c)).unwrap()
        } else {
            v.clone()
        };
        vars.push(name);
    }
    let left: Vec<usize> = (0..na).collect();
    let right: Vec<usize> = (na..n).collect();

    let mut rels: Vec<Polynomial> = a.relations().iter().map(|p| p.embed(n, &left)).collect();
    rels.extend(b.relations().iter().map(|p| p.embed(n, &right)));
    for i in 0..r.nvars() {
        rels.push(&f.images()[i].embed(n, &left) - &g.images()[i].embed(n, &right));
    }
    let ring = Arc::new(PresentedRing::new(vars, rels)?);

    let ia = RingMap::new(a.clone(), ring.clone(), left.iter().map(|&i| ring.var(i)).collect())?;
    let ib = RingMap::new(b.clone(), ring.clone(), right.iter().map(|&i| ring.var(i)).collect())?;

    // base change: A → A ⊗ B is the localization at f(s) when g is at s
    let ia = match g.certificate() {
        Some(c) => {
            let mut sections: Vec<Section> = (0..na).map(|i| Section { numerator: a.var(i), power: 0 }).collect();
            sections.extend(c.sections.iter().map(|s| Section { numerator: f.apply(&s.numerator), power: s.power }));
            let cert =
                LocalizationCertificate { witness: f.apply(&c.witness), sections, inverse: ib.apply(&c.inverse) };
            ia.with_certificate_unchecked(cert)
        }
        None => ia,
    };
    let ib = match f.certificate() {
        Some(c) => {
            let mut sections: Vec<Section> =
                c.sections.iter().map(|s| Section { numerator: g.apply(&s.numerator), power: s.power }).collect();
            sections.extend((0..nb).map(|i| Section { numerator: b.var(i), power: 0 }));
            let cert =
                LocalizationCertificate { witness: g.apply(&c.witness), sections, inverse: ia.apply(&c.inverse) };
            ib.with_certificate_unchecked(cert)
        }
        None => ib,
    };
    Ok((ring, ia, ib))
}

/// Joint ambient: target variables first, then source variables.
fn graph_generators(phi: &RingMap, extra_target: &[Polynomial]) -> (usize, usize, Vec<Polynomial>) {
    let (a, b) = (phi.source(), phi.target());
    let (m, n) = (b.nvars(), a.nvars());
    let tgt: Vec<usize> = (0..m).collect();
    let mut gens: Vec<Polynomial> = b.relations().iter().map(|p| p.embed(m + n, &tgt)).collect();
    gens.extend(extra_target.iter().map(|p| p.embed(m + n, &tgt)));
    for i in 0..n {
        gens.push(&Polynomial::var(m + n, m + i) - &phi.images()[i].embed(m + n, &tgt));
    }
    (m, n, gens)
}

fn source_part(phi: &RingMap, m: usize, n: usize, gens: Vec<Polynomial>) -> Ideal {
    let keep: Vec<usize> = (m..m + n).collect();
    let elim = elimination_ideal(&Ideal::new(m + n, gens), &keep);
    let a = phi.source();
    let mut out: Vec<Polynomial> = Vec::new();
    for g in elim.generators() {
        let r = a.reduce(g);
        if !r.is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    Ideal::new(n, out)
}

/// Kernel of `φ` as an ideal of the source (generators nonzero modulo the source relations).
pub fn map_kernel(phi: &RingMap) -> Ideal {
    let (m, n, gens) = graph_generators(phi, &[]);
    source_part(phi, m, n, gens)
}

/// Every target variable is congruent to a polynomial in the source variables.
pub fn is_surjective(phi: &RingMap) -> bool {
    let (m, n, gens) = graph_generators(phi, &[]);
    let gb = GroebnerBasis::compute(m + n, &gens, TermOrder::Block(m));
    let src: Vec<usize> = (m..m + n).collect();
    (0..m).all(|j| gb.reduce(&Polynomial::var(m + n, j)).restrict_to(&src).is_some())
}

/// `φ^{-1}(p)` for a proper ideal `p` of the target.
pub fn prime_preimage(phi: &RingMap, p: &Ideal) -> Result<Ideal> {
    let b = phi.target();
    if b.generates_unit(p.generators()) {
        return Err(WorkbenchError::InvalidPrime(format!(
            "({}) is the unit ideal of {}",
            p.generators().iter().map(|g| b.display(g)).collect::<Vec<_>>().join(", "),
            b
        )));
    }
    let (m, n, gens) = graph_generators(phi, p.generators());
    Ok(source_part(phi, m, n, gens))
}
