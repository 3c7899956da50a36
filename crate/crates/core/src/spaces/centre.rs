use std::collections::{HashSet, VecDeque};

use super::morphism::SchematicMorphism;
use super::ringed::RingedSpace;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::{Ideal, Polynomial, TermOrder};
use crate::rings::prime_preimage;

/// A point of the spectrum given by a carrier and an ideal of its stalk.
///
/// Properness is checked; primality is taken on trust and reported as asserted.
#[derive(Clone, Debug)]
pub struct PrimePoint {
    pub carrier: usize,
    pub prime: Ideal,
}

impl PrimePoint {
    pub fn new(space: &RingedSpace, carrier: usize, generators: Vec<Polynomial>) -> Result<Self> {
        let ring = space.stalk(carrier);
        if generators.iter().any(|g| g.nvars() != ring.nvars()) {
            return Err(WorkbenchError::InvalidPrime("generator ambient mismatch".into()));
        }
        if ring.generates_unit(&generators) {
            return Err(WorkbenchError::InvalidPrime(format!(
                "({}) is the unit ideal at {}",
                generators.iter().map(|g| ring.display(g)).collect::<Vec<_>>().join(", "),
                space.id(carrier)
            )));
        }
        Ok(PrimePoint { carrier, prime: Ideal::new(ring.nvars(), generators) })
    }
}

#[derive(Clone, Debug)]
pub struct CentreResult {
    pub carrier: usize,
    /// The ideal at the centre carrier, as a reduced Gröbner basis including the relations.
    pub prime: Ideal,
    /// Carriers of all representatives reached, in index order.
    pub representatives: Vec<usize>,
}

/// Canonical form of `I_x + p`: its reduced basis.
fn canonical(space: &RingedSpace, x: usize, p: &Ideal) -> Vec<Polynomial> {
    space.stalk(x).relation_ideal().sum(p).groebner(TermOrder::DegRevLex).polynomials()
}

/// Zig-zag saturation over representatives; returns the unique maximal carrier.
pub fn centre(space: &RingedSpace, point: &PrimePoint) -> Result<CentreResult> {
    let poset = space.poset();
    let n = space.len();
    let bound = (n * n).max(1);
    let start = canonical(space, point.carrier, &point.prime);
    let mut seen: HashSet<(usize, Vec<Polynomial>)> = HashSet::new();
    let mut states: Vec<(usize, Vec<Polynomial>)> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert((point.carrier, start.clone()));
    queue.push_back((point.carrier, start));

    while let Some((x, gens)) = queue.pop_front() {
        states.push((x, gens.clone()));
        if states.len() > bound {
            return Err(WorkbenchError::Internal(format!("centre saturation exceeded {bound} states")));
        }
        let ring = space.stalk(x);
        let ideal = Ideal::new(ring.nvars(), gens.clone());
        let mut next: Vec<(usize, Ideal)> = Vec::new();
        for t in poset.upper_covers(x) {
            let r = space.restriction(x, t).unwrap();
            let cert = r.certificate().ok_or_else(|| {
                WorkbenchError::CertificateRequired(format!("restriction {} → {}", space.id(x), space.id(t)))
            })?;
            if ring.ideal_contains(&cert.witness, &gens) {
                continue;
            }
            let moved: Vec<Polynomial> = gens.iter().map(|g| r.apply(g)).collect();
            let target = space.stalk(t);
            if target.generates_unit(&moved) {
                continue;
            }
            next.push((t, Ideal::new(target.nvars(), moved)));
        }
        for z in 0..n {
            if poset.covers(z, x) {
                let r = space.restriction(z, x).unwrap();
                next.push((z, prime_preimage(r, &ideal)?));
            }
        }
        for (y, p) in next {
            let key = (y, canonical(space, y, &p));
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }

    let mut carriers: Vec<usize> = states.iter().map(|(x, _)| *x).collect();
    carriers.sort_unstable();
    carriers.dedup();
    let top = poset.maximum(&carriers).ok_or_else(|| {
        let maxima: Vec<&str> = poset.maximal_elements(&carriers).into_iter().map(|m| space.id(m)).collect();
        WorkbenchError::SchematicityViolation(format!(
            "representatives have several maximal carriers: {}",
            maxima.join(", ")
        ))
    })?;
    let at_top: Vec<&Vec<Polynomial>> = states.iter().filter(|(x, _)| *x == top).map(|(_, g)| g).collect();
    if at_top.len() > 1 {
        return Err(WorkbenchError::SchematicityViolation(format!(
            "{} distinct ideals represent the point at {}",
            at_top.len(),
            space.id(top)
        )));
    }
    let ring = space.stalk(top);
    Ok(CentreResult { carrier: top, prime: Ideal::new(ring.nvars(), at_top[0].clone()), representatives: carriers })
}

#[derive(Clone, Debug)]
pub struct CentralVerdict {
    pub carrier: String,
    pub prime: String,
    /// `f(centre_X(P))`.
    pub image_of_centre: Option<String>,
    /// `centre_Y(Spec f (P))`.
    pub centre_of_image: Option<String>,
    pub pass: bool,
    /// Set when the point could not be transported; such points are skipped.
    pub skipped: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CentralReport {
    pub points: Vec<CentralVerdict>,
    pub all_pass: bool,
}

/// Sampled centre-compatibility: `f(centre(P)) = centre(f(P))` on each test point.
pub fn check_central(f: &SchematicMorphism, tests: &[PrimePoint]) -> CentralReport {
    let (x_space, y_space) = (f.source(), f.target());
    let points: Vec<CentralVerdict> = tests
        .iter()
        .map(|p| {
            let ring = x_space.stalk(p.carrier);
            let shown: Vec<String> = p.prime.generators().iter().map(|g| ring.display(g)).collect();
            let mut verdict = CentralVerdict {
                carrier: x_space.id(p.carrier).to_string(),
                prime: format!("({})", shown.join(", ")),
                image_of_centre: None,
                centre_of_image: None,
                pass: false,
                skipped: None,
            };
            let outcome = (|| -> Result<(usize, usize)> {
                let c = centre(x_space, p)?;
                let fc = f.apply(c.carrier);
                let q = prime_preimage(f.comap(c.carrier), &c.prime)?;
                let image = PrimePoint { carrier: fc, prime: q };
                let cy = centre(y_space, &image)?;
                Ok((fc, cy.carrier))
            })();
            match outcome {
                Ok((a, b)) => {
                    verdict.image_of_centre = Some(y_space.id(a).to_string());
                    verdict.centre_of_image = Some(y_space.id(b).to_string());
                    verdict.pass = a == b;
                }
                Err(e) => verdict.skipped = Some(e.to_string()),
            }
            verdict
        })
        .collect();
    let all_pass = points.iter().all(|v| v.pass || v.skipped.is_some());
    CentralReport { points, all_pass }
}
