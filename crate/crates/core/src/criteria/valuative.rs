use rayon::prelude::*;

use super::rational::RationalFunction;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::spaces::{centre, PrimePoint, RingedSpace, SchematicMorphism};

/// Matching data over the base: an element `b` of `Y` and images of the variables of `O_{Y,b}`
/// in `ℚ[t]_(t)`.
#[derive(Clone, Debug)]
pub struct BaseData {
    pub element: usize,
    pub images: Vec<RationalFunction>,
}

/// A `ℚ(t)`-point of `X` at the carrier `x₁`.
#[derive(Clone, Debug)]
pub struct SigmaPoint {
    pub carrier: usize,
    pub images: Vec<RationalFunction>,
    pub base: Option<BaseData>,
}

impl SigmaPoint {
    /// Checks that every relation of `O_{x₁}` vanishes at the images.
    pub fn new(space: &RingedSpace, carrier: usize, images: Vec<RationalFunction>) -> Result<Self> {
        let ring = space.stalk(carrier);
        if images.len() != ring.nvars() {
            return Err(WorkbenchError::InvalidRingMap(format!(
                "{} images for the {} variables at {}",
                images.len(),
                ring.nvars(),
                space.id(carrier)
            )));
        }
        if let Some(r) = ring.relations().iter().find(|r| !RationalFunction::evaluate(r, &images).is_zero()) {
            return Err(WorkbenchError::InvalidRingMap(format!(
                "relation {} does not vanish at {}",
                ring.display(r),
                space.id(carrier)
            )));
        }
        Ok(SigmaPoint { carrier, images, base: None })
    }

    pub fn with_base(mut self, base: BaseData) -> Self {
        self.base = Some(base);
        self
    }

    /// Moves the carrier up along certified covers while the witness stays nonzero, extending
    /// the images through the certificate sections.
    pub fn centralize(&self, space: &RingedSpace) -> SigmaPoint {
        let mut cur = self.clone();
        'up: loop {
            for y in space.poset().upper_covers(cur.carrier) {
                let Some(cert) = space.restriction(cur.carrier, y).and_then(|r| r.certificate()) else { continue };
                let Some(inv) = RationalFunction::evaluate(&cert.witness, &cur.images).inverse() else { continue };
                let images = cert
                    .sections
                    .iter()
                    .map(|s| &RationalFunction::evaluate(&s.numerator, &cur.images) * &inv.pow(s.power))
                    .collect();
                cur = SigmaPoint { carrier: y, images, base: cur.base.clone() };
                continue 'up;
            }
            return cur;
        }
    }

    pub fn describe(&self, space: &RingedSpace) -> String {
        let ring = space.stalk(self.carrier);
        let parts: Vec<String> = ring.vars().iter().zip(&self.images).map(|(v, r)| format!("{v} ↦ {r}")).collect();
        format!("{}: {}", space.id(self.carrier), parts.join(", "))
    }
}

/// The images of the generators of `O_{x₀}` under `O_{x₀} → O_{x₁} → ℚ(t)`.
fn pulled_back(space: &RingedSpace, x0: usize, sigma: &SigmaPoint) -> Vec<RationalFunction> {
    let r = space.map_between(x0, sigma.carrier).unwrap();
    r.images().iter().map(|p| RationalFunction::evaluate(p, &sigma.images)).collect()
}

/// Raw lifts `x₀ ≤ x₁`: every generator lands in `ℚ[t]_(t)` and, relative to `f`, the base
/// square commutes.
pub fn raw_lifts(f: Option<&SchematicMorphism>, space: &RingedSpace, sigma: &SigmaPoint) -> Vec<usize> {
    (0..space.len())
        .filter(|&x0| space.poset().leq(x0, sigma.carrier))
        .filter(|&x0| {
            let imgs = pulled_back(space, x0, sigma);
            imgs.iter().all(RationalFunction::is_integral) && base_commutes(f, x0, &imgs, sigma)
        })
        .collect()
}

fn base_commutes(f: Option<&SchematicMorphism>, x0: usize, imgs: &[RationalFunction], sigma: &SigmaPoint) -> bool {
    let (Some(f), Some(base)) = (f, &sigma.base) else { return true };
    let y = f.target();
    let fx = f.apply(x0);
    let Some(r) = y.map_between(base.element, fx) else { return false };
    let comap = f.comap(x0);
    r.images().iter().zip(&base.images).all(|(p, expected)| {
        let via: Polynomial = comap.apply(p);
        RationalFunction::evaluate(&via, imgs) == *expected
    })
}

/// Lifts counted up to qc-isomorphism: a raw lift `x₀` counts when it is the centre of the
/// closed point it carries. The point is first moved to its centralized carrier.
pub fn v_lifts(f: Option<&SchematicMorphism>, space: &RingedSpace, sigma: &SigmaPoint) -> Result<Vec<usize>> {
    let sigma = &sigma.centralize(space);
    let mut out = Vec::new();
    for x0 in raw_lifts(f, space, sigma) {
        let imgs = pulled_back(space, x0, sigma);
        let ring = space.stalk(x0);
        let gens: Vec<Polynomial> =
            imgs.iter().enumerate().map(|(i, r)| &ring.var(i) - &ring.one().scale(&r.residue().unwrap())).collect();
        let point = PrimePoint::new(space, x0, gens)?;
        if centre(space, &point)?.carrier == x0 {
            out.push(x0);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LiftCount {
    pub point: String,
    pub lifts: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct VProperReport {
    pub points: Vec<LiftCount>,
    pub v_separated: bool,
    pub v_proper: bool,
    /// Set when the base has height above one and the base data format may be too coarse.
    pub base_caveat: Option<String>,
}

impl VProperReport {
    pub const QUALIFIER: &'static str = "sampled";

    pub fn first_failure(&self) -> Option<&LiftCount> {
        self.points.iter().find(|p| p.lifts.len() != 1)
    }
}

/// Lift counts over a suite of test points; a sampled verdict only.
pub fn v_proper_report(f: &SchematicMorphism, suite: &[SigmaPoint]) -> Result<VProperReport> {
    if suite.is_empty() {
        return Err(WorkbenchError::Validation(vec!["empty suite".into()]));
    }
    let space = f.source();
    let points: Vec<LiftCount> = suite
        .par_iter()
        .map(|s| {
            let lifts = v_lifts(Some(f), space, s)?;
            Ok(LiftCount { point: s.describe(space), lifts: lifts.iter().map(|&x| space.id(x).to_string()).collect() })
        })
        .collect::<Result<_>>()?;
    let v_separated = points.iter().all(|p| p.lifts.len() <= 1);
    let v_proper = points.iter().all(|p| p.lifts.len() == 1);
    let height = f.target().poset().height();
    let base_caveat =
        (height > 1).then(|| format!("base has height {height}; base matching uses one element and its comap images"));
    Ok(VProperReport { points, v_separated, v_proper, base_caveat })
}
