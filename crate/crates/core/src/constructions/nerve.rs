use std::sync::Arc;

use rayon::prelude::*;

use super::datum::{cylinder, Cylinder, Datum};
use super::product::{multi_product, ProductPoint, ProductSpace};
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::poset::Poset;
use crate::rings::{compose_chain, find_certificate, RingMap};
use crate::spaces::{RingedSpace, SchematicMorphism};

/// Morphisms `U_i → X` into a common target, each with certified comaps.
#[derive(Clone, Debug)]
pub struct FlatImmersionFamily {
    target: Arc<RingedSpace>,
    members: Vec<SchematicMorphism>,
}

impl FlatImmersionFamily {
    pub fn new(target: Arc<RingedSpace>, members: Vec<SchematicMorphism>) -> Result<Self> {
        if members.is_empty() {
            return Err(WorkbenchError::Construction("empty family".into()));
        }
        for (i, m) in members.iter().enumerate() {
            if m.target().poset() != target.poset() {
                return Err(WorkbenchError::MismatchedTargets);
            }
            if !m.is_flat_certified() {
                return Err(WorkbenchError::Construction(format!("member {i} is not a certified flat immersion")));
            }
        }
        Ok(FlatImmersionFamily { target, members })
    }

    /// The open subspaces `U_x` for the given elements.
    pub fn from_up_sets(target: &Arc<RingedSpace>, elements: &[usize]) -> Result<Self> {
        let members =
            elements.iter().map(|&x| SchematicMorphism::open_inclusion(target, x)).collect::<Result<Vec<_>>>()?;
        FlatImmersionFamily::new(target.clone(), members)
    }

    pub fn target(&self) -> &Arc<RingedSpace> {
        &self.target
    }

    pub fn members(&self) -> &[SchematicMorphism] {
        &self.members
    }
}

#[derive(Clone, Debug)]
pub struct CoverPoint {
    pub id: String,
    pub covered: bool,
    /// Composed witnesses in `O_y` of the member points above `y`.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CoveringReport {
    pub points: Vec<CoverPoint>,
    pub covering: bool,
}

impl CoveringReport {
    pub fn first_failure(&self) -> Option<&CoverPoint> {
        self.points.iter().find(|p| !p.covered)
    }
}

/// Surjectivity on spectra: at each `y`, the witnesses of the member points over `U_y` generate
/// the unit ideal of `O_y`.
pub fn is_covering(family: &FlatImmersionFamily) -> Result<CoveringReport> {
    let x = &family.target;
    let points: Vec<CoverPoint> = (0..x.len())
        .into_par_iter()
        .map(|y| {
            let ring = x.stalk(y);
            let mut ws = Vec::new();
            for f in &family.members {
                for u in 0..f.source().len() {
                    let fu = f.apply(u);
                    if !x.poset().leq(y, fu) {
                        continue;
                    }
                    let down = x.certified_map(y, fu)?;
                    let comp = compose_chain(&[&down, f.comap(u)])?;
                    let cert = comp.certificate().ok_or_else(|| {
                        WorkbenchError::CertificateRequired(format!("{} → {}", x.id(y), f.source().id(u)))
                    })?;
                    ws.push(cert.witness.clone());
                }
            }
            Ok(CoverPoint {
                id: x.id(y).to_string(),
                covered: ring.generates_unit(&ws),
                witnesses: ws.iter().map(|w| ring.display(w)).collect(),
            })
        })
        .collect::<Result<_>>()?;
    let covering = points.iter().all(|p| p.covered);
    Ok(CoveringReport { points, covering })
}

/// The nerve datum `𝒰`, its cylinder and the augmentation `Cyl(𝒰) → X`.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub datum: Datum,
    pub cylinder: Cylinder,
    pub augmentation: SchematicMorphism,
    pub covering: CoveringReport,
    /// The augmentation is a qc-isomorphism exactly when the family covers.
    pub augmentation_qc_iso: bool,
    /// Per member, whether `U_i → U_i ×_X U_i` is a qc-isomorphism.
    pub diagonal_qc_iso: Vec<bool>,
}

fn subset_name(members: &[usize], total: usize) -> String {
    let parts: Vec<String> = members.iter().map(|i| i.to_string()).collect();
    if total <= 10 {
        format!("U{}", parts.concat())
    } else {
        format!("U{}", parts.join("_"))
    }
}

/// The slot-to-slot comap `T_Δ(e) → T_Δ'(e')`, dropping the members of `Δ' ∖ Δ`.
fn drop_comap(
    small: &ProductSpace,
    e: usize,
    big: &ProductSpace,
    e2: usize,
    positions: &[usize],
    extra: &[usize],
) -> Result<RingMap> {
    let src = small.space.stalk(e);
    let tgt = big.space.stalk(e2);
    let images: Vec<Polynomial> =
        positions.iter().flat_map(|&pos| big.projections[pos].comap(e2).images().to_vec()).collect();
    let map = RingMap::new(src.clone(), tgt.clone(), images)?;
    match &big.leg_witnesses[e2] {
        Some(ws) => {
            let lead = small.structure.comap(e);
            let w = extra.iter().fold(src.one(), |acc, &j| src.reduce(&(&acc * &lead.apply(&ws[j]))));
            let cert = find_certificate(&map, &w)?;
            map.certified(cert)
        }
        None => Ok(map),
    }
}

pub fn nerve(family: &FlatImmersionFamily) -> Result<Nerve> {
    let m = family.members.len();
    if m > 12 {
        return Err(WorkbenchError::Construction(format!("{m} members exceed the nerve limit of 12")));
    }
    let subsets: Vec<Vec<usize>> =
        (1u32..(1 << m)).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect()).collect();
    let ids: Vec<String> = subsets.iter().map(|s| subset_name(s, m)).collect();
    let mut pairs = Vec::new();
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate() {
            if a != b && sa.iter().all(|i| sb.contains(i)) {
                pairs.push((a, b));
            }
        }
    }
    let index = Poset::from_relations(ids, &pairs)?;

    let products: Vec<Option<ProductSpace>> = subsets
        .par_iter()
        .map(|s| {
            if s.len() == 1 {
                Ok(None)
            } else {
                let maps: Vec<&SchematicMorphism> = s.iter().map(|&i| &family.members[i]).collect();
                multi_product(&maps).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let spaces: Vec<Arc<RingedSpace>> = subsets
        .iter()
        .zip(&products)
        .map(|(s, p)| match p {
            Some(p) => p.space.clone(),
            None => family.members[s[0]].source().clone(),
        })
        .collect();

    let mut transitions = Vec::new();
    for &(a, b) in &pairs {
        let (sa, sb) = (&subsets[a], &subsets[b]);
        let big = products[b].as_ref().unwrap();
        let positions: Vec<usize> = sa.iter().map(|i| sb.iter().position(|j| j == i).unwrap()).collect();
        let extra: Vec<usize> = (0..sb.len()).filter(|k| !positions.contains(k)).collect();
        let t = if sa.len() == 1 {
            big.projections[positions[0]].clone()
        } else {
            let small = products[a].as_ref().unwrap();
            let mut assignment = Vec::with_capacity(big.len());
            let mut comaps = Vec::with_capacity(big.len());
            for (e2, pt) in big.points.iter().enumerate() {
                let q = ProductPoint { base: pt.base, coords: positions.iter().map(|&k| pt.coords[k]).collect() };
                let e = small.index_of(&q).ok_or_else(|| {
                    WorkbenchError::Construction(format!("{} has no image in {}", big.space.id(e2), index.id(a)))
                })?;
                assignment.push(e);
                comaps.push(drop_comap(small, e, big, e2, &positions, &extra)?);
            }
            SchematicMorphism::new(big.space.clone(), small.space.clone(), assignment, comaps)?
        };
        transitions.push(((a, b), t));
    }
    let datum = Datum::new(index, spaces, transitions)?;
    let cyl = cylinder(&datum)?;
    let augmentation = augment(family, &subsets, &products, &cyl)?;
    let covering = is_covering(family)?;
    let diagonal_qc_iso = family.members.iter().map(diagonal_is_qc_iso).collect::<Result<Vec<_>>>()?;
    Ok(Nerve { augmentation_qc_iso: covering.covering, datum, cylinder: cyl, augmentation, covering, diagonal_qc_iso })
}

/// Members send `x` to `f_i(x)`; product points go to the join of the `f_i(x_i)`.
fn augment(
    family: &FlatImmersionFamily,
    subsets: &[Vec<usize>],
    products: &[Option<ProductSpace>],
    cyl: &Cylinder,
) -> Result<SchematicMorphism> {
    let x = &family.target;
    let mut assignment = Vec::with_capacity(cyl.parts.len());
    let mut comaps = Vec::with_capacity(cyl.parts.len());
    for (k, &(p, e)) in cyl.parts.iter().enumerate() {
        match &products[p] {
            None => {
                let f = &family.members[subsets[p][0]];
                assignment.push(f.apply(e));
                comaps.push(f.comap(e).clone());
            }
            Some(prod) => {
                let pt = &prod.points[e];
                let images: Vec<usize> =
                    subsets[p].iter().zip(&pt.coords).map(|(&i, &c)| family.members[i].apply(c)).collect();
                let j = x.poset().join(&images).ok_or_else(|| {
                    WorkbenchError::Construction(format!("no join in the target below {}", cyl.space.id(k)))
                })?;
                let down = x.certified_map(pt.base, j)?;
                let cert = down
                    .certificate()
                    .ok_or_else(|| WorkbenchError::CertificateRequired(format!("{} → {}", x.id(pt.base), x.id(j))))?;
                let lead = prod.structure.comap(e);
                let t = lead.target();
                let inv = t.inverse(&lead.apply(&cert.witness)).ok_or_else(|| {
                    WorkbenchError::Construction(format!("witness of {} is not a unit at {}", x.id(j), cyl.space.id(k)))
                })?;
                let sections: Vec<Polynomial> =
                    cert.sections.iter().map(|s| t.reduce(&(&lead.apply(&s.numerator) * &inv.pow(s.power)))).collect();
                let mut map = RingMap::new(x.stalk(j).clone(), t.clone(), sections)?;
                if let Some(ws) = &prod.leg_witnesses[e] {
                    let s = ws.iter().fold(x.stalk(pt.base).one(), |acc, w| &acc * w);
                    let w = x.stalk(j).reduce(&down.apply(&s));
                    if let Ok(c) = find_certificate(&map, &w) {
                        map = map.certified(c)?;
                    }
                }
                assignment.push(j);
                comaps.push(map);
            }
        }
    }
    SchematicMorphism::new(cyl.space.clone(), x.clone(), assignment, comaps)
}

/// `U → U ×_X U` is a qc-isomorphism iff it is a certified covering of the product.
fn diagonal_is_qc_iso(f: &SchematicMorphism) -> Result<bool> {
    let prod = multi_product(&[f, f])?;
    let u = f.source();
    let mut assignment = Vec::with_capacity(u.len());
    let mut comaps = Vec::with_capacity(u.len());
    for x in 0..u.len() {
        let e = prod
            .index_of(&ProductPoint { base: f.apply(x), coords: vec![x, x] })
            .ok_or_else(|| WorkbenchError::Internal(format!("diagonal misses {}", u.id(x))))?;
        let ring = u.stalk(x);
        let vars: Vec<Polynomial> = (0..ring.nvars()).map(|v| ring.var(v)).collect();
        let images = [vars.clone(), vars].concat();
        let map = RingMap::new(prod.space.stalk(e).clone(), ring.clone(), images)?;
        let map = match find_certificate(&map, &prod.space.stalk(e).one()) {
            Ok(c) => map.certified(c)?,
            Err(_) => return Ok(false),
        };
        assignment.push(e);
        comaps.push(map);
    }
    let diag = SchematicMorphism::new(u.clone(), prod.space.clone(), assignment, comaps)?;
    let fam = FlatImmersionFamily::new(prod.space.clone(), vec![diag])?;
    Ok(is_covering(&fam)?.covering)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::collapse_affine;
    use crate::rings::{localize, PresentedRing};
    use crate::spaces::builders::*;

    #[test]
    fn p1_chart_nerve() {
        let x = Arc::new(build_p1_model());
        let fam = FlatImmersionFamily::from_up_sets(&x, &[0, 1]).unwrap();
        let n = nerve(&fam).unwrap();
        let sizes: Vec<usize> = n.datum.spaces().iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![2, 2, 5]);
        assert_eq!(n.cylinder.space.len(), 9);
        assert!(n.augmentation_qc_iso);
        assert_eq!(n.diagonal_qc_iso, vec![true, true]);
        assert!(matches!(collapse_affine(&n.datum), Err(WorkbenchError::AffinenessUnverifiable(_))));
    }

    #[test]
    fn single_chart_fails_at_p1() {
        let x = Arc::new(build_p1_model());
        let fam = FlatImmersionFamily::from_up_sets(&x, &[0]).unwrap();
        let rep = is_covering(&fam).unwrap();
        assert!(!rep.covering);
        let bad = rep.first_failure().unwrap();
        assert_eq!(bad.id, "p1");
        assert_eq!(bad.witnesses, vec!["v"]);
        assert!(is_covering(&FlatImmersionFamily::from_up_sets(&x, &[0, 1]).unwrap()).unwrap().covering);
    }

    #[test]
    fn affine_line_collapse() {
        let line = Arc::new(PresentedRing::polynomial_ring(&["x"]));
        let x = Arc::new(build_point((*line).clone()));
        let member = |s: Polynomial| {
            let (ring, map) = localize(x.stalk(0), &s).unwrap();
            let u = Arc::new(build_point((*ring).clone()));
            SchematicMorphism::new(u, x.clone(), vec![0], vec![map]).unwrap()
        };
        let xv = line.var(0);
        let fam = FlatImmersionFamily::new(x.clone(), vec![member(xv.clone()), member(&xv - &line.one())]).unwrap();
        let n = nerve(&fam).unwrap();
        assert!(n.augmentation_qc_iso);
        let c = collapse_affine(&n.datum).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.poset().ids(), &["U0", "U1", "U01"]);
        assert!(crate::spaces::validate_space(&c).pseudoschematic);
    }

    #[test]
    fn uncertified_member_is_refused() {
        let x = Arc::new(build_p1_model());
        let f = to_base_point(&x);
        assert!(FlatImmersionFamily::new(f.target().clone(), vec![f]).is_err());
    }
}
