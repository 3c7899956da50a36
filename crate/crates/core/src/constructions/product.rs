use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::poset::Poset;
use crate::rings::{compose_chain, find_certificate, tensor_product, PresentedRing, RingMap};
use crate::spaces::{RingedSpace, SchematicMorphism};

/// A point `(b, x_1, …, x_k)` of a fibered product, `b ≤ f_i(x_i)` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductPoint {
    pub base: usize,
    pub coords: Vec<usize>,
}

/// `X_1 ×_B … ×_B X_k` with its projections and structure map.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    pub space: Arc<RingedSpace>,
    pub points: Vec<ProductPoint>,
    pub projections: Vec<SchematicMorphism>,
    pub structure: SchematicMorphism,
    /// Witnesses in `O_b` of the legs `O_b → O_{x_i}` at each point, when certified.
    pub(crate) leg_witnesses: Vec<Option<Vec<Polynomial>>>,
    index: HashMap<ProductPoint, usize>,
}

impl ProductSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &ProductPoint) -> Option<usize> {
        self.index.get(p).copied()
    }
}

fn same_space(a: &Arc<RingedSpace>, b: &Arc<RingedSpace>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.poset() == b.poset() && a.stalks().iter().zip(b.stalks()).all(|(r, s)| r.same_presentation(s)))
}

fn point_name(spaces: &[&Arc<RingedSpace>], base: &RingedSpace, p: &ProductPoint) -> String {
    let xs: Vec<&str> = p.coords.iter().zip(spaces).map(|(&x, s)| s.id(x)).collect();
    if xs.len() == 2 {
        format!("({},{},{})", xs[0], base.id(p.base), xs[1])
    } else {
        format!("({};{})", xs.join(","), base.id(p.base))
    }
}

/// The leg `O_b → O_{f(x)} → O_x`, certified when both parts are.
fn leg(f: &SchematicMorphism, b: usize, x: usize) -> Result<RingMap> {
    let base = f.target();
    let down = base.certified_map(b, f.apply(x))?;
    compose_chain(&[&down, f.comap(x)])
}

struct Stalk {
    ring: Arc<PresentedRing>,
    slots: Vec<RingMap>,
    structure: RingMap,
    legs: Vec<RingMap>,
}

/// Iterated tensor product of the legs over `O_b`; `None` for the zero ring.
fn tensor_stalk(legs: Vec<RingMap>) -> Result<Option<Stalk>> {
    let first = &legs[0];
    let mut ring = first.target().clone();
    let mut lead = first.clone();
    let mut slots = vec![RingMap::identity(ring.clone())];
    for l in &legs[1..] {
        let (t, ia, ib) = match tensor_product(&lead, l) {
            Ok(v) => v,
            Err(WorkbenchError::ZeroRing(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        slots = slots.iter().map(|s| s.then(&ia)).collect::<Result<_>>()?;
        slots.push(ib);
        lead = lead.then(&ia)?;
        ring = t;
    }
    Ok(Some(Stalk { ring, slots, structure: lead, legs }))
}

/// Attaches the base-change certificate to a slot or structure map when the legs are certified.
fn certify(map: RingMap, witness: Option<Polynomial>) -> Result<RingMap> {
    match witness {
        Some(w) => {
            let cert = find_certificate(&map, &w)?;
            map.certified(cert)
        }
        None => Ok(map),
    }
}

/// Fibered product of maps sharing a target. Points whose stalk is the zero ring are dropped.
pub fn multi_product(maps: &[&SchematicMorphism]) -> Result<ProductSpace> {
    let first = maps.first().ok_or_else(|| WorkbenchError::Construction("empty product".into()))?;
    let base = first.target().clone();
    if maps.iter().any(|m| !same_space(m.target(), &base)) {
        return Err(WorkbenchError::MismatchedTargets);
    }
    let spaces: Vec<&Arc<RingedSpace>> = maps.iter().map(|m| m.source()).collect();
    let k = maps.len();

    // enumerate tuples
    let mut candidates: Vec<ProductPoint> = Vec::new();
    for b in 0..base.len() {
        let options: Vec<Vec<usize>> =
            maps.iter().map(|m| (0..m.source().len()).filter(|&x| base.poset().leq(b, m.apply(x))).collect()).collect();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        for opt in &options {
            stack =
                stack.into_iter().flat_map(|pre| opt.iter().map(move |&x| [pre.clone(), vec![x]].concat())).collect();
        }
        candidates.extend(stack.into_iter().map(|coords| ProductPoint { base: b, coords }));
    }
    let key = |p: &ProductPoint| {
        let mut v = vec![p.coords[0], p.base];
        v.extend_from_slice(&p.coords[1..]);
        v
    };
    candidates.sort_by_key(key);

    let mut points = Vec::new();
    let mut stalks: Vec<Stalk> = Vec::new();
    for p in candidates {
        let legs: Vec<RingMap> = (0..k).map(|i| leg(maps[i], p.base, p.coords[i])).collect::<Result<_>>()?;
        if let Some(s) = tensor_stalk(legs)? {
            points.push(p);
            stalks.push(s);
        }
    }

    let ids: Vec<String> = points.iter().map(|p| point_name(&spaces, &base, p)).collect();
    let leq: Vec<Vec<bool>> = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| {
                    base.poset().leq(p.base, q.base) && (0..k).all(|i| spaces[i].poset().leq(p.coords[i], q.coords[i]))
                })
                .collect()
        })
        .collect();
    let poset = Poset::from_matrix(ids, leq)?;

    let mut restrictions = Vec::new();
    for (a, c) in poset.cover_relations() {
        let (pa, pc) = (&points[a], &points[c]);
        let (sa, sc) = (&stalks[a], &stalks[c]);
        let mut images = Vec::with_capacity(sa.ring.nvars());
        let mut witness = Some(sa.ring.one());
        for i in 0..k {
            let x = &spaces[i];
            let r = x.map_between(pa.coords[i], pc.coords[i]).unwrap();
            for v in 0..x.stalk(pa.coords[i]).nvars() {
                images.push(sc.slots[i].apply(&r.images()[v]));
            }
            witness = match (witness, x.witness(pa.coords[i], pc.coords[i])) {
                (Some(w), Ok(h)) => Some(&w * &sa.slots[i].apply(&h)),
                _ => None,
            };
        }
        let map = RingMap::new(sa.ring.clone(), sc.ring.clone(), images)?;
        let map = match witness {
            Some(w) => {
                let w = sa.ring.reduce(&w);
                let cert = find_certificate(&map, &w)?;
                map.certified(cert)?
            }
            None => map,
        };
        restrictions.push(((a, c), map));
    }
    let space = Arc::new(RingedSpace::new(poset, stalks.iter().map(|s| s.ring.clone()).collect(), restrictions)?);

    // leg witnesses in O_b, when every leg is certified
    let leg_witnesses: Vec<Option<Vec<Polynomial>>> =
        stalks.iter().map(|s| s.legs.iter().map(|l| l.certificate().map(|c| c.witness.clone())).collect()).collect();

    let mut projections = Vec::with_capacity(k);
    for i in 0..k {
        let comaps = stalks
            .iter()
            .zip(&leg_witnesses)
            .map(|(s, lw)| {
                let w = lw.as_ref().map(|ws| {
                    let leg_i = &s.legs[i];
                    ws.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .fold(leg_i.target().one(), |acc, (_, w)| &acc * &leg_i.apply(w))
                });
                certify(s.slots[i].clone(), w)
            })
            .collect::<Result<Vec<_>>>()?;
        let assignment = points.iter().map(|p| p.coords[i]).collect();
        projections.push(SchematicMorphism::new(space.clone(), maps[i].source().clone(), assignment, comaps)?);
    }
    let comaps = stalks
        .iter()
        .zip(&leg_witnesses)
        .map(|(s, lw)| {
            let w = lw.as_ref().map(|ws| {
                let b = s.structure.source();
                ws.iter().fold(b.one(), |acc, w| b.reduce(&(&acc * w)))
            });
            certify(s.structure.clone(), w)
        })
        .collect::<Result<Vec<_>>>()?;
    let structure =
        SchematicMorphism::new(space.clone(), base.clone(), points.iter().map(|p| p.base).collect(), comaps)?;

    let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(ProductSpace { space, points, projections, structure, leg_witnesses, index })
}

/// `X ×_B Y` on triples `(x, b, y)`.
pub fn fibered_product(f: &SchematicMorphism, g: &SchematicMorphism) -> Result<ProductSpace> {
    multi_product(&[f, g])
}

/// `f × g: X ×_B Y → X' ×_B Y'` over maps `X → X'`, `Y → Y'` compatible with the structure maps.
pub fn product_of_morphisms(
    source: &ProductSpace,
    target: &ProductSpace,
    parts: &[&SchematicMorphism],
) -> Result<SchematicMorphism> {
    let k = parts.len();
    let mut assignment = Vec::with_capacity(source.len());
    let mut comaps = Vec::with_capacity(source.len());
    for (e, p) in source.points.iter().enumerate() {
        let q = ProductPoint { base: p.base, coords: (0..k).map(|i| parts[i].apply(p.coords[i])).collect() };
        let t = target.index_of(&q).ok_or_else(|| {
            WorkbenchError::Construction(format!(
                "image of {} is not a point of the target product",
                source.space.id(e)
            ))
        })?;
        let src_ring = source.space.stalk(e);
        let tgt_ring = target.space.stalk(t);
        let mut images = Vec::with_capacity(tgt_ring.nvars());
        for i in 0..k {
            let slot = source.projections[i].comap(e);
            for img in parts[i].comap(p.coords[i]).images() {
                images.push(slot.apply(img));
            }
        }
        assignment.push(t);
        comaps.push(RingMap::new(tgt_ring.clone(), src_ring.clone(), images)?);
    }
    SchematicMorphism::new(source.space.clone(), target.space.clone(), assignment, comaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::builders::*;

    #[test]
    fn points_over_a_point() {
        let x = Arc::new(build_point(PresentedRing::polynomial_ring(&["x"])));
        let y = Arc::new(build_point(PresentedRing::polynomial_ring(&["y"])));
        let p = fibered_product(&to_base_point(&x), &to_base_point(&y)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.space.stalk(0).to_string(), "Q[x,y]");
    }

    #[test]
    fn p1_squared_has_nine_points() {
        let x = Arc::new(build_p1_model());
        let f = to_base_point(&x);
        let p = fibered_product(&f, &f).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p.space.id(0), "(p0,*,p0)");
        assert!(crate::spaces::validate_space(&p.space).pseudoschematic);
    }

    #[test]
    fn chart_overlap_has_five_points() {
        let x = Arc::new(build_p1_model());
        let u0 = SchematicMorphism::open_inclusion(&x, 0).unwrap();
        let u1 = SchematicMorphism::open_inclusion(&x, 1).unwrap();
        let p = fibered_product(&u0, &u1).unwrap();
        let ids: Vec<&str> = (0..p.len()).map(|i| p.space.id(i)).collect();
        assert_eq!(ids, vec!["(p0,p0,p01)", "(p01,p0,p01)", "(p01,p1,p1)", "(p01,p1,p01)", "(p01,p01,p01)"]);
        assert!(p.projections.iter().all(|m| m.is_flat_certified()));
        assert!(p.space.poset().minimum(&(0..5).collect::<Vec<_>>()).is_none());
    }

    #[test]
    fn mismatched_targets_are_refused() {
        let x = Arc::new(build_p1_model());
        let y = Arc::new(build_two_chart_line(true));
        let f = SchematicMorphism::identity(x);
        let g = SchematicMorphism::identity(y);
        assert!(matches!(fibered_product(&f, &g), Err(WorkbenchError::MismatchedTargets)));
    }
}
