use rayon::prelude::*;

use crate::constructions::{fibered_product, ProductPoint, ProductSpace};
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::rings::{compose_chain, is_surjective, RingMap};
use crate::spaces::SchematicMorphism;

#[derive(Clone, Debug)]
pub struct ImmersionPoint {
    pub y: String,
    /// Minimum of `f^{-1}(U_y)`; `None` for an empty preimage.
    pub minimum: Option<String>,
    pub surjective: bool,
}

#[derive(Clone, Debug)]
pub struct ClosedImmersionReport {
    pub points: Vec<ImmersionPoint>,
    pub closed_immersion: bool,
}

impl ClosedImmersionReport {
    pub fn first_failure(&self) -> Option<&ImmersionPoint> {
        self.points.iter().find(|p| !p.surjective)
    }
}

/// Every `f^{-1}(U_y)` has a minimum `x_y` and `O_y → O_{x_y}` is surjective.
pub fn is_closed_immersion(f: &SchematicMorphism) -> Result<ClosedImmersionReport> {
    let (x, y) = (f.source(), f.target());
    let points: Vec<ImmersionPoint> = (0..y.len())
        .into_par_iter()
        .map(|b| {
            let pre = f.map().preimage_of_up_set(b);
            if pre.is_empty() {
                return Ok(ImmersionPoint { y: y.id(b).to_string(), minimum: None, surjective: true });
            }
            let m = x.poset().minimum(&pre).ok_or_else(|| {
                WorkbenchError::AffinenessUnverifiable(format!("preimage of U_{} has no minimum", y.id(b)))
            })?;
            let down = y.map_between(b, f.apply(m)).unwrap();
            let comp = compose_chain(&[down, f.comap(m)])?;
            Ok(ImmersionPoint {
                y: y.id(b).to_string(),
                minimum: Some(x.id(m).to_string()),
                surjective: is_surjective(&comp),
            })
        })
        .collect::<Result<_>>()?;
    let closed_immersion = points.iter().all(|p| p.surjective);
    Ok(ClosedImmersionReport { points, closed_immersion })
}

/// `Δ_f: X → X ×_Y X`, `x ↦ (x, f(x), x)`, with the multiplication comaps.
pub fn diagonal(f: &SchematicMorphism) -> Result<(ProductSpace, SchematicMorphism)> {
    let prod = fibered_product(f, f)?;
    let u = f.source();
    let mut assignment = Vec::with_capacity(u.len());
    let mut comaps = Vec::with_capacity(u.len());
    for x in 0..u.len() {
        let e = prod
            .index_of(&ProductPoint { base: f.apply(x), coords: vec![x, x] })
            .ok_or_else(|| WorkbenchError::Internal(format!("diagonal misses {}", u.id(x))))?;
        let ring = u.stalk(x);
        let vars: Vec<Polynomial> = (0..ring.nvars()).map(|v| ring.var(v)).collect();
        assignment.push(e);
        comaps.push(RingMap::new(prod.space.stalk(e).clone(), ring.clone(), [vars.clone(), vars].concat())?);
    }
    let d = SchematicMorphism::new(u.clone(), prod.space.clone(), assignment, comaps)?;
    Ok((prod, d))
}

#[derive(Clone, Debug)]
pub struct SeparatedReport {
    pub product_size: usize,
    pub diagonal: ClosedImmersionReport,
    pub separated: bool,
}

/// The diagonal is a closed immersion.
pub fn is_separated(f: &SchematicMorphism) -> Result<SeparatedReport> {
    let (prod, d) = diagonal(f)?;
    let diagonal = is_closed_immersion(&d)?;
    Ok(SeparatedReport { product_size: prod.len(), separated: diagonal.closed_immersion, diagonal })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::rings::PresentedRing;
    use crate::spaces::builders::*;
    use crate::spaces::RingedSpace;

    #[test]
    fn quotient_is_a_closed_immersion() {
        let a = Arc::new(PresentedRing::polynomial_ring(&["x"]));
        let x2 = a.var(0).pow(2);
        let b = Arc::new(PresentedRing::new(vec!["x".into()], vec![x2]).unwrap());
        let sa = Arc::new(build_point((*a).clone()));
        let sb = Arc::new(build_point((*b).clone()));
        let comap = RingMap::new(sa.stalk(0).clone(), sb.stalk(0).clone(), vec![sb.stalk(0).var(0)]).unwrap();
        let f = SchematicMorphism::new(sb, sa, vec![0], vec![comap]).unwrap();
        assert!(is_closed_immersion(&f).unwrap().closed_immersion);
    }

    #[test]
    fn chart_inclusion_is_not_closed() {
        let x = Arc::new(build_p1_model());
        let f = SchematicMorphism::open_inclusion(&x, 0).unwrap();
        let rep = is_closed_immersion(&f).unwrap();
        assert!(!rep.closed_immersion);
        let bad = rep.first_failure().unwrap();
        assert_eq!((bad.y.as_str(), bad.minimum.as_deref()), ("p1", Some("p01")));
    }

    #[test]
    fn missing_minimum_is_unverifiable() {
        let x = Arc::new(build_p1_model());
        let f = to_base_point(&x);
        assert!(matches!(is_closed_immersion(&f), Err(WorkbenchError::AffinenessUnverifiable(_))));
    }

    #[test]
    fn separated_examples() {
        let pt = Arc::new(build_base_point());
        assert!(is_separated(&SchematicMorphism::identity(pt)).unwrap().separated);
        let x = Arc::new(build_p1_model());
        let rep = is_separated(&to_base_point(&x)).unwrap();
        assert_eq!(rep.product_size, 9);
        assert!(rep.separated);
        let off = rep.diagonal.points.iter().find(|p| p.y == "(p0,*,p1)").unwrap();
        assert_eq!(off.minimum.as_deref(), Some("p01"));
        let two: Arc<RingedSpace> = Arc::new(build_disjoint_points(2));
        let rep = is_separated(&to_base_point(&two)).unwrap();
        assert!(rep.separated);
        assert_eq!(rep.diagonal.points.iter().filter(|p| p.minimum.is_none()).count(), 2);
    }

    #[test]
    fn doubled_origin_is_not_separated() {
        let x = Arc::new(build_doubled_origin());
        assert!(!is_separated(&to_base_point(&x)).unwrap().separated);
    }
}
