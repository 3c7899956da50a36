use std::sync::Arc;

use super::ringed::RingedSpace;
use crate::error::{Result, WorkbenchError};
use crate::poset::MonotoneMap;
use crate::rings::{compose_chain, RingMap};

/// A morphism of ringed posets: a monotone map plus comaps `O_{Y,f(x)} → O_{X,x}`.
#[derive(Clone, Debug)]
pub struct SchematicMorphism {
    source: Arc<RingedSpace>,
    target: Arc<RingedSpace>,
    map: MonotoneMap,
    comaps: Vec<RingMap>,
}

impl SchematicMorphism {
    /// Checks monotonicity, comap endpoints and every square over a cover of the source.
    pub fn new(
        source: Arc<RingedSpace>,
        target: Arc<RingedSpace>,
        assignment: Vec<usize>,
        comaps: Vec<RingMap>,
    ) -> Result<Self> {
        let map = MonotoneMap::new(source.poset().clone(), target.poset().clone(), assignment)?;
        if comaps.len() != source.len() {
            return Err(WorkbenchError::Construction(format!(
                "{} comaps for {} source elements",
                comaps.len(),
                source.len()
            )));
        }
        for (x, c) in comaps.iter().enumerate() {
            let fx = map.apply(x);
            if !c.source().same_presentation(target.stalk(fx)) || !c.target().same_presentation(source.stalk(x)) {
                return Err(WorkbenchError::Construction(format!(
                    "comap at {} does not run from O_{} to O_{}",
                    source.id(x),
                    target.id(fx),
                    source.id(x)
                )));
            }
        }
        let morphism = SchematicMorphism { source, target, map, comaps };
        morphism.check_squares()?;
        Ok(morphism)
    }

    fn check_squares(&self) -> Result<()> {
        let mut failures = Vec::new();
        for (x, x2) in self.source.poset().cover_relations() {
            let (y, y2) = (self.map.apply(x), self.map.apply(x2));
            let down = self.comaps[x].then(self.source.restriction(x, x2).unwrap())?;
            let across = self.target.map_between(y, y2).unwrap().then(&self.comaps[x2])?;
            if !down.same_map(&across) {
                failures.push(format!(
                    "square over {} → {} (target {} → {}) does not commute",
                    self.source.id(x),
                    self.source.id(x2),
                    self.target.id(y),
                    self.target.id(y2)
                ));
            }
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(WorkbenchError::Validation(failures))
        }
    }

    pub fn identity(space: Arc<RingedSpace>) -> Self {
        let comaps = space.stalks().iter().map(|r| RingMap::identity(r.clone())).collect();
        SchematicMorphism { map: MonotoneMap::identity(space.poset()), source: space.clone(), target: space, comaps }
    }

    /// The inclusion of the open subspace `U_x` (elements in index order).
    pub fn open_inclusion(space: &Arc<RingedSpace>, x: usize) -> Result<Self> {
        let up = space.poset().up_set(x);
        let sub = Arc::new(space.up_subspace(x)?);
        let comaps = up.iter().map(|&y| RingMap::identity(space.stalk(y).clone())).collect();
        SchematicMorphism::new(sub, space.clone(), up, comaps)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SchematicMorphism) -> Result<Self> {
        if !Arc::ptr_eq(&self.target, &g.source) && self.target.poset() != g.source.poset() {
            return Err(WorkbenchError::Construction("morphisms are not composable".into()));
        }
        let assignment: Vec<usize> = (0..self.source.len()).map(|x| g.map.apply(self.map.apply(x))).collect();
        let comaps = (0..self.source.len())
            .map(|x| compose_chain(&[&g.comaps[self.map.apply(x)], &self.comaps[x]]))
            .collect::<Result<Vec<_>>>()?;
        SchematicMorphism::new(self.source.clone(), g.target.clone(), assignment, comaps)
    }

    pub fn source(&self) -> &Arc<RingedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingedSpace> {
        &self.target
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    pub fn comap(&self, x: usize) -> &RingMap {
        &self.comaps[x]
    }

    pub fn comaps(&self) -> &[RingMap] {
        &self.comaps
    }

    /// Whether every comap carries a localization certificate.
    pub fn is_flat_certified(&self) -> bool {
        self.comaps.iter().all(|c| c.is_certified())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::builders::*;

    #[test]
    fn identity_and_inclusion_compose() {
        let x = Arc::new(build_p1_model());
        let incl = SchematicMorphism::open_inclusion(&x, 1).unwrap();
        assert_eq!(incl.source().len(), 2);
        let id = SchematicMorphism::identity(x.clone());
        let c = incl.then(&id).unwrap();
        assert_eq!(c.map().assignment, vec![1, 2]);
        assert!(c.is_flat_certified());
        let pt = incl.then(&to_base_point(&x)).unwrap();
        assert_eq!(pt.target().len(), 1);
    }

    #[test]
    fn non_commuting_square_is_named() {
        let x = Arc::new(build_p1_model());
        let inc = SchematicMorphism::open_inclusion(&x, 0).unwrap();
        let mut comaps = inc.comaps().to_vec();
        // send u to 2u at p0: the square over p0 → p01 breaks
        let r = x.stalk(0).clone();
        comaps[0] = RingMap::new(r.clone(), r.clone(), vec![&r.var(0) + &r.var(0)]).unwrap();
        let err = SchematicMorphism::new(inc.source().clone(), x.clone(), vec![0, 2], comaps).unwrap_err();
        match err {
            WorkbenchError::Validation(v) => assert!(v[0].contains("p0 → p01")),
            e => panic!("unexpected {e}"),
        }
    }
}
