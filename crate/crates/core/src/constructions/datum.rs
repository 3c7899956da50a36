use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Result, WorkbenchError};
use crate::poset::Poset;
use crate::rings::{compose_chain, RingMap};
use crate::spaces::{RingedSpace, SchematicMorphism};

/// A contravariant diagram of spaces over a finite index poset: for `p ≤ q` a transition
/// `X_pq: 𝒳(q) → 𝒳(p)`.
#[derive(Clone, Debug)]
pub struct Datum {
    index: Poset,
    spaces: Vec<Arc<RingedSpace>>,
    transitions: BTreeMap<(usize, usize), SchematicMorphism>,
}

impl Datum {
    /// Takes transitions for every strict pair `p < q` and checks `X_pq ∘ X_qr = X_pr`.
    pub fn new(
        index: Poset,
        spaces: Vec<Arc<RingedSpace>>,
        transitions: Vec<((usize, usize), SchematicMorphism)>,
    ) -> Result<Self> {
        if spaces.len() != index.len() {
            return Err(WorkbenchError::Construction(format!("{} spaces for {} indices", spaces.len(), index.len())));
        }
        let mut table = BTreeMap::new();
        for ((p, q), m) in transitions {
            if !index.lt(p, q) {
                return Err(WorkbenchError::Construction(format!(
                    "transition {} → {} is not over a strict relation",
                    index.id(p),
                    index.id(q)
                )));
            }
            if m.source().poset() != spaces[q].poset() || m.target().poset() != spaces[p].poset() {
                return Err(WorkbenchError::Construction(format!(
                    "transition for {} ≤ {} has the wrong endpoints",
                    index.id(p),
                    index.id(q)
                )));
            }
            table.insert((p, q), m);
        }
        let n = index.len();
        let mut failures = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if index.lt(p, q) && !table.contains_key(&(p, q)) {
                    failures.push(format!("missing transition for {} ≤ {}", index.id(p), index.id(q)));
                }
            }
        }
        if !failures.is_empty() {
            return Err(WorkbenchError::Validation(failures));
        }
        for ((p, q), pq) in &table {
            for ((q2, r), qr) in &table {
                if q2 != q {
                    continue;
                }
                let pr = &table[&(*p, *r)];
                let composite = qr.then(pq)?;
                let agree = (0..composite.source().len())
                    .all(|x| composite.apply(x) == pr.apply(x) && composite.comap(x).same_map(pr.comap(x)));
                if !agree {
                    failures.push(format!(
                        "transitions {}→{}→{} do not compose to {}→{}",
                        index.id(*p),
                        index.id(*q),
                        index.id(*r),
                        index.id(*p),
                        index.id(*r)
                    ));
                }
            }
        }
        if !failures.is_empty() {
            return Err(WorkbenchError::Validation(failures));
        }
        Ok(Datum { index, spaces, transitions: table })
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn space(&self, p: usize) -> &Arc<RingedSpace> {
        &self.spaces[p]
    }

    pub fn spaces(&self) -> &[Arc<RingedSpace>] {
        &self.spaces
    }

    /// `X_pq` for `p < q`.
    pub fn transition(&self, p: usize, q: usize) -> Option<&SchematicMorphism> {
        self.transitions.get(&(p, q))
    }

    fn apply(&self, p: usize, q: usize, y: usize) -> usize {
        if p == q {
            y
        } else {
            self.transitions[&(p, q)].apply(y)
        }
    }
}

/// The cylinder space of a datum with the elements `(p, x)` it was built from.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub space: Arc<RingedSpace>,
    pub parts: Vec<(usize, usize)>,
}

/// `Cyl(𝒳)`: elements `x@p`, with `(p, x) ≤ (q, y)` iff `p ≤ q` and `x ≤ X_pq(y)` in `𝒳(p)`.
pub fn cylinder(datum: &Datum) -> Result<Cylinder> {
    let index = &datum.index;
    let parts: Vec<(usize, usize)> =
        (0..index.len()).flat_map(|p| (0..datum.spaces[p].len()).map(move |x| (p, x))).collect();
    let ids: Vec<String> = parts.iter().map(|&(p, x)| format!("{}@{}", datum.spaces[p].id(x), index.id(p))).collect();
    let leq: Vec<Vec<bool>> = parts
        .iter()
        .map(|&(p, x)| {
            parts
                .iter()
                .map(|&(q, y)| index.leq(p, q) && datum.spaces[p].poset().leq(x, datum.apply(p, q, y)))
                .collect()
        })
        .collect();
    let poset =
        Poset::from_matrix(ids, leq).map_err(|e| WorkbenchError::Construction(format!("cylinder order: {e}")))?;
    let stalks = parts.iter().map(|&(p, x)| datum.spaces[p].stalk(x).clone()).collect();
    let mut restrictions = Vec::new();
    for (a, b) in poset.cover_relations() {
        let ((p, x), (q, y)) = (parts[a], parts[b]);
        let sp = &datum.spaces[p];
        let mid = datum.apply(p, q, y);
        let mut chain: Vec<&RingMap> = sp.restriction_chain(x, mid).unwrap();
        if p != q {
            chain.push(datum.transitions[&(p, q)].comap(y));
        }
        let map = if chain.is_empty() { RingMap::identity(sp.stalk(x).clone()) } else { compose_chain(&chain)? };
        restrictions.push(((a, b), map));
    }
    let space = RingedSpace::new(poset, stalks, restrictions)?;
    Ok(Cylinder { space: Arc::new(space), parts })
}

/// Replaces each `𝒳(p)` by its minimum, giving a space on the index poset.
pub fn collapse_affine(datum: &Datum) -> Result<RingedSpace> {
    let index = &datum.index;
    let mut minima = Vec::with_capacity(index.len());
    for (p, s) in datum.spaces.iter().enumerate() {
        let all: Vec<usize> = (0..s.len()).collect();
        let m = s
            .poset()
            .minimum(&all)
            .ok_or_else(|| WorkbenchError::AffinenessUnverifiable(format!("{} has no minimum", index.id(p))))?;
        minima.push(m);
    }
    let stalks = (0..index.len()).map(|p| datum.spaces[p].stalk(minima[p]).clone()).collect();
    let mut restrictions = Vec::new();
    for (p, q) in index.cover_relations() {
        let sp = &datum.spaces[p];
        let t = &datum.transitions[&(p, q)];
        let mid = t.apply(minima[q]);
        let mut chain: Vec<&RingMap> = sp.restriction_chain(minima[p], mid).unwrap();
        chain.push(t.comap(minima[q]));
        restrictions.push(((p, q), compose_chain(&chain)?));
    }
    RingedSpace::new(index.clone(), stalks, restrictions)
}
