use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::poset::Poset;
use crate::rings::{compose_chain, PresentedRing, RingMap};

/// A finite poset with a presented ring at each point and restriction maps along covers.
#[derive(Clone)]
pub struct RingedSpace {
    poset: Poset,
    stalks: Vec<Arc<PresentedRing>>,
    restrictions: BTreeMap<(usize, usize), RingMap>,
    /// Uncertified composites `O_x → O_z` along the canonical cover chain, `None` off the order.
    composites: Vec<Vec<Option<RingMap>>>,
    name: Option<String>,
}

impl RingedSpace {
    /// Checks that restrictions sit exactly on covers and that all cover chains agree.
    pub fn new(
        poset: Poset,
        stalks: Vec<Arc<PresentedRing>>,
        restrictions: Vec<((usize, usize), RingMap)>,
    ) -> Result<Self> {
        let n = poset.len();
        if stalks.len() != n {
            return Err(WorkbenchError::Construction(format!("{} stalks for {} elements", stalks.len(), n)));
        }
        let mut table = BTreeMap::new();
        for ((x, y), map) in restrictions {
            if x >= n || y >= n || !poset.covers(x, y) {
                let name = |i: usize| if i < n { poset.id(i).to_string() } else { i.to_string() };
                return Err(WorkbenchError::Construction(format!(
                    "restriction {} → {} is not along a covering relation",
                    name(x),
                    name(y)
                )));
            }
            if !map.source().same_presentation(&stalks[x]) || !map.target().same_presentation(&stalks[y]) {
                return Err(WorkbenchError::Construction(format!(
                    "restriction {} → {} does not run between the stalks",
                    poset.id(x),
                    poset.id(y)
                )));
            }
            if table.insert((x, y), map).is_some() {
                return Err(WorkbenchError::Construction(format!(
                    "duplicate restriction {} → {}",
                    poset.id(x),
                    poset.id(y)
                )));
            }
        }
        for (x, y) in poset.cover_relations() {
            if !table.contains_key(&(x, y)) {
                return Err(WorkbenchError::Construction(format!(
                    "missing restriction {} → {}",
                    poset.id(x),
                    poset.id(y)
                )));
            }
        }

        let mut space = RingedSpace { poset, stalks, restrictions: table, composites: Vec::new(), name: None };
        space.composites = space.build_composites()?;
        Ok(space)
    }

    /// Fills the composite table top-down and checks every first-step square.
    fn build_composites(&self) -> Result<Vec<Vec<Option<RingMap>>>> {
        let n = self.poset.len();
        let mut comp: Vec<Vec<Option<RingMap>>> = vec![vec![None; n]; n];
        let order = self.poset.linear_extension();
        for &x in order.iter().rev() {
            comp[x][x] = Some(RingMap::identity(self.stalks[x].clone()));
            for z in 0..n {
                if !self.poset.lt(x, z) {
                    continue;
                }
                let mut canonical: Option<RingMap> = None;
                for y in self.poset.upper_covers(x) {
                    if !self.poset.leq(y, z) {
                        continue;
                    }
                    let rest = comp[y][z].as_ref().expect("filled for higher elements");
                    let via = self.restrictions[&(x, y)].then(rest)?;
                    match &canonical {
                        None => canonical = Some(via),
                        Some(c) => {
                            if !c.same_map(&via) {
                                let first =
                                    self.poset.upper_covers(x).into_iter().find(|&c| self.poset.leq(c, z)).unwrap();
                                return Err(WorkbenchError::Validation(vec![format!(
                                    "square {} → {{{}, {}}} → {} does not commute",
                                    self.poset.id(x),
                                    self.poset.id(first),
                                    self.poset.id(y),
                                    self.poset.id(z)
                                )]));
                            }
                        }
                    }
                }
                comp[x][z] = canonical;
            }
        }
        Ok(comp)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn id(&self, x: usize) -> &str {
        self.poset.id(x)
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.poset.index_of(id)
    }

    pub fn stalk(&self, x: usize) -> &Arc<PresentedRing> {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[Arc<PresentedRing>] {
        &self.stalks
    }

    /// The restriction along a cover.
    pub fn restriction(&self, x: usize, y: usize) -> Option<&RingMap> {
        self.restrictions.get(&(x, y))
    }

    pub fn restrictions(&self) -> impl Iterator<Item = (&(usize, usize), &RingMap)> {
        self.restrictions.iter()
    }

    /// `O_x → O_z` for `x ≤ z`, without certificate.
    pub fn map_between(&self, x: usize, z: usize) -> Option<&RingMap> {
        self.composites[x][z].as_ref()
    }

    /// Restriction maps along the canonical cover chain from `x` to `z`.
    pub fn restriction_chain(&self, x: usize, z: usize) -> Option<Vec<&RingMap>> {
        let chain = self.poset.cover_chain(x, z)?;
        Some(chain.windows(2).map(|w| &self.restrictions[&(w[0], w[1])]).collect())
    }

    /// `O_x → O_z` with a composed certificate when every link on the canonical chain is certified.
    pub fn certified_map(&self, x: usize, z: usize) -> Result<RingMap> {
        let chain = self
            .restriction_chain(x, z)
            .ok_or_else(|| WorkbenchError::Internal(format!("{} is not below {}", self.id(x), self.id(z))))?;
        if chain.is_empty() {
            return Ok(RingMap::identity(self.stalks[x].clone()));
        }
        compose_chain(&chain)
    }

    /// The composed witness `h ∈ O_x` with `O_z ≅ (O_x)_h`, along the canonical chain.
    pub fn witness(&self, x: usize, z: usize) -> Result<Polynomial> {
        let chain = self
            .restriction_chain(x, z)
            .ok_or_else(|| WorkbenchError::Internal(format!("{} is not below {}", self.id(x), self.id(z))))?;
        self.chain_witness(x, &chain)
    }

    pub(crate) fn chain_witness(&self, x: usize, chain: &[&RingMap]) -> Result<Polynomial> {
        if chain.is_empty() {
            return Ok(self.stalks[x].one());
        }
        if let Some(bad) = chain.iter().find(|m| !m.is_certified()) {
            return Err(WorkbenchError::CertificateRequired(format!("{} → {}", bad.source(), bad.target())));
        }
        Ok(crate::rings::compose_certificates(chain)?.witness)
    }

    /// The subspace on `subset`, with restrictions the composites along covers of the induced order.
    pub fn subspace(&self, subset: &[usize]) -> Result<RingedSpace> {
        let poset = self.poset.restrict(subset);
        let stalks = subset.iter().map(|&x| self.stalks[x].clone()).collect();
        let mut restrictions = Vec::new();
        for (a, b) in poset.cover_relations() {
            let (x, y) = (subset[a], subset[b]);
            let map =
                if self.poset.covers(x, y) { self.restrictions[&(x, y)].clone() } else { self.certified_map(x, y)? };
            restrictions.push(((a, b), map));
        }
        RingedSpace::new(poset, stalks, restrictions)
    }

    /// The open subspace `U_x`, with elements in index order.
    pub fn up_subspace(&self, x: usize) -> Result<RingedSpace> {
        self.subspace(&self.poset.up_set(x))
    }
}

impl fmt::Debug for RingedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingedSpace {{")?;
        for x in 0..self.len() {
            writeln!(f, "  {}: {}", self.id(x), self.stalks[x])?;
        }
        for ((x, y), m) in &self.restrictions {
            writeln!(f, "  {} → {}: {}", self.id(*x), self.id(*y), m.describe())?;
        }
        write!(f, "}}")
    }
}
