use std::collections::BTreeMap;

use super::matrix::Matrix;
use crate::error::{Result, WorkbenchError};
use crate::poset::Poset;

/// Finite-dimensional vector spaces over a poset with maps along covers (`dims(y) × dims(x)`).
#[derive(Clone, Debug)]
pub struct FiniteDiagram {
    poset: Poset,
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), Matrix>,
    composites: Vec<Vec<Option<Matrix>>>,
}

impl FiniteDiagram {
    /// Checks shapes, that every cover carries a map, and that all chain composites agree.
    pub fn new(poset: Poset, dims: Vec<usize>, maps: Vec<((usize, usize), Matrix)>) -> Result<Self> {
        let n = poset.len();
        if dims.len() != n {
            return Err(WorkbenchError::DiagramInvalid(format!("{} dims for {} elements", dims.len(), n)));
        }
        let mut table = BTreeMap::new();
        for ((x, y), m) in maps {
            if x >= n || y >= n || !poset.covers(x, y) {
                return Err(WorkbenchError::DiagramInvalid(format!("map on a non-cover pair ({x}, {y})")));
            }
            if m.rows() != dims[y] || m.cols() != dims[x] {
                return Err(WorkbenchError::DiagramInvalid(format!(
                    "map {} → {} is {}×{}, expected {}×{}",
                    poset.id(x),
                    poset.id(y),
                    m.rows(),
                    m.cols(),
                    dims[y],
                    dims[x]
                )));
            }
            if table.insert((x, y), m).is_some() {
                return Err(WorkbenchError::DiagramInvalid(format!("duplicate map {} → {}", poset.id(x), poset.id(y))));
            }
        }
        if let Some((x, y)) = poset.cover_relations().into_iter().find(|e| !table.contains_key(e)) {
            return Err(WorkbenchError::DiagramInvalid(format!("missing map {} → {}", poset.id(x), poset.id(y))));
        }

        // composites top-down: M(x, z) = M(y, z) · M(x, y) for the first cover y of x below z
        let mut composites: Vec<Vec<Option<Matrix>>> = vec![vec![None; n]; n];
        let order = poset.linear_extension();
        for &x in order.iter().rev() {
            composites[x][x] = Some(Matrix::identity(dims[x]));
            for z in 0..n {
                if !poset.lt(x, z) {
                    continue;
                }
                let mut found: Option<Matrix> = None;
                for y in poset.upper_covers(x) {
                    if !poset.leq(y, z) {
                        continue;
                    }
                    let m = composites[y][z].as_ref().unwrap().mul(&table[&(x, y)]);
                    match &found {
                        None => found = Some(m),
                        Some(prev) if *prev != m => {
                            return Err(WorkbenchError::DiagramInvalid(format!(
                                "paths from {} to {} disagree",
                                poset.id(x),
                                poset.id(z)
                            )))
                        }
                        _ => {}
                    }
                }
                composites[x][z] = found;
            }
        }
        Ok(FiniteDiagram { poset, dims, maps: table, composites })
    }

    /// The constant diagram with identity maps.
    pub fn constant(poset: Poset, dim: usize) -> Self {
        let maps = poset.cover_relations().into_iter().map(|e| (e, Matrix::identity(dim))).collect();
        let n = poset.len();
        FiniteDiagram::new(poset, vec![dim; n], maps).unwrap()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn cover_map(&self, x: usize, y: usize) -> Option<&Matrix> {
        self.maps.get(&(x, y))
    }

    pub fn cover_maps(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix)> {
        self.maps.iter()
    }

    /// `V_x → V_z` for `x ≤ z`.
    pub fn map_between(&self, x: usize, z: usize) -> Option<&Matrix> {
        self.composites[x][z].as_ref()
    }

    /// Restriction to a subset with the induced order.
    pub fn restrict(&self, subset: &[usize]) -> FiniteDiagram {
        let poset = self.poset.restrict(subset);
        let dims = subset.iter().map(|&x| self.dims[x]).collect();
        let maps = poset
            .cover_relations()
            .into_iter()
            .map(|(a, b)| ((a, b), self.map_between(subset[a], subset[b]).unwrap().clone()))
            .collect();
        FiniteDiagram::new(poset, dims, maps).expect("restriction of a valid diagram")
    }

    /// Elementwise direct sum over the same poset.
    pub fn direct_sum(&self, other: &FiniteDiagram) -> Result<FiniteDiagram> {
        if self.poset != other.poset {
            return Err(WorkbenchError::DiagramInvalid("direct sum over different posets".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .map(|(&(x, y), a)| {
                let b = &other.maps[&(x, y)];
                let mut m = Matrix::zeros(dims[y], dims[x]);
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                    }
                }
                ((x, y), m)
            })
            .collect();
        FiniteDiagram::new(self.poset.clone(), dims, maps)
    }
}
