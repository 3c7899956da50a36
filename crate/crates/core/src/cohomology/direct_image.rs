use std::collections::HashMap;

use num::Zero;
use rayon::prelude::*;

use super::complex::{diagram_complex, ChainComplex};
use super::diagram::FiniteDiagram;
use super::matrix::Matrix;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Q;
use crate::poset::MonotoneMap;

/// A basis of `H^i` as cocycle representatives, together with a basis of the coboundaries.
struct CohomologyBasis {
    boundaries: Vec<Vec<Q>>,
    reps: Vec<Vec<Q>>,
}

impl CohomologyBasis {
    fn new(c: &ChainComplex, i: usize) -> Self {
        if i >= c.len() {
            return CohomologyBasis { boundaries: Vec::new(), reps: Vec::new() };
        }
        let dim = c.dims()[i];
        let cocycles = match c.differential(i) {
            Some(d) => d.kernel(),
            None => (0..dim)
                .map(|j| {
                    let mut v = vec![Q::zero(); dim];
                    v[j] = num::One::one();
                    v
                })
                .collect(),
        };
        let mut boundaries: Vec<Vec<Q>> = Vec::new();
        if i > 0 {
            let d = c.differential(i - 1).unwrap();
            let mut m = d.clone();
            let pivots = m.rref();
            boundaries = pivots.iter().map(|&p| d.column(p)).collect();
        }
        let mut span = boundaries.clone();
        let mut reps = Vec::new();
        for z in cocycles {
            let mut trial = span.clone();
            trial.push(z.clone());
            if Matrix::from_columns(dim, &trial).rank() == trial.len() {
                span = trial;
                reps.push(z);
            }
        }
        CohomologyBasis { boundaries, reps }
    }

    /// Coordinates of a cocycle in the representative basis.
    fn coords(&self, v: &[Q]) -> Vec<Q> {
        let mut cols = self.boundaries.clone();
        cols.extend(self.reps.iter().cloned());
        let x = Matrix::from_columns(v.len(), &cols).solve(v).expect("cocycle outside the cocycle space");
        x[self.boundaries.len()..].to_vec()
    }
}

struct Fibre {
    subset: Vec<usize>,
    complex: ChainComplex,
    bases: Vec<CohomologyBasis>,
    /// Position of each `(global chain, basis index)` label per degree.
    positions: Vec<HashMap<(Vec<usize>, usize), usize>>,
}

fn fibre(f: &MonotoneMap, d: &FiniteDiagram, y: usize, max_i: usize) -> Result<Fibre> {
    let subset = f.preimage_of_up_set(y);
    let sub = d.restrict(&subset);
    let complex = diagram_complex(&sub)?;
    let bases = (0..=max_i).map(|i| CohomologyBasis::new(&complex, i)).collect();
    let positions = (0..complex.len())
        .map(|k| {
            complex
                .labels(k)
                .iter()
                .enumerate()
                .map(|(pos, (chain, b))| ((chain.iter().map(|&c| subset[c]).collect(), *b), pos))
                .collect()
        })
        .collect();
    Ok(Fibre { subset, complex, bases, positions })
}

/// `R^i f_* D` for `i = 0..=max_i`: stalk at `y` is `H^i(f^{-1}(U_y), D)`, maps induced by
/// projecting cochains onto the smaller fibre.
pub fn higher_direct_image(f: &MonotoneMap, d: &FiniteDiagram, max_i: usize) -> Result<Vec<FiniteDiagram>> {
    if &f.source != d.poset() {
        return Err(WorkbenchError::DiagramInvalid("diagram is not over the source of the map".into()));
    }
    let target = &f.target;
    let fibres: Vec<Fibre> = (0..target.len()).into_par_iter().map(|y| fibre(f, d, y, max_i)).collect::<Result<_>>()?;
    let covers = target.cover_relations();
    (0..=max_i)
        .map(|i| {
            let dims: Vec<usize> = fibres.iter().map(|fb| fb.bases[i].reps.len()).collect();
            let maps = covers
                .iter()
                .map(|&(y, y2)| {
                    let (big, small) = (&fibres[y], &fibres[y2]);
                    let mut m = Matrix::zeros(dims[y2], dims[y]);
                    if i < small.complex.len() {
                        let small_dim = small.complex.dims()[i];
                        for (j, z) in big.bases[i].reps.iter().enumerate() {
                            let mut v = vec![Q::zero(); small_dim];
                            for (pos, (chain, b)) in big.complex.labels(i).iter().enumerate() {
                                let global: Vec<usize> = chain.iter().map(|&c| big.subset[c]).collect();
                                if let Some(&p) = small.positions[i].get(&(global, *b)) {
                                    v[p] = z[pos].clone();
                                }
                            }
                            for (r, c) in small.bases[i].coords(&v).into_iter().enumerate() {
                                m.set(r, j, c);
                            }
                        }
                    }
                    ((y, y2), m)
                })
                .collect();
            FiniteDiagram::new(target.clone(), dims, maps)
        })
        .collect()
}
