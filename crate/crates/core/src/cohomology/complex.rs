use num::{One, Zero};

use super::diagram::FiniteDiagram;
use super::matrix::Matrix;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Q;

/// Cochain complex with basis labels `(chain, basis index)` in each degree.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    labels: Vec<Vec<(Vec<usize>, usize)>>,
    differentials: Vec<Matrix>,
}

impl ChainComplex {
    /// Builds a complex from term dimensions and `d^k: C^k → C^{k+1}`; refuses `d∘d ≠ 0`.
    pub fn from_differentials(dims: Vec<usize>, differentials: Vec<Matrix>) -> Result<Self> {
        let labels = dims.iter().map(|&d| (0..d).map(|i| (Vec::new(), i)).collect()).collect();
        ChainComplex::checked(labels, differentials)
    }

    fn checked(labels: Vec<Vec<(Vec<usize>, usize)>>, differentials: Vec<Matrix>) -> Result<Self> {
        if differentials.len() + 1 != labels.len().max(1) {
            return Err(WorkbenchError::CorruptComplex(format!(
                "{} terms but {} differentials",
                labels.len(),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != labels[k].len() || d.rows() != labels[k + 1].len() {
                return Err(WorkbenchError::CorruptComplex(format!("d^{k} has the wrong shape")));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k].mul(&differentials[k - 1]).is_zero() {
                return Err(WorkbenchError::CorruptComplex(format!("d^{} ∘ d^{} ≠ 0", k, k - 1)));
            }
        }
        Ok(ChainComplex { labels, differentials })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn labels(&self, k: usize) -> &[(Vec<usize>, usize)] {
        &self.labels[k]
    }

    pub fn differential(&self, k: usize) -> Option<&Matrix> {
        self.differentials.get(k)
    }
}

/// The complex over strictly increasing chains: `C^k = ⊕_{x_0<…<x_k} V_{x_k}` with
/// `(dφ)(x_0<…<x_{k+1}) = Σ_{i≤k} (−1)^i φ(drop x_i) + (−1)^{k+1} ρ(φ(x_0<…<x_k))`.
pub fn diagram_complex(d: &FiniteDiagram) -> Result<ChainComplex> {
    let poset = d.poset();
    let top = if poset.is_empty() { 0 } else { poset.height() };
    let chains: Vec<Vec<Vec<usize>>> = (0..=top).map(|k| poset.chains(k)).collect();
    let mut labels = Vec::with_capacity(chains.len());
    let mut offsets = Vec::with_capacity(chains.len());
    for level in &chains {
        let mut lab = Vec::new();
        let mut off = std::collections::HashMap::new();
        for c in level {
            off.insert(c.clone(), lab.len());
            for i in 0..d.dim(*c.last().unwrap()) {
                lab.push((c.clone(), i));
            }
        }
        labels.push(lab);
        offsets.push(off);
    }
    let mut differentials = Vec::new();
    for k in 0..top {
        let mut m = Matrix::zeros(labels[k + 1].len(), labels[k].len());
        for c in &chains[k + 1] {
            let row = offsets[k + 1][c];
            let last = c[k + 1];
            let dim = d.dim(last);
            for i in 0..=k {
                let mut face = c.clone();
                face.remove(i);
                let col = offsets[k][&face];
                let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
                for r in 0..dim {
                    m.add_at(row + r, col + r, &sign);
                }
            }
            let face = c[..=k].to_vec();
            let col = offsets[k][&face];
            let rho = d.map_between(c[k], last).unwrap();
            let sign = if (k + 1) % 2 == 0 { Q::one() } else { -Q::one() };
            for r in 0..rho.rows() {
                for s in 0..rho.cols() {
                    let v = rho.get(r, s);
                    if !v.is_zero() {
                        m.add_at(row + r, col + s, &(&sign * v));
                    }
                }
            }
        }
        differentials.push(m);
    }
    if labels.is_empty() {
        labels.push(Vec::new());
    }
    ChainComplex::checked(labels, differentials)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    /// `dim H^i` for `i = 0..len`.
    pub dims: Vec<usize>,
    /// `dim C^k`.
    pub complex_dims: Vec<usize>,
}

impl CohomologyTable {
    pub fn h(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.dims)
    }

    pub fn complex_euler_characteristic(&self) -> i64 {
        alternating(&self.complex_dims)
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// `dim H^i = dim ker d^i − rank d^{i−1}`.
pub fn cohomology(c: &ChainComplex) -> CohomologyTable {
    let dims = c.dims();
    let ranks: Vec<usize> = c.differentials.iter().map(|d| d.rank()).collect();
    let h = (0..dims.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            dims[i] - out - inc
        })
        .collect();
    CohomologyTable { dims: h, complex_dims: dims }
}

/// Shorthand for `cohomology(diagram_complex(d))`.
pub fn diagram_cohomology(d: &FiniteDiagram) -> Result<CohomologyTable> {
    Ok(cohomology(&diagram_complex(d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    fn p1_top_only() -> FiniteDiagram {
        let p = Poset::from_named_relations(&["p0", "p1", "p01"], &[("p0", "p01"), ("p1", "p01")]).unwrap();
        let maps = vec![((0, 2), Matrix::zeros(1, 0)), ((1, 2), Matrix::zeros(1, 0))];
        FiniteDiagram::new(p, vec![0, 0, 1], maps).unwrap()
    }

    #[test]
    fn point_of_dimension_three() {
        let d = FiniteDiagram::constant(Poset::antichain(vec!["*".into()]).unwrap(), 3);
        let c = diagram_complex(&d).unwrap();
        assert_eq!(c.dims(), vec![3]);
        assert_eq!(cohomology(&c).dims, vec![3]);
    }

    #[test]
    fn pattern_at_the_top_of_p1() {
        let c = diagram_complex(&p1_top_only()).unwrap();
        assert_eq!(c.dims(), vec![1, 2]);
        let h = cohomology(&c);
        assert_eq!(h.dims, vec![0, 1]);
        assert_eq!(h.euler_characteristic(), h.complex_euler_characteristic());
    }

    #[test]
    fn two_chain_identity() {
        let d = FiniteDiagram::constant(Poset::from_named_relations(&["a", "b"], &[("a", "b")]).unwrap(), 1);
        let c = diagram_complex(&d).unwrap();
        assert_eq!(c.dims(), vec![2, 1]);
        assert_eq!(cohomology(&c).dims, vec![1, 0]);
    }

    #[test]
    fn corrupt_complex_is_refused() {
        let d0 = Matrix::from_int_rows(&[vec![1]]);
        let d1 = Matrix::from_int_rows(&[vec![1]]);
        assert!(matches!(
            ChainComplex::from_differentials(vec![1, 1, 1], vec![d0, d1]),
            Err(WorkbenchError::CorruptComplex(_))
        ));
    }
}
