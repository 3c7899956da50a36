//! Twists `O(d)` on the finite model of `Pⁿ` through negative-support patterns.

use rayon::prelude::*;

use super::complex::{diagram_cohomology, CohomologyTable};
use super::diagram::FiniteDiagram;
use super::matrix::Matrix;
use crate::error::{Result, WorkbenchError};
use crate::poset::Poset;
use crate::spaces::builders::{pn_element_name, pn_subsets};

/// The poset of nonempty subsets of `{0..n}` by inclusion, named as in the ringed model.
pub fn pn_poset(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(WorkbenchError::Construction("projective model needs n ≥ 1".into()));
    }
    let subsets = pn_subsets(n);
    let ids = subsets.iter().map(|s| pn_element_name(n, s)).collect();
    let mut pairs = Vec::new();
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate() {
            if a != b && sa.iter().all(|i| sb.contains(i)) {
                pairs.push((a, b));
            }
        }
    }
    Poset::from_relations(ids, &pairs)
}

/// `ℚ` at every `Δ ⊇ T`, zero elsewhere, identity maps between nonzero spots.
pub fn pattern_diagram(n: usize, pattern: &[usize]) -> Result<FiniteDiagram> {
    let poset = pn_poset(n)?;
    let subsets = pn_subsets(n);
    let dims: Vec<usize> = subsets.iter().map(|s| usize::from(pattern.iter().all(|t| s.contains(t)))).collect();
    let maps = poset
        .cover_relations()
        .into_iter()
        .map(|(x, y)| {
            let m = if dims[x] == 1 { Matrix::identity(1) } else { Matrix::zeros(dims[y], dims[x]) };
            ((x, y), m)
        })
        .collect();
    FiniteDiagram::new(poset, dims, maps)
}

/// Number of `a ∈ ℤ^{n+1}` with `Σ a = d` and `a_i < 0` exactly for `i ∈ T`; `None` when infinite.
pub fn monomial_count(n: usize, d: i64, pattern: &[usize]) -> Result<Option<u128>> {
    let k = n + 1;
    let neg = pattern.len();
    if neg != 0 && neg != k {
        return Ok(None);
    }
    // T = ∅: k parts ≥ 0 summing to d; T = all: k parts ≥ 1 summing to −d
    let (total, lo) = if neg == 0 { (d, 0) } else { (-d, 1) };
    if total < 0 {
        return Ok(Some(0));
    }
    let total = total as usize;
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for part in lo..=(total - s) {
                next[s + part] = next[s + part]
                    .checked_add(w)
                    .ok_or_else(|| WorkbenchError::Divergence("monomial count overflows".into()))?;
            }
        }
        ways = next;
    }
    Ok(Some(ways[total]))
}

/// Pattern cohomology of the `Pⁿ` model, computed once per `n`.
#[derive(Clone, Debug)]
pub struct TwistEngine {
    n: usize,
    patterns: Vec<(Vec<usize>, CohomologyTable)>,
}

impl TwistEngine {
    pub fn new(n: usize) -> Result<Self> {
        pn_poset(n)?;
        let mut all: Vec<Vec<usize>> = vec![Vec::new()];
        all.extend(pn_subsets(n));
        let patterns = all
            .into_par_iter()
            .map(|t| {
                let h = diagram_cohomology(&pattern_diagram(n, &t)?)?;
                Ok((t, h))
            })
            .collect::<Result<_>>()?;
        Ok(TwistEngine { n, patterns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> &[(Vec<usize>, CohomologyTable)] {
        &self.patterns
    }

    /// `dim H^i(Pⁿ, O(d)) = Σ_T h^i(T) · #monomials(T)`.
    pub fn table(&self, d: i64) -> Result<CohomologyTable> {
        let len = self.n + 1;
        let mut dims = vec![0u128; len];
        let mut complex_dims = vec![0u128; len];
        for (t, h) in &self.patterns {
            match monomial_count(self.n, d, t)? {
                Some(c) => {
                    for i in 0..len {
                        dims[i] += c * h.h(i) as u128;
                        complex_dims[i] += c * h.complex_dims.get(i).copied().unwrap_or(0) as u128;
                    }
                }
                None if h.dims.iter().any(|&v| v != 0) => {
                    return Err(WorkbenchError::Divergence(format!(
                        "pattern {t:?} has nonzero cohomology and infinitely many monomials in degree {d}"
                    )))
                }
                None => {}
            }
        }
        let narrow = |v: Vec<u128>| -> Result<Vec<usize>> {
            v.into_iter()
                .map(|x| usize::try_from(x).map_err(|_| WorkbenchError::Divergence("dimension overflows".into())))
                .collect()
        };
        Ok(CohomologyTable { dims: narrow(dims)?, complex_dims: narrow(complex_dims)? })
    }
}

/// `H^*(Pⁿ, O(d))` on the finite model.
pub fn twist_diagram(n: usize, d: i64) -> Result<CohomologyTable> {
    TwistEngine::new(n)?.table(d)
}

/// Tables for a window of degrees, evaluated in parallel.
pub fn twist_tables(n: usize, degrees: &[i64]) -> Result<Vec<(i64, CohomologyTable)>> {
    let engine = TwistEngine::new(n)?;
    degrees.par_iter().map(|&d| engine.table(d).map(|t| (d, t))).collect()
}

fn exponent_vectors(k: usize, d: i64, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(k: usize, rest: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == k {
            if rest.abs() <= bound {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for a in -bound..=bound {
            cur.push(a);
            go(k, rest - a, bound, cur, out);
            cur.pop();
        }
    }
    go(k, d, bound, &mut cur, &mut out);
    out
}

/// The degree-`d` slice truncated to Laurent monomials with `|a_i| ≤ bound`: at `Δ` the
/// monomials whose negative exponents lie in `Δ`, with inclusion maps.
pub fn twist_slice_diagram(n: usize, d: i64, bound: i64) -> Result<FiniteDiagram> {
    let poset = pn_poset(n)?;
    let subsets = pn_subsets(n);
    let monomials = exponent_vectors(n + 1, d, bound);
    let basis: Vec<Vec<usize>> = subsets
        .iter()
        .map(|s| {
            (0..monomials.len())
                .filter(|&m| monomials[m].iter().enumerate().all(|(i, &a)| a >= 0 || s.contains(&i)))
                .collect()
        })
        .collect();
    let maps = poset
        .cover_relations()
        .into_iter()
        .map(|(x, y)| {
            let mut m = Matrix::zeros(basis[y].len(), basis[x].len());
            for (j, mono) in basis[x].iter().enumerate() {
                let i = basis[y].iter().position(|b| b == mono).unwrap();
                m.set(i, j, num::One::one());
            }
            ((x, y), m)
        })
        .collect();
    FiniteDiagram::new(poset, basis.iter().map(|b| b.len()).collect(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_and_plane() {
        assert_eq!(twist_diagram(1, 2).unwrap().dims, vec![3, 0]);
        assert_eq!(twist_diagram(1, -2).unwrap().dims, vec![0, 1]);
        assert_eq!(twist_diagram(2, -3).unwrap().dims, vec![0, 0, 1]);
    }

    #[test]
    fn mixed_patterns_are_acyclic() {
        let e = TwistEngine::new(2).unwrap();
        for (t, h) in e.patterns() {
            if !t.is_empty() && t.len() != 3 {
                assert!(h.dims.iter().all(|&v| v == 0), "{t:?}");
            }
        }
    }

    #[test]
    fn truncated_slice_has_the_same_cohomology() {
        let d = twist_slice_diagram(1, -2, 2).unwrap();
        assert_eq!(d.dims(), &[1, 1, 3]);
        assert_eq!(diagram_cohomology(&d).unwrap().dims, vec![0, 1]);
    }
}
