use rayon::prelude::*;

use super::ringed::RingedSpace;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    Certified,
    /// User-asserted flat epimorphism without certificate.
    Asserted,
    Missing,
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct EdgeReport {
    pub from: String,
    pub to: String,
    pub status: EdgeStatus,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub edges: Vec<EdgeReport>,
    pub squares_checked: usize,
    pub pseudoschematic: bool,
    pub uses_assumptions: bool,
}

/// Per-edge certificate status plus the functoriality squares checked at construction.
pub fn validate_space(space: &RingedSpace) -> ValidationReport {
    let edges: Vec<EdgeReport> = space
        .restrictions()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|((x, y), map)| {
            let (status, witness) = match map.certificate() {
                Some(cert) => match cert.verify(map) {
                    Ok(()) => (EdgeStatus::Certified, Some(map.source().display(&cert.witness))),
                    Err(e) => (EdgeStatus::Invalid(e.to_string()), None),
                },
                None if map.is_assumed() => (EdgeStatus::Asserted, None),
                None => (EdgeStatus::Missing, None),
            };
            EdgeReport { from: space.id(*x).to_string(), to: space.id(*y).to_string(), status, witness }
        })
        .collect();
    let p = space.poset();
    let squares_checked = (0..p.len())
        .flat_map(|x| (0..p.len()).map(move |z| (x, z)))
        .filter(|&(x, z)| p.lt(x, z))
        .map(|(x, z)| p.upper_covers(x).into_iter().filter(|&y| p.leq(y, z)).count())
        .sum();
    let pseudoschematic = edges.iter().all(|e| matches!(e.status, EdgeStatus::Certified | EdgeStatus::Asserted));
    let uses_assumptions = edges.iter().any(|e| e.status == EdgeStatus::Asserted);
    ValidationReport { edges, squares_checked, pseudoschematic, uses_assumptions }
}

/// Verdict on one `(z, x, y)` instance of the faithful-flatness condition.
#[derive(Clone, Debug)]
pub struct TripleVerdict {
    pub z: String,
    pub x: String,
    pub y: String,
    /// Witnesses of `z → x` and `z → y` in `O_z`.
    pub fx: String,
    pub fy: String,
    /// Upper bounds `t ≥ x, y` and their witnesses in `O_z`.
    pub upper: Vec<(String, String)>,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct SchematicReport {
    pub triples: Vec<TripleVerdict>,
    pub chain_mismatches: Vec<String>,
    pub schematic: bool,
}

impl SchematicReport {
    pub fn failures(&self) -> impl Iterator<Item = &TripleVerdict> {
        self.triples.iter().filter(|t| !t.holds)
    }
}

/// For all `z ≤ x, y`: `f_x·f_y ∈ √(I_z + (h_t : t ≥ x, y))`, the empty family meaning nilpotence.
///
/// With `cross_check`, every cover chain is also composed and compared with the canonical
/// witness up to radicals.
pub fn check_schematic(space: &RingedSpace, cross_check: bool) -> Result<SchematicReport> {
    if let Some(((x, y), _)) = space.restrictions().find(|(_, m)| !m.is_certified()) {
        return Err(WorkbenchError::CertificateRequired(format!("restriction {} → {}", space.id(*x), space.id(*y))));
    }
    let p = space.poset();
    let n = p.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|z| (0..n).map(move |x| (z, x))).filter(|&(z, x)| p.leq(z, x)).collect();
    let computed: Vec<((usize, usize), Polynomial)> =
        pairs.par_iter().map(|&(z, x)| space.witness(z, x).map(|w| ((z, x), w))).collect::<Result<_>>()?;
    let mut witness: Vec<Vec<Option<Polynomial>>> = vec![vec![None; n]; n];
    for ((z, x), w) in computed {
        witness[z][x] = Some(w);
    }

    let mut triples = Vec::new();
    for z in 0..n {
        for x in p.up_set(z) {
            for y in p.up_set(z) {
                if x <= y {
                    triples.push((z, x, y));
                }
            }
        }
    }
    let verdicts: Vec<TripleVerdict> = triples
        .par_iter()
        .map(|&(z, x, y)| {
            let ring = space.stalk(z);
            let fx = witness[z][x].as_ref().unwrap();
            let fy = witness[z][y].as_ref().unwrap();
            let ts = p.upper_bounds(&[x, y]);
            let hs: Vec<Polynomial> = ts.iter().map(|&t| witness[z][t].clone().unwrap()).collect();
            let product = ring.reduce(&(fx * fy));
            let holds = ring.radical_contains(&product, &hs);
            TripleVerdict {
                z: space.id(z).to_string(),
                x: space.id(x).to_string(),
                y: space.id(y).to_string(),
                fx: ring.display(fx),
                fy: ring.display(fy),
                upper: ts.iter().zip(&hs).map(|(&t, h)| (space.id(t).to_string(), ring.display(h))).collect(),
                holds,
            }
        })
        .collect();

    let mut chain_mismatches = Vec::new();
    if cross_check {
        for &(z, x) in &pairs {
            let canonical = witness[z][x].as_ref().unwrap();
            let ring = space.stalk(z);
            for chain in p.all_cover_chains(z, x) {
                let maps: Vec<_> = chain.windows(2).map(|w| space.restriction(w[0], w[1]).unwrap()).collect();
                let w = space.chain_witness(z, &maps)?;
                let agree = ring.radical_contains(&w, std::slice::from_ref(canonical))
                    && ring.radical_contains(canonical, std::slice::from_ref(&w));
                if !agree {
                    let names: Vec<&str> = chain.iter().map(|&c| space.id(c)).collect();
                    chain_mismatches.push(format!(
                        "chain {} gives `{}`, canonical gives `{}`",
                        names.join(" → "),
                        ring.display(&w),
                        ring.display(canonical)
                    ));
                }
            }
        }
    }

    let schematic = verdicts.iter().all(|t| t.holds) && chain_mismatches.is_empty();
    Ok(SchematicReport { triples: verdicts, chain_mismatches, schematic })
}
