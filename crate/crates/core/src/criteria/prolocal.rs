use std::sync::Arc;

use super::immersion::is_separated;
use crate::constructions::{fibered_product, is_covering, FlatImmersionFamily};
use crate::error::{Result, WorkbenchError};
use crate::spaces::builders::to_base_point;
use crate::spaces::{RingedSpace, SchematicMorphism};

/// For each member `U_i → X`, the product `U_i ×_Y X` and the open up-sets of the points
/// `(min U_i, b, c)` for the given chart elements `c` of `X`.
pub fn chart_covers(
    f: &SchematicMorphism,
    u: &FlatImmersionFamily,
    charts: &[usize],
) -> Result<Vec<FlatImmersionFamily>> {
    u.members()
        .iter()
        .map(|m| {
            let src = m.source();
            let all: Vec<usize> = (0..src.len()).collect();
            let min = src.poset().minimum(&all).ok_or_else(|| {
                WorkbenchError::AffinenessUnverifiable(format!("member over {} has no minimum", src.id(0)))
            })?;
            let prod = fibered_product(&m.then(f)?, f)?;
            let seeds: Vec<usize> = (0..prod.len())
                .filter(|&e| prod.points[e].coords[0] == min && charts.contains(&prod.points[e].coords[1]))
                .collect();
            let members =
                seeds.iter().map(|&e| SchematicMorphism::open_inclusion(&prod.space, e)).collect::<Result<Vec<_>>>()?;
            FlatImmersionFamily::new(prod.space.clone(), members)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ProlocalReport {
    pub u_covers: bool,
    /// First element of `X` not covered by `U`.
    pub u_failure: Option<String>,
    /// Per `i`, whether `V^i` covers `U_i ×_Y X`, with the first failing element.
    pub v_covers: Vec<(bool, Option<String>)>,
    /// `O(U_i) → O(V_j^i)` maps, all finitely presented in this ring class.
    pub finite_presentation: Vec<String>,
    pub f_separated: bool,
    pub base_separated: bool,
    pub satisfied: bool,
}

impl ProlocalReport {
    pub const QUALIFIER: &'static str = "criterion";
}

fn minimum_of(space: &RingedSpace) -> Result<usize> {
    let all: Vec<usize> = (0..space.len()).collect();
    space.poset().minimum(&all).ok_or_else(|| {
        WorkbenchError::AffinenessUnverifiable(format!(
            "space on {} has no minimum, global sections unavailable",
            space.poset().ids().join(",")
        ))
    })
}

/// `U` covers `X`, each `V^i` covers `U_i ×_Y X`, and every member is affine.
pub fn prolocal_fp_check(
    f: &SchematicMorphism,
    u: &FlatImmersionFamily,
    v: &[FlatImmersionFamily],
) -> Result<ProlocalReport> {
    if v.len() != u.members().len() {
        return Err(WorkbenchError::Validation(vec![format!(
            "{} refinements for {} members",
            v.len(),
            u.members().len()
        )]));
    }
    if !Arc::ptr_eq(u.target(), f.source()) && u.target().poset() != f.source().poset() {
        return Err(WorkbenchError::MismatchedTargets);
    }
    let cover = is_covering(u)?;
    let mut v_covers = Vec::new();
    let mut finite_presentation = Vec::new();
    for (m, vi) in u.members().iter().zip(v) {
        let src = m.source();
        let mu = minimum_of(src)?;
        let rep = is_covering(vi)?;
        v_covers.push((rep.covering, rep.first_failure().map(|p| p.id.clone())));
        for w in vi.members() {
            let mw = minimum_of(w.source())?;
            finite_presentation.push(format!("O({}) → O({}): finitely presented", src.id(mu), w.source().id(mw)));
        }
    }
    let f_separated = is_separated(f)?.separated;
    let base_separated = is_separated(&to_base_point(f.target()))?.separated;
    let satisfied = cover.covering && v_covers.iter().all(|(ok, _)| *ok);
    Ok(ProlocalReport {
        u_covers: cover.covering,
        u_failure: cover.first_failure().map(|p| p.id.clone()),
        v_covers,
        finite_presentation,
        f_separated,
        base_separated,
        satisfied,
    })
}
