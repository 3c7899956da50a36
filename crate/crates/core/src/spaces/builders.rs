//! Standard example spaces.

use std::sync::Arc;

use super::morphism::SchematicMorphism;
use super::ringed::RingedSpace;
use crate::error::{Result, WorkbenchError};
use crate::polyalg::Polynomial;
use crate::poset::Poset;
use crate::rings::{PresentedRing, RingMap};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// One point `*` with the given stalk.
pub fn build_point(ring: PresentedRing) -> RingedSpace {
    let poset = Poset::from_relations(vec!["*".into()], &[]).unwrap();
    RingedSpace::new(poset, vec![Arc::new(ring)], Vec::new()).unwrap()
}

/// The affine model of a ring: a single point.
pub fn build_affine(ring: PresentedRing) -> RingedSpace {
    build_point(ring)
}

/// The point with stalk ℚ, the final object used as base.
pub fn build_base_point() -> RingedSpace {
    build_point(PresentedRing::rationals())
}

/// Name of the subset `Δ ⊆ {0..n}` in the projective model: `p` followed by its indices.
pub fn pn_element_name(n: usize, subset: &[usize]) -> String {
    let parts: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    if n < 10 {
        format!("p{}", parts.concat())
    } else {
        format!("p{}", parts.join("_"))
    }
}

/// Nonempty subsets of `{0..n}` in bitmask order.
pub fn pn_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << (n + 1))).map(|mask| (0..=n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

/// Finite model of `Pⁿ`: nonempty `Δ ⊆ {0..n}` by inclusion, stalk
/// `ℚ[x_0..x_n, w_i (i ∈ Δ)]/(x_i w_i − 1)`, restrictions inverting one more coordinate.
pub fn build_pn_model(n: usize) -> Result<RingedSpace> {
    if n == 0 {
        return Err(WorkbenchError::Construction("projective model needs n ≥ 1".into()));
    }
    let subsets = pn_subsets(n);
    let ids: Vec<String> = subsets.iter().map(|s| pn_element_name(n, s)).collect();
    let mut pairs = Vec::new();
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate() {
            if a != b && sa.iter().all(|i| sb.contains(i)) {
                pairs.push((a, b));
            }
        }
    }
    let poset = Poset::from_relations(ids, &pairs)?;

    let stalks: Vec<Arc<PresentedRing>> = subsets
        .iter()
        .map(|s| {
            let nv = n + 1 + s.len();
            let mut vars: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
            vars.extend(s.iter().map(|i| format!("w{i}")));
            let rels = s
                .iter()
                .enumerate()
                .map(|(k, &i)| &(&Polynomial::var(nv, i) * &Polynomial::var(nv, n + 1 + k)) - &Polynomial::one(nv))
                .collect();
            PresentedRing::new(vars, rels).map(Arc::new)
        })
        .collect::<Result<_>>()?;

    let mut restrictions = Vec::new();
    for (a, b) in poset.cover_relations() {
        let (sa, sb) = (&subsets[a], &subsets[b]);
        let k = *sb.iter().find(|i| !sa.contains(i)).unwrap();
        let target = &stalks[b];
        let mut images: Vec<Polynomial> = (0..=n).map(|i| target.var(i)).collect();
        for i in sa {
            let pos = sb.iter().position(|j| j == i).unwrap();
            images.push(target.var(n + 1 + pos));
        }
        let witness = stalks[a].var(k);
        let map = RingMap::localization(stalks[a].clone(), target.clone(), images, &witness)?;
        restrictions.push(((a, b), map));
    }
    RingedSpace::new(poset, stalks, restrictions)
}

/// The three-point model of `P¹`: `p0: ℚ[u]`, `p1: ℚ[v]`, `p01: ℚ[u,w]/(uw − 1)` with `v ↦ w`.
pub fn build_p1_model() -> RingedSpace {
    let poset = Poset::from_named_relations(&["p0", "p1", "p01"], &[("p0", "p01"), ("p1", "p01")]).unwrap();
    let p0 = Arc::new(PresentedRing::polynomial_ring(&["u"]));
    let p1 = Arc::new(PresentedRing::polynomial_ring(&["v"]));
    let (u, w) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let p01 = Arc::new(PresentedRing::new(names(&["u", "w"]), vec![&(&u * &w) - &Polynomial::one(2)]).unwrap());
    let r0 = RingMap::localization(p0.clone(), p01.clone(), vec![p01.var(0)], &p0.var(0)).unwrap();
    let r1 = RingMap::localization(p1.clone(), p01.clone(), vec![p01.var(1)], &p1.var(0)).unwrap();
    RingedSpace::new(poset, vec![p0, p1, p01], vec![((0, 2), r0), ((1, 2), r1)]).unwrap()
}

/// The affine line `c: ℚ[x]` with charts `a` (inverting `x`) and `b` (inverting `x − 1`),
/// optionally with the overlap `d` inverting `x(x − 1)` above both.
pub fn build_two_chart_line(with_top: bool) -> RingedSpace {
    let mut ids = vec!["c", "a", "b"];
    let mut rel = vec![("c", "a"), ("c", "b")];
    if with_top {
        ids.push("d");
        rel.extend([("a", "d"), ("b", "d")]);
    }
    let poset = Poset::from_named_relations(&ids, &rel).unwrap();
    let c = Arc::new(PresentedRing::polynomial_ring(&["x"]));
    let x = c.var(0);
    let x1 = &x - &c.one();
    let loc = |s: &Polynomial| {
        let w = Polynomial::var(2, 1);
        Arc::new(PresentedRing::new(names(&["x", "w"]), vec![&(&w * &s.extend(1)) - &Polynomial::one(2)]).unwrap())
    };
    let a = loc(&x);
    let b = loc(&x1);
    let mut stalks = vec![c.clone(), a.clone(), b.clone()];
    let mut restrictions = vec![
        ((0, 1), RingMap::localization(c.clone(), a.clone(), vec![a.var(0)], &x).unwrap()),
        ((0, 2), RingMap::localization(c.clone(), b.clone(), vec![b.var(0)], &x1).unwrap()),
    ];
    if with_top {
        let d = loc(&(&x * &x1));
        // a's w = 1/x = (x − 1)·w_d ; b's w = 1/(x − 1) = x·w_d
        let (dx, dw) = (d.var(0), d.var(1));
        let ra = RingMap::localization(
            a.clone(),
            d.clone(),
            vec![dx.clone(), &(&dx - &d.one()) * &dw],
            &(&a.var(0) - &a.one()),
        )
        .unwrap();
        let rb = RingMap::localization(b.clone(), d.clone(), vec![dx.clone(), &dx * &dw], &b.var(0)).unwrap();
        stalks.push(d);
        restrictions.push(((1, 3), ra));
        restrictions.push(((2, 3), rb));
    }
    RingedSpace::new(poset, stalks, restrictions).unwrap()
}

/// The affine line with a doubled origin: `a, b: ℚ[x]` glued along `d: ℚ[x]_x`.
pub fn build_doubled_origin() -> RingedSpace {
    let poset = Poset::from_named_relations(&["a", "b", "d"], &[("a", "d"), ("b", "d")]).unwrap();
    let line = Arc::new(PresentedRing::polynomial_ring(&["x"]));
    let (xv, wv) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let d = Arc::new(PresentedRing::new(names(&["x", "w"]), vec![&(&xv * &wv) - &Polynomial::one(2)]).unwrap());
    let r = RingMap::localization(line.clone(), d.clone(), vec![d.var(0)], &line.var(0)).unwrap();
    RingedSpace::new(poset, vec![line.clone(), line, d], vec![((0, 2), r.clone()), ((1, 2), r)]).unwrap()
}

/// `k` isolated points with stalk ℚ.
pub fn build_disjoint_points(k: usize) -> RingedSpace {
    let ids = (0..k).map(|i| format!("q{i}")).collect();
    let poset = Poset::antichain(ids).unwrap();
    let q = Arc::new(PresentedRing::rationals());
    RingedSpace::new(poset, vec![q; k], Vec::new()).unwrap()
}

/// Surrogate for `Spec` of a DVR: `0 ≤ 1` with `ℚ[t] → ℚ[t]_t`. The valuative tests use
/// `ℚ[t]_(t)` and `ℚ(t)` symbolically; this space only fixes the shape.
pub fn build_dvr_space() -> RingedSpace {
    let poset = Poset::from_named_relations(&["0", "1"], &[("0", "1")]).unwrap();
    let a = Arc::new(PresentedRing::polynomial_ring(&["t"]));
    let (t, w) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let s = Arc::new(PresentedRing::new(names(&["t", "w"]), vec![&(&t * &w) - &Polynomial::one(2)]).unwrap());
    let r = RingMap::localization(a.clone(), s.clone(), vec![s.var(0)], &a.var(0)).unwrap();
    RingedSpace::new(poset, vec![a, s], vec![((0, 1), r)]).unwrap()
}

/// The structure morphism to the base point `(*, ℚ)`.
pub fn to_base_point(space: &Arc<RingedSpace>) -> SchematicMorphism {
    let base = Arc::new(build_base_point());
    let q = base.stalk(0).clone();
    let comaps = space.stalks().iter().map(|r| RingMap::new(q.clone(), r.clone(), Vec::new()).unwrap()).collect();
    SchematicMorphism::new(space.clone(), base, vec![0; space.len()], comaps).unwrap()
}
