mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use schematic_workbench::cohomology::{diagram_cohomology, higher_direct_image};
use schematic_workbench::constructions::{cylinder, fibered_product, is_covering, nerve, FlatImmersionFamily};
use schematic_workbench::criteria::{is_closed_immersion, is_separated, v_lifts, RationalFunction, SigmaPoint};
use schematic_workbench::polyalg::{ideal_membership, normal_form, Ideal, TermOrder};
use schematic_workbench::poset::MonotoneMap;
use schematic_workbench::rings::{is_surjective, map_kernel, prime_preimage, tensor_product, RingMap};
use schematic_workbench::spaces::builders::*;
use schematic_workbench::spaces::{
    centre, check_schematic, validate_space, PrimePoint, RingedSpace, SchematicMorphism,
};

fn spaces() -> Vec<RingedSpace> {
    vec![
        build_p1_model(),
        build_two_chart_line(true),
        build_doubled_origin(),
        build_disjoint_points(2),
        build_dvr_space(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn up_set_intersections(seed in any::<u64>(), n in 1usize..7) {
        let p = random_poset(&mut rng(seed), n, 0.4);
        for x in 0..n {
            prop_assert_eq!(p.minimum(&p.up_set(x)), Some(x));
            for y in 0..n {
                let both: Vec<usize> = (0..n).filter(|z| p.leq(x, *z) && p.leq(y, *z)).collect();
                let mut union: Vec<usize> = p
                    .minimal_elements(&p.upper_bounds(&[x, y]))
                    .into_iter()
                    .flat_map(|m| p.up_set(m))
                    .collect();
                union.sort();
                union.dedup();
                prop_assert_eq!(both, union);
            }
        }
        for k in n..n + 2 {
            prop_assert!(p.chains(k).is_empty());
        }
    }

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_polynomial(&mut r, 3, 3, 3);
        let g = random_polynomial(&mut r, 3, 3, 3);
        let h = random_polynomial(&mut r, 3, 3, 3);
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
    }

    #[test]
    fn normal_form_difference_in_ideal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ideal = random_ideal(&mut r);
        let f = random_polynomial(&mut r, ideal.nvars(), 3, 3);
        let gb = ideal.groebner(TermOrder::DegRevLex);
        let nf = normal_form(&f, &gb.polynomials(), TermOrder::DegRevLex);
        prop_assert!(ideal_membership(&(&f - &nf), &ideal));
    }

    #[test]
    fn h0_matches_compatible_tuples(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_poset(&mut r, n, 0.45);
        let d = random_diagram(&mut r, &p);
        let t = diagram_cohomology(&d).unwrap();
        prop_assert_eq!(t.h(0), h0_oracle(&d));
        prop_assert_eq!(t.euler_characteristic(), t.complex_euler_characteristic());
    }

    #[test]
    fn pushforward_to_point_is_cohomology(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let p = random_poset(&mut r, n, 0.45);
        let d = random_diagram(&mut r, &p);
        let t = diagram_cohomology(&d).unwrap();
        let pt = schematic_workbench::poset::Poset::antichain(vec!["*".into()]).unwrap();
        let f = MonotoneMap::to_point(&p, &pt);
        let images = higher_direct_image(&f, &d, 2).unwrap();
        for (i, img) in images.iter().enumerate() {
            prop_assert_eq!(img.dim(0), t.h(i));
        }
    }

    #[test]
    fn cones_are_acyclic(seed in any::<u64>(), n in 0usize..5, dim in 1usize..4) {
        let mut r = rng(seed);
        let p = cone_over(&random_poset(&mut r, n, 0.4));
        let t = diagram_cohomology(&random_iso_diagram(&mut r, &p, dim)).unwrap();
        prop_assert_eq!(t.h(0), dim);
        prop_assert!((1..t.dims.len()).all(|i| t.h(i) == 0));
    }

    #[test]
    fn lift_counts_ignore_unit_twists(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = Arc::new(build_p1_model());
        let f = to_base_point(&x);
        let base = random_rf(&mut r, 3);
        // a unit of ℚ[t]_(t): nonzero constant terms top and bottom
        let unit = loop {
            let u = random_rf(&mut r, 2);
            if u.valuation() == Some(0) {
                break u;
            }
        };
        let twisted = &base * &unit;
        let count = |s: &RationalFunction| {
            let sigma = SigmaPoint::new(&x, 2, vec![s.clone(), s.inverse().unwrap()]).unwrap();
            v_lifts(Some(&f), &x, &sigma).unwrap().len()
        };
        prop_assert_eq!(count(&base), count(&twisted));
    }

    #[test]
    fn separated_spaces_have_at_most_one_lift(seed in any::<u64>()) {
        let mut r = rng(seed);
        for space in spaces() {
            let space = Arc::new(space);
            let f = to_base_point(&space);
            let separated = is_separated(&f).unwrap().separated;
            let carrier = r.gen_range(0..space.len());
            if let Some(s) = random_sigma(&mut r, &space, carrier) {
                let n = v_lifts(Some(&f), &space, &s).unwrap().len();
                prop_assert!(!separated || n <= 1, "{}: {n} lifts", s.describe(&space));
            }
        }
    }
}

#[test]
fn certificates_reverify() {
    for space in spaces().into_iter().chain([build_pn_model(2).unwrap()]) {
        for (_, r) in space.restrictions() {
            if let Some(c) = r.certificate() {
                let bare = RingMap::new(r.source().clone(), r.target().clone(), r.images().to_vec()).unwrap();
                assert!(bare.certified(c.clone()).is_ok());
            }
        }
    }
}

#[test]
fn tensor_is_symmetric_on_localizations() {
    let x = build_two_chart_line(true);
    let (ra, rb) = (x.restriction(0, 1).unwrap(), x.restriction(0, 2).unwrap());
    let (ab, _, _) = tensor_product(ra, rb).unwrap();
    let (ba, _, _) = tensor_product(rb, ra).unwrap();
    assert_eq!(ab.nvars(), ba.nvars());
    assert_eq!(ab.relations().len(), ba.relations().len());
    // x ⊗ 1 and x(x − 1) are units on both sides
    for ring in [&ab, &ba] {
        let xv = ring.var(0);
        assert!(ring.is_unit(&xv));
        assert!(ring.is_unit(&(&xv - &ring.one())));
    }
}

#[test]
fn iso_detection_consistency() {
    let x = build_p1_model();
    let r = x.restriction(0, 2).unwrap();
    assert!(!is_surjective(r));
    assert!(map_kernel(r).is_zero());
    let id = RingMap::identity(x.stalk(2).clone());
    assert!(is_surjective(&id) && map_kernel(&id).is_zero());
}

#[test]
fn prime_preimages_are_proper() {
    let x = build_p1_model();
    let r = x.restriction(0, 2).unwrap();
    let ring = x.stalk(2);
    let p = Ideal::new(ring.nvars(), vec![&ring.var(0) - &ring.one()]);
    assert!(!prime_preimage(r, &p).unwrap().is_unit());
}

#[test]
fn centre_is_idempotent() {
    let x = build_pn_model(2).unwrap();
    for c in 0..x.len() {
        let ring = x.stalk(c);
        let gens: Vec<_> = (0..ring.nvars())
            .filter(|&i| ring.vars()[i].starts_with('x'))
            .take(1)
            .map(|i| &ring.var(i) - &ring.one())
            .collect();
        let first = centre(&x, &PrimePoint::new(&x, c, gens).unwrap()).unwrap();
        let again =
            centre(&x, &PrimePoint::new(&x, first.carrier, first.prime.generators().to_vec()).unwrap()).unwrap();
        assert_eq!(first.carrier, again.carrier);
    }
}

#[test]
fn up_sets_stay_schematic() {
    for space in [build_p1_model(), build_two_chart_line(true), build_pn_model(2).unwrap()] {
        assert!(check_schematic(&space, false).unwrap().schematic);
        for x in 0..space.len() {
            let u = space.up_subspace(x).unwrap();
            assert!(check_schematic(&u, false).unwrap().schematic, "U_{}", space.id(x));
            assert!(validate_space(&u).pseudoschematic);
        }
    }
}

#[test]
fn projective_models_are_schematic() {
    for n in 1..=3 {
        assert!(check_schematic(&build_pn_model(n).unwrap(), false).unwrap().schematic, "n = {n}");
    }
}

#[test]
fn nerve_cylinder_size_is_the_sum() {
    let x = Arc::new(build_p1_model());
    let n = nerve(&FlatImmersionFamily::from_up_sets(&x, &[0, 1]).unwrap()).unwrap();
    let sum: usize = (0..n.datum.index().len()).map(|p| n.datum.space(p).len()).sum();
    assert_eq!(n.cylinder.space.len(), sum);
    assert_eq!(cylinder(&n.datum).unwrap().space.len(), sum);
    for r in n.augmentation.comaps().iter() {
        assert!(r.is_certified());
    }
}

#[test]
fn adding_the_identity_covers() {
    let x = Arc::new(build_p1_model());
    let fam = FlatImmersionFamily::new(
        x.clone(),
        vec![SchematicMorphism::open_inclusion(&x, 0).unwrap(), SchematicMorphism::identity(x.clone())],
    )
    .unwrap();
    assert!(is_covering(&fam).unwrap().covering);
}

#[test]
fn projections_commute() {
    let x = Arc::new(build_p1_model());
    let f = to_base_point(&x);
    let p = fibered_product(&f, &f).unwrap();
    for (i, proj) in p.projections.iter().enumerate() {
        let via = proj.then(&f).unwrap();
        for e in 0..p.len() {
            assert_eq!(via.apply(e), p.structure.apply(e), "projection {i} at {}", p.space.id(e));
        }
    }
}

#[test]
fn separated_identity_and_closed_composites() {
    for space in spaces() {
        let space = Arc::new(space);
        assert!(is_separated(&SchematicMorphism::identity(space.clone())).unwrap().separated);
    }
    let x = Arc::new(build_p1_model());
    let id = SchematicMorphism::identity(x.clone());
    assert!(is_closed_immersion(&id).unwrap().closed_immersion);
    assert!(is_closed_immersion(&id.then(&id).unwrap()).unwrap().closed_immersion);
}
