//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use schematic_workbench::cli;
use schematic_workbench::cohomology::{
    cohomology, diagram_complex, higher_direct_image, twist_slice_diagram, FiniteDiagram,
};
use schematic_workbench::constructions::{is_covering, nerve, FlatImmersionFamily};
use schematic_workbench::criteria::{
    chart_covers, is_separated, prolocal_fp_check, v_lifts, v_proper_report, RationalFunction, SigmaPoint,
};
use schematic_workbench::polyalg::{normal_form, radical_membership, s_poly, GroebnerBasis, TermOrder};
use schematic_workbench::poset::MonotoneMap;
use schematic_workbench::rings::PresentedRing;
use schematic_workbench::spaces::builders::*;
use schematic_workbench::spaces::{check_schematic, RingedSpace};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SUITE_SEED: u64 = 0x5eed_0005;
const GB_SEED: u64 = 0x5eed_0007;
const DIAGRAM_SEED: u64 = 0x5eed_0008;
const SEPARATION_SEED: u64 = 0x5eed_0006;

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    if spent < limit {
        Ok(())
    } else {
        Err(format!("{what} took {spent:?}, limit {limit:?}"))
    }
}

fn projective_space_cohomology() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=3usize {
        for d in -6..=6i64 {
            let args =
                ["workbench", "--format", "rows", "cohomology", "--pn", &n.to_string(), "--twist", &d.to_string()];
            let out = cli::run(args);
            ensure!(out.code == 0, "n={n} d={d}: exit {} ({})", out.code, out.stderr.trim());
            let mut got = vec![None; n + 1];
            for line in out.stdout.lines().filter(|l| l.starts_with("degree=")) {
                let kv: Vec<(&str, &str)> = line.split(' ').filter_map(|t| t.split_once('=')).collect();
                let get = |k: &str| kv.iter().find(|(a, _)| *a == k).map(|(_, v)| v.parse::<i64>().unwrap());
                ensure!(get("degree") == Some(d), "n={n} d={d}: stray row {line}");
                let i = get("i").unwrap() as usize;
                ensure!(i <= n, "n={n} d={d}: row beyond degree n: {line}");
                got[i] = Some(get("dim").unwrap() as usize);
            }
            let got: Vec<usize> = got.into_iter().map(|v| v.unwrap_or(usize::MAX)).collect();
            let want = pn_oracle(n, d);
            ensure!(got == want, "n={n} d={d}: got {got:?}, binomial oracle {want:?}");
            checked += 1;
        }
    }
    within(start, Duration::from_secs(10), "twist tables")?;
    Ok(format!("{checked} tables equal the binomial oracle in {:?}", start.elapsed()))
}

fn finiteness_instance() -> Outcome {
    let start = Instant::now();
    let x = Arc::new(build_p1_model());
    let f = to_base_point(&x);
    let d = twist_slice_diagram(1, -2, 2).map_err(|e| e.to_string())?;
    let r = higher_direct_image(f.map(), &d, 1).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = r.iter().map(|img| img.dim(0)).collect();
    ensure!(dims == vec![0, 1], "R^i along P1 -> point: {dims:?}, expected [0, 1]");

    let id = MonotoneMap::identity(x.poset());
    let mut rng = rng(DIAGRAM_SEED);
    let mut diagrams = vec![d];
    for _ in 0..10 {
        diagrams.push(random_diagram(&mut rng, x.poset()));
    }
    for (k, dg) in diagrams.iter().enumerate() {
        let r = higher_direct_image(&id, dg, 1).map_err(|e| e.to_string())?;
        for y in 0..x.len() {
            let h0 = h0_oracle(&dg.restrict(&x.poset().up_set(y)));
            ensure!(r[0].dim(y) == h0, "diagram {k}: R^0 at {} is {}, H^0(U_y) is {h0}", x.id(y), r[0].dim(y));
            ensure!(r[1].dim(y) == 0, "diagram {k}: R^1 at {} is {}", x.id(y), r[1].dim(y));
        }
    }
    within(start, Duration::from_secs(1), "pushforwards")?;
    Ok(format!("R^0 = 0, R^1 = 1; identity reproduces H^0(U_y) on {} diagrams", diagrams.len()))
}

fn schematicity_validator() -> Outcome {
    let check = |x: &RingedSpace, name: &str| -> Result<(bool, Vec<(String, String)>), String> {
        let start = Instant::now();
        let rep = check_schematic(x, true).map_err(|e| format!("{name}: {e}"))?;
        within(start, Duration::from_secs(1), name)?;
        Ok((rep.schematic, rep.failures().map(|t| (t.fx.clone(), t.fy.clone())).collect()))
    };
    let (p1, _) = check(&build_p1_model(), "P1 model")?;
    let (p2, _) = check(&build_pn_model(2).map_err(|e| e.to_string())?, "P2 model")?;
    ensure!(p1 && p2, "projective models: P1 {p1}, P2 {p2}");
    let (bad, pairs) = check(&build_two_chart_line(false), "two charts")?;
    ensure!(!bad, "two charts without top reported schematic");
    ensure!(pairs.contains(&("x".to_string(), "x - 1".to_string())), "witness pair (x, x - 1) missing from {pairs:?}");
    let (fixed, _) = check(&build_two_chart_line(true), "two charts with top")?;
    ensure!(fixed, "adding the top chart did not flip the verdict");
    Ok("P1, P2 pass; two charts fail with (x, x - 1); top chart restores".into())
}

fn covering_flag() -> Outcome {
    let x = Arc::new(build_p1_model());
    let both = FlatImmersionFamily::from_up_sets(&x, &[0, 1]).map_err(|e| e.to_string())?;
    let n = nerve(&both).map_err(|e| e.to_string())?;
    ensure!(n.covering.covering, "{{U_p0, U_p1}} not a covering");
    ensure!(n.augmentation_qc_iso, "augmentation not flagged qc-iso");
    let one = FlatImmersionFamily::from_up_sets(&x, &[0]).map_err(|e| e.to_string())?;
    let rep = is_covering(&one).map_err(|e| e.to_string())?;
    ensure!(!rep.covering, "{{U_p0}} reported as covering");
    let fail = rep.first_failure().map(|p| p.id.clone());
    ensure!(fail.as_deref() == Some("p1"), "{{U_p0}} fails at {fail:?}, expected p1");
    Ok("{U_p0, U_p1} covers with qc-iso augmentation; {U_p0} fails at p1".into())
}

fn valuative_suite() -> Outcome {
    let x = Arc::new(build_p1_model());
    let f = to_base_point(&x);
    let mut rng = rng(SUITE_SEED);
    let suite: Vec<SigmaPoint> = (0..20)
        .map(|_| {
            let r = random_rf(&mut rng, 4);
            SigmaPoint::new(&x, 2, vec![r.clone(), r.inverse().unwrap()]).unwrap()
        })
        .collect();
    let rep = v_proper_report(&f, &suite).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = rep.points.iter().map(|p| p.lifts.len()).collect();
    ensure!(counts.iter().all(|&c| c == 1), "P1 lift counts {counts:?}");
    let a1 = Arc::new(build_point(PresentedRing::polynomial_ring(&["x"])));
    let s = SigmaPoint::new(&a1, 0, vec![RationalFunction::parse("1/t").unwrap()]).map_err(|e| e.to_string())?;
    let c = v_lifts(Some(&to_base_point(&a1)), &a1, &s).map_err(|e| e.to_string())?.len();
    ensure!(c == 0, "A1 with x -> 1/t has {c} lifts");
    Ok(format!("20 points (seed {SUITE_SEED:#x}) with one lift each; A1 at 1/t has none"))
}

fn separatedness() -> Outcome {
    let x = Arc::new(build_p1_model());
    let rep = is_separated(&to_base_point(&x)).map_err(|e| e.to_string())?;
    ensure!(rep.separated, "P1 model -> point not separated");
    let off = rep.diagonal.points.iter().find(|p| p.y == "(p0,*,p1)").ok_or("no (p0,*,p1) in the product")?;
    ensure!(
        off.minimum.as_deref() == Some("p01") && off.surjective,
        "at (p0,*,p1): minimum {:?}, surjective {}",
        off.minimum,
        off.surjective
    );
    let corpus: Vec<(&str, RingedSpace)> = vec![
        ("P1", build_p1_model()),
        ("P2", build_pn_model(2).unwrap()),
        ("two charts with top", build_two_chart_line(true)),
        ("doubled origin", build_doubled_origin()),
        ("two points", build_disjoint_points(2)),
        ("line", build_point(PresentedRing::polynomial_ring(&["x"]))),
    ];
    let mut rng = rng(SEPARATION_SEED);
    let (mut separated, mut sampled) = (0, 0);
    for (name, space) in corpus {
        let space = Arc::new(space);
        let f = to_base_point(&space);
        if !is_separated(&f).map_err(|e| format!("{name}: {e}"))?.separated {
            continue;
        }
        separated += 1;
        for carrier in 0..space.len() {
            for _ in 0..4 {
                let Some(s) = random_sigma(&mut rng, &space, carrier) else { continue };
                let n = v_lifts(Some(&f), &space, &s).map_err(|e| e.to_string())?.len();
                ensure!(n <= 1, "{name}: {} has {n} lifts", s.describe(&space));
                sampled += 1;
            }
        }
    }
    Ok(format!("P1 separated; {separated} separated corpus spaces, {sampled} sampled points, all counts <= 1"))
}

fn groebner_kernel() -> Outcome {
    let mut rng = rng(GB_SEED);
    let (mut decided, mut undecided) = (0, 0);
    for k in 0..220 {
        let ideal = random_ideal(&mut rng);
        let order = [TermOrder::DegRevLex, TermOrder::Lex][k % 2];
        let gb = GroebnerBasis::compute(ideal.nvars(), ideal.generators(), order);
        let polys = gb.polynomials();
        for (i, a) in polys.iter().enumerate() {
            for b in &polys[i + 1..] {
                let r = normal_form(&s_poly(a, b, order), &polys, order);
                ensure!(r.is_zero(), "ideal {k}: S-polynomial does not reduce to zero");
            }
        }
        let terms = rng.gen_range(1..=2);
        let f = random_polynomial(&mut rng, ideal.nvars(), 2, terms);
        if let Some(expected) = brute_radical(&f, &ideal) {
            ensure!(radical_membership(&f, &ideal) == expected, "ideal {k}: radical membership disagrees");
            decided += 1;
        } else {
            undecided += 1;
        }
    }
    Ok(format!("220 ideals (seed {GB_SEED:#x}); radical agreement on {decided} decided cases, {undecided} undecided"))
}

fn table_checks(d: &FiniteDiagram, what: &str) -> Result<Vec<usize>, String> {
    let c = diagram_complex(d).map_err(|e| format!("{what}: {e}"))?;
    for k in 0..c.len().saturating_sub(1) {
        if let (Some(a), Some(b)) = (c.differential(k), c.differential(k + 1)) {
            ensure!(b.mul(a).is_zero(), "{what}: d^{} d^{k} != 0", k + 1);
        }
    }
    let t = cohomology(&c);
    ensure!(t.euler_characteristic() == t.complex_euler_characteristic(), "{what}: Euler identity fails");
    Ok(t.dims)
}

fn cohomology_engine() -> Outcome {
    let mut rng = rng(DIAGRAM_SEED);
    let mut diagrams = 0;
    for k in 0..150 {
        let n = rng.gen_range(1..=6);
        let p = random_poset(&mut rng, n, 0.45);
        let d = random_diagram(&mut rng, &p);
        let h = table_checks(&d, &format!("diagram {k}"))?;
        let h0 = h0_oracle(&d);
        ensure!(h[0] == h0, "diagram {k}: H^0 = {}, compatible tuples {h0}", h[0]);
        diagrams += 1;
    }
    let mut cones = 0;
    for k in 0..60 {
        let n = rng.gen_range(0..=5);
        let p = cone_over(&random_poset(&mut rng, n, 0.4));
        let dim = rng.gen_range(1..=3);
        let d = random_iso_diagram(&mut rng, &p, dim);
        let h = table_checks(&d, &format!("cone {k}"))?;
        ensure!(h[0] == dim && h[1..].iter().all(|&v| v == 0), "cone {k}: H = {h:?}, dim {dim}");
        cones += 1;
    }
    Ok(format!("{diagrams} random diagrams match the H^0 oracle; {cones} cones acyclic"))
}

fn prolocal_criterion() -> Outcome {
    let x = Arc::new(build_p1_model());
    let f = to_base_point(&x);
    let u = FlatImmersionFamily::from_up_sets(&x, &[0, 1]).map_err(|e| e.to_string())?;
    let v = chart_covers(&f, &u, &[0, 1]).map_err(|e| e.to_string())?;
    let rep = prolocal_fp_check(&f, &u, &v).map_err(|e| e.to_string())?;
    ensure!(rep.satisfied, "chart covers not satisfied: {rep:?}");
    let u1 = FlatImmersionFamily::from_up_sets(&x, &[0]).map_err(|e| e.to_string())?;
    let v1 = chart_covers(&f, &u1, &[0, 1]).map_err(|e| e.to_string())?;
    let rep = prolocal_fp_check(&f, &u1, &v1).map_err(|e| e.to_string())?;
    ensure!(!rep.satisfied, "single chart reported satisfied");
    ensure!(rep.u_failure.as_deref() == Some("p1"), "single chart fails at {:?}", rep.u_failure);
    Ok("chart covers satisfy the criterion; {U_p0} fails at p1".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("projective-space cohomology", projective_space_cohomology),
        ("finiteness instance", finiteness_instance),
        ("schematicity validator", schematicity_validator),
        ("covering and qc-iso flag", covering_flag),
        ("valuative suite", valuative_suite),
        ("separatedness", separatedness),
        ("groebner kernel", groebner_kernel),
        ("cohomology engine", cohomology_engine),
        ("pro-local criterion", prolocal_criterion),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{:.2?}]", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
