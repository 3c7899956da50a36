//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schematic_workbench::cohomology::{FiniteDiagram, Matrix};
use schematic_workbench::criteria::{RationalFunction, SigmaPoint};
use schematic_workbench::polyalg::{ideal_membership, Ideal, Monomial, Polynomial};
use schematic_workbench::poset::Poset;
use schematic_workbench::spaces::RingedSpace;

pub type Q = BigRational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Random order on `n` elements generated by pairs `i < j` kept with probability `p`.
pub fn random_poset(rng: &mut impl Rng, n: usize, p: f64) -> Poset {
    let ids = (0..n).map(|i| format!("e{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relations(ids, &pairs).unwrap()
}

/// Adds a minimum below every element of `p`.
pub fn cone_over(p: &Poset) -> Poset {
    let n = p.len();
    let mut ids = vec!["m".to_string()];
    ids.extend(p.ids().iter().cloned());
    let mut pairs: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b && p.leq(a, b) {
                pairs.push((a + 1, b + 1));
            }
        }
    }
    Poset::from_relations(ids, &pairs).unwrap()
}

fn unitriangular(rng: &mut impl Rng, n: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let mut l = vec![vec![Q::zero(); n]; n];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = Q::one();
        for v in row.iter_mut().take(i) {
            *v = q(rng.gen_range(-2..=2));
        }
    }
    // forward substitution for L⁻¹
    let mut inv = vec![vec![Q::zero(); n]; n];
    for j in 0..n {
        for i in 0..n {
            let mut s = if i == j { Q::one() } else { Q::zero() };
            for k in 0..i {
                s -= &l[i][k] * &inv[k][j];
            }
            inv[i][j] = s;
        }
    }
    (l, inv)
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>], inner: usize, cols: usize) -> Vec<Vec<Q>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// A commuting diagram: quotients `ℚ^m / span(e_i : i ∈ S_x)` with `S_x` growing along the order,
/// plus indicator diagrams of random intervals, then a random change of basis at every element.
pub fn random_diagram(rng: &mut impl Rng, p: &Poset) -> FiniteDiagram {
    let n = p.len();
    let m = rng.gen_range(0..=3);
    let seeds: Vec<Vec<usize>> = (0..n).map(|_| (0..m).filter(|_| rng.gen_bool(0.3)).collect()).collect();
    let killed: Vec<Vec<bool>> =
        (0..n).map(|x| (0..m).map(|i| (0..n).any(|z| p.leq(z, x) && seeds[z].contains(&i))).collect()).collect();
    let intervals: Vec<(usize, usize)> = (0..rng.gen_range(0..=3))
        .filter_map(|_| {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            p.leq(a, b).then_some((a, b))
        })
        .collect();
    // basis at x: surviving quotient coordinates, then intervals containing x
    let basis: Vec<Vec<(bool, usize)>> = (0..n)
        .map(|x| {
            let mut b: Vec<(bool, usize)> = (0..m).filter(|&i| !killed[x][i]).map(|i| (true, i)).collect();
            b.extend(
                intervals.iter().enumerate().filter(|(_, &(a, c))| p.leq(a, x) && p.leq(x, c)).map(|(k, _)| (false, k)),
            );
            b
        })
        .collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let changes: Vec<_> = dims.iter().map(|&d| unitriangular(rng, d)).collect();
    let mut maps = Vec::new();
    for (x, y) in p.cover_relations() {
        let raw: Vec<Vec<Q>> = basis[y]
            .iter()
            .map(|by| basis[x].iter().map(|bx| if bx == by { Q::one() } else { Q::zero() }).collect())
            .collect();
        let conj = mat_mul(&mat_mul(&changes[y].0, &raw, dims[y], dims[x]), &changes[x].1, dims[x], dims[x]);
        maps.push(((x, y), to_matrix(&conj, dims[y], dims[x])));
    }
    FiniteDiagram::new(p.clone(), dims, maps).unwrap()
}

/// Every map an isomorphism: a constant diagram of dimension `d` conjugated at each element.
pub fn random_iso_diagram(rng: &mut impl Rng, p: &Poset, d: usize) -> FiniteDiagram {
    let changes: Vec<_> = (0..p.len()).map(|_| unitriangular(rng, d)).collect();
    let maps = p
        .cover_relations()
        .into_iter()
        .map(|(x, y)| ((x, y), to_matrix(&mat_mul(&changes[y].0, &changes[x].1, d, d), d, d)))
        .collect();
    FiniteDiagram::new(p.clone(), vec![d; p.len()], maps).unwrap()
}

fn to_matrix(rows: &[Vec<Q>], r: usize, c: usize) -> Matrix {
    let mut m = Matrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

/// Rank by plain Gaussian elimination on a row list.
pub fn oracle_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, piv);
        let lead = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &lead;
                for k in c..cols {
                    let t = &f * &rows[rank][k];
                    rows[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the space of tuples `(s_x)` with `ρ_{xy}(s_x) = s_y` on every cover.
pub fn h0_oracle(d: &FiniteDiagram) -> usize {
    let p = d.poset();
    let offsets: Vec<usize> = (0..p.len())
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += d.dim(x);
            Some(o)
        })
        .collect();
    let total: usize = d.dims().iter().sum();
    let mut eqs = Vec::new();
    for (x, y) in p.cover_relations() {
        let m = d.cover_map(x, y).unwrap();
        for i in 0..d.dim(y) {
            let mut row = vec![Q::zero(); total];
            for j in 0..d.dim(x) {
                row[offsets[x] + j] = m.get(i, j).clone();
            }
            row[offsets[y] + i] -= Q::one();
            eqs.push(row);
        }
    }
    total - if eqs.is_empty() { 0 } else { oracle_rank(eqs) }
}

pub fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as usize
}

/// Cohomology of `O(d)` on projective `n`-space.
pub fn pn_oracle(n: usize, d: i64) -> Vec<usize> {
    let n_i = n as i64;
    let mut h = vec![0; n + 1];
    if d >= 0 {
        h[0] = binomial(n_i + d, n_i);
    }
    if d < -n_i {
        h[n] = binomial(-d - 1, n_i);
    }
    h
}

pub fn random_polynomial(rng: &mut impl Rng, nvars: usize, max_deg: u32, terms: usize) -> Polynomial {
    let ts = (0..terms).map(|_| {
        let mut e = vec![0u32; nvars];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..nvars)] += 1;
        }
        (Monomial::from_exponents(e), q(rng.gen_range(-3..=3)))
    });
    Polynomial::from_terms(nvars, ts.collect::<Vec<_>>())
}

pub fn random_ideal(rng: &mut impl Rng) -> Ideal {
    let nvars = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3);
    let gens = (0..k)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            random_polynomial(rng, nvars, 3, terms)
        })
        .collect();
    Ideal::new(nvars, gens)
}

fn eval(f: &Polynomial, at: &[Q]) -> Q {
    f.terms().iter().fold(Q::zero(), |acc, (m, c)| {
        let mut t = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                t *= &at[i];
            }
        }
        acc + t
    })
}

/// `Some(true)` when `f^k ∈ I` for some `k ≤ 8`; `Some(false)` when a small integer point of
/// `V(I)` has `f ≠ 0`; `None` otherwise.
pub fn brute_radical(f: &Polynomial, ideal: &Ideal) -> Option<bool> {
    let n = ideal.nvars();
    let grid: Vec<i64> = (-3..=3).collect();
    let mut idx = vec![0usize; n];
    loop {
        let at: Vec<Q> = idx.iter().map(|&i| q(grid[i])).collect();
        if ideal.generators().iter().all(|g| eval(g, &at).is_zero()) && !eval(f, &at).is_zero() {
            return Some(false);
        }
        let mut k = 0;
        while k < n && idx[k] + 1 == grid.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        idx[k] += 1;
    }
    let mut power = f.clone();
    for _ in 1..=8 {
        if ideal_membership(&power, ideal) {
            return Some(true);
        }
        power = &power * f;
    }
    None
}

/// Nonzero `a(t)/b(t)` with both degrees at most `max_deg`.
pub fn random_rf(rng: &mut impl Rng, max_deg: usize) -> RationalFunction {
    loop {
        let coeffs = |rng: &mut dyn rand::RngCore| -> Vec<Q> {
            let deg = rng.gen_range(0..=max_deg);
            (0..=deg).map(|_| q(rng.gen_range(-4..=4))).collect()
        };
        let (num, den) = (coeffs(rng), coeffs(rng));
        if num.iter().all(Zero::is_zero) || den.iter().all(Zero::is_zero) {
            continue;
        }
        return RationalFunction::new(num, den).unwrap();
    }
}

/// Random images at `carrier`, with `w ↦ 1/v` for every relation of the form `v*w - 1`.
pub fn random_sigma(rng: &mut impl Rng, space: &RingedSpace, carrier: usize) -> Option<SigmaPoint> {
    let ring = space.stalk(carrier);
    let mut images: Vec<RationalFunction> = (0..ring.nvars()).map(|_| random_rf(rng, 3)).collect();
    for r in ring.relations() {
        let terms = r.terms();
        if terms.len() != 2 || !terms.iter().any(|(m, c)| m.is_one() && *c == -Q::one()) {
            continue;
        }
        let (m, _) = terms.iter().find(|(m, _)| !m.is_one()).unwrap();
        let vars: Vec<usize> = (0..m.nvars()).filter(|&i| m.exponents()[i] == 1).collect();
        if vars.len() == 2 && m.degree() == 2 {
            images[vars[1]] = images[vars[0]].inverse()?;
        }
    }
    SigmaPoint::new(space, carrier, images).ok()
}
