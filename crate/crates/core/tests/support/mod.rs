//! Property checks shared by the proptest suites and the acceptance runner.
#![allow(dead_code)]

use hsurf_core::exact_seq::{ExactSequenceSpec, RankTerm, RankValue};
use hsurf_core::fixtures;
use hsurf_core::invariants::{
    betti_bounds_table, cone_table, curve_table, euler_isolated, exact_table, qhm_betti, quadric_table,
    smooth_euler, smooth_table,
};
use hsurf_core::linalg::RatMatrix;
use hsurf_core::model::quadric_profile;
use hsurf_core::poly::Monomial;
use hsurf_core::{CohomologyTable, GermSpec, HypersurfaceProfile, MultiPoly, Rational, DEFAULT_DEGREE_CAP};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

pub const CAP: u32 = DEFAULT_DEGREE_CAP;

pub fn var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Random homogeneous polynomial of the given degree with small integer coefficients.
pub fn homogeneous_poly(nvars: usize, degree: u32) -> impl Strategy<Value = MultiPoly> {
    let monomials = Monomial::all_of_degree(nvars, degree);
    let count = monomials.len();
    prop::collection::vec((0..count, -6i64..=6), 1..=count.min(8)).prop_map(move |picks| {
        let terms = picks
            .into_iter()
            .map(|(i, c)| (monomials[i].clone(), Rational::from_integer(c.into())));
        MultiPoly::from_terms(var_names(nvars), terms).unwrap()
    })
}

/// Arbitrary polynomial of bounded degree.
pub fn any_poly(nvars: usize, max_degree: u32) -> impl Strategy<Value = MultiPoly> {
    let exps = prop::collection::vec(0..=max_degree, nvars);
    let coeff = (-9i64..=9, 1i64..=4);
    prop::collection::vec((exps, coeff), 0..6).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(e, (p, q))| (Monomial::new(e), Rational::new(p.into(), q.into())));
        MultiPoly::from_terms(var_names(nvars), terms).unwrap()
    })
}

/// `sum_i x_i * df/dx_i == deg(f) * f`.
pub fn euler_relation_holds(f: &MultiPoly, degree: u32) -> bool {
    let n = f.nvars();
    let mut lhs = MultiPoly::zero(f.variables().to_vec()).unwrap();
    for i in 0..n {
        let xi = MultiPoly::var(f.variables().to_vec(), i).unwrap();
        lhs = lhs.try_add(&xi.try_mul(&f.derivative(i)).unwrap()).unwrap();
    }
    lhs == f.scale(&Rational::from_integer(degree.into()))
}

/// Invertible integer matrices as products of unit lower and upper triangular factors.
pub fn invertible_matrix(size: usize) -> impl Strategy<Value = RatMatrix> {
    let entries = prop::collection::vec(-3i64..=3, size * size * 2);
    let perm = Just((0..size).collect::<Vec<_>>()).prop_shuffle();
    (entries, perm).prop_map(move |(e, perm)| {
        let mut lower = RatMatrix::identity(size);
        let mut upper = RatMatrix::identity(size);
        for i in 0..size {
            for j in 0..i {
                lower.set(i, j, Rational::from_integer(e[i * size + j].into()));
                upper.set(j, i, Rational::from_integer(e[size * size + i * size + j].into()));
            }
        }
        let mut p = RatMatrix::zeros(size);
        for (i, &j) in perm.iter().enumerate() {
            p.set(i, j, Rational::from_integer(1.into()));
        }
        lower.mul(&upper).mul(&p)
    })
}

/// `rank(P^T A P) == rank(A)` and the quadric profile does not change.
pub fn congruence_invariant(n: u32, q: u32, p: &RatMatrix) -> Result<(), String> {
    let diag: Vec<i64> = (0..n + 2).map(|i| i64::from(i < q)).collect();
    let a = RatMatrix::diagonal(&diag);
    let b = a.congruent(p);
    if b.rank() != q as usize {
        return Err(format!("rank of congruent matrix is {}, expected {q}", b.rank()));
    }
    let pa = quadric_profile(n, &a).map_err(|e| e.to_string())?;
    let pb = quadric_profile(n, &b).map_err(|e| e.to_string())?;
    if pa != pb {
        return Err(format!("quadric profiles differ for n = {n}, q = {q}"));
    }
    Ok(())
}

fn chi(t: &CohomologyTable) -> BigInt {
    t.euler_characteristic().expect("exact table")
}

/// Every exact table the calculators emit, with the Euler characteristic an
/// independent formula predicts for it.
pub fn exact_tables_with_expected_euler() -> Vec<(String, CohomologyTable, BigInt)> {
    let mut out = Vec::new();
    for n in 1..=7 {
        for d in 1..=7 {
            out.push((format!("smooth n={n} d={d}"), smooth_table(n, d).unwrap(), smooth_euler(n, d).unwrap()));
        }
    }
    let curves: &[(u32, u32, &[u64])] = &[
        (3, 3, &[1, 1, 1]),
        (3, 1, &[1]),
        (3, 1, &[2]),
        (1, 1, &[]),
        (2, 2, &[1]),
        (4, 4, &[1, 1, 1, 1, 1, 1]),
        (4, 1, &[1, 1, 1]),
        (5, 1, &[1, 1, 2, 3]),
    ];
    for &(d, r, mus) in curves {
        let t = curve_table(d, r, mus).unwrap();
        out.push((format!("curve d={d} r={r} mu={mus:?}"), t, euler_isolated(1, d, mus).unwrap()));
    }
    for n in 3..=8 {
        for q in 4..=n + 1 {
            let t = quadric_table(n, q).unwrap();
            let s = n + 1 - q;
            let expected = if s == 0 {
                euler_isolated(n, 2, &[1]).unwrap()
            } else {
                // Stratify V as the vertex CP^s and a C^{s+1}-bundle over W_q.
                BigInt::from(s + 1) + smooth_euler(q - 2, 2).unwrap()
            };
            out.push((format!("quadric n={n} q={q}"), t, expected));
        }
    }
    for &(d, r, mus) in curves {
        let base = curve_table(d, r, mus).unwrap();
        let expected = chi(&base) + 1;
        out.push((format!("cone over curve d={d} r={r}"), cone_table(&base).unwrap(), expected));
    }
    let qhm = fixtures::cubic_threefold_rational_manifold();
    out.push(("rational manifold threefold".into(), qhm_betti(&qhm, CAP).unwrap(), BigInt::from(4)));
    for (n, d) in [(2, 3), (4, 3), (2, 5), (3, 4)] {
        let mut p = HypersurfaceProfile::smooth(n, d);
        p.q_homology_manifold = true;
        out.push((
            format!("smooth as rational manifold n={n} d={d}"),
            qhm_betti(&p, CAP).unwrap(),
            smooth_euler(n, d).unwrap(),
        ));
    }
    out
}

/// Profiles for which both the bounds route and an exact route apply.
pub fn profiles_with_exact_route() -> Vec<(String, HypersurfaceProfile)> {
    let mut out = vec![
        ("threefold".to_string(), fixtures::cubic_threefold_rational_manifold()),
        ("triangle curve".to_string(), fixtures::triangle_curve()),
        ("triangle cone".to_string(), fixtures::triangle_cone()),
    ];
    for n in 3..=8 {
        for q in 4..=n + 1 {
            out.push((format!("quadric n={n} q={q}"), fixtures::quadric(n, q)));
        }
    }
    for n in 1..=5 {
        for d in 1..=5 {
            out.push((format!("smooth n={n} d={d}"), HypersurfaceProfile::smooth(n, d)));
        }
    }
    for (d, r, exps) in [
        (3, 1, vec![vec![2, 2]]),
        (3, 1, vec![vec![2, 3]]),
        (4, 1, vec![vec![2, 2], vec![2, 2], vec![2, 3]]),
        (2, 2, vec![vec![2, 2]]),
        (4, 4, vec![vec![2, 2]; 6]),
    ] {
        let germs = exps.iter().cloned().map(GermSpec::Brieskorn).collect();
        out.push((format!("curve d={d} r={r}"), HypersurfaceProfile::with_isolated(1, d, r, germs)));
    }
    out
}

/// Every exact rank lies in the corresponding bounds interval.
pub fn contains_exact(profile: &HypersurfaceProfile) -> Result<usize, String> {
    let (_, exact) = exact_table(profile, CAP)
        .map_err(|e| e.to_string())?
        .ok_or("no exact route")?;
    let bounds = betti_bounds_table(profile, CAP).map_err(|e| e.to_string())?;
    if exact.rows.len() != bounds.rows.len() {
        return Err("table lengths differ".into());
    }
    for (e, b) in exact.rows.iter().zip(&bounds.rows) {
        let r = e.exact_rank.as_ref().ok_or("exact table row without rank")?;
        if !b.contains_rank(r) {
            return Err(format!(
                "degree {}: exact rank {r} outside [{}, {}]",
                e.degree, b.rank_lo, b.rank_hi
            ));
        }
    }
    Ok(exact.rows.len())
}

/// Builds `0 -> terms -> 0` from known values and named unknowns bounded by `hi`.
pub fn sequence(values: &[Option<u64>], hi: u64) -> ExactSequenceSpec {
    let terms = values
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Some(k) => RankTerm::known(format!("c{i}"), *k),
            None => RankTerm::new(format!("u{i}"), RankValue::at_most(hi)),
        })
        .collect();
    ExactSequenceSpec::new(terms).unwrap()
}

/// Exact sequences of free ranks: the image ranks are forced by the partial
/// alternating sums, which must be nonnegative and end at zero.
pub fn fully_known_feasible(values: &[u64]) -> bool {
    let mut image: i64 = 0;
    for v in values {
        image = *v as i64 - image;
        if image < 0 {
            return false;
        }
    }
    image == 0
}

/// Brute-force feasible set per unknown: `(feasible, [(lo, hi)])`.
pub fn brute_force(values: &[Option<u64>], hi: u64) -> (bool, Vec<(u64, u64)>) {
    let unknowns: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_none()).collect();
    let mut ranges: Vec<Option<(u64, u64)>> = vec![None; unknowns.len()];
    let mut assignment: Vec<u64> = values.iter().map(|v| v.unwrap_or(0)).collect();
    let total = (hi + 1).pow(unknowns.len() as u32);
    for code in 0..total {
        let mut c = code;
        for &i in &unknowns {
            assignment[i] = c % (hi + 1);
            c /= hi + 1;
        }
        if fully_known_feasible(&assignment) {
            for (slot, &i) in unknowns.iter().enumerate() {
                let v = assignment[i];
                ranges[slot] = Some(match ranges[slot] {
                    None => (v, v),
                    Some((lo, h)) => (lo.min(v), h.max(v)),
                });
            }
            if unknowns.is_empty() {
                return (true, Vec::new());
            }
        }
    }
    if unknowns.is_empty() {
        return (false, Vec::new());
    }
    if ranges.iter().any(Option::is_none) {
        return (false, Vec::new());
    }
    (true, ranges.into_iter().map(Option::unwrap).collect())
}

/// Compares `solve_ranks` with enumeration on one sequence.
pub fn solver_matches_brute_force(values: &[Option<u64>], hi: u64) -> Result<(), String> {
    let seq = sequence(values, hi);
    let sol = hsurf_core::exact_seq::solve_ranks(&seq);
    let (feasible, ranges) = brute_force(values, hi);
    if sol.feasible != feasible {
        return Err(format!("{seq}: solver feasible = {}, enumeration = {feasible}", sol.feasible));
    }
    if !feasible {
        return Ok(());
    }
    let got: Vec<(BigUint, hsurf_core::RankBound)> =
        sol.intervals.iter().map(|i| (i.lo.clone(), i.hi.clone())).collect();
    let want: Vec<(BigUint, hsurf_core::RankBound)> = ranges
        .iter()
        .map(|&(lo, h)| (BigUint::from(lo), hsurf_core::RankBound::finite(h)))
        .collect();
    if got != want {
        return Err(format!("{seq}: solver {got:?}, enumeration {want:?}"));
    }
    Ok(())
}
