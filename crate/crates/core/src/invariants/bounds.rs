//! Betti-number intervals from the specialization sequence and the
//! transversal bound, plus vanishing (co)homology tables.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::ranges::vanishing_support;
use super::{cp_betti, smooth_betti, smooth_table, InvariantError};
use crate::exact_seq::{
    cohomology_name, solve_ranks, specialization_instance, vanishing_name, ExactSequenceSpec, RankSolution, RankValue,
    SpecializationInputs,
};
use crate::model::{ensure_valid, HypersurfaceProfile};
use crate::provenance::Citation;
use crate::table::{CohomologyTable, GroupInfo, RankBound, TableVariant, Torsion};

fn top_mus(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<Vec<u64>, InvariantError> {
    let mus = profile.top_milnor_numbers(degree_cap).map_err(InvariantError::Milnor)?;
    if mus.is_empty() {
        return Err(InvariantError::MissingTopStratum);
    }
    Ok(mus)
}

/// Sum of the transversal Milnor numbers over the top-dimensional strata
/// (over the singular points when `s = 0`).
pub fn vanishing_top_rank_bound(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<BigUint, InvariantError> {
    if profile.is_smooth() {
        return Err(InvariantError::Smooth);
    }
    Ok(top_mus(profile, degree_cap)?.into_iter().map(BigUint::from).sum())
}

/// Solves the specialization window. `known` pins `H^k(V)` ranks; with
/// `rational_manifold` the vanishing ranks off degree `n` are zero.
fn solve_window(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
    known: &BTreeMap<u32, BigUint>,
    rational_manifold: bool,
) -> Result<(ExactSequenceSpec, RankSolution), InvariantError> {
    let (n, s) = (profile.n, profile.s);
    let total = vanishing_top_rank_bound(profile, degree_cap)?;
    let top = (n as i32 + s + 1) as u32;
    let mut inputs = SpecializationInputs::default();
    if s == 0 {
        inputs.vanishing.insert(n, RankValue::Known(total));
    } else {
        inputs.vanishing.insert(top - 1, RankValue::at_most(total));
    }
    if rational_manifold {
        for k in n + 1..top {
            inputs.vanishing.insert(k, RankValue::known(0u32));
        }
    }
    if top == 2 * n {
        inputs.cohomology.insert(top, RankValue::known(profile.r));
    }
    for (k, v) in known {
        if (n..=top).contains(k) {
            inputs.cohomology.insert(*k, RankValue::Known(v.clone()));
        }
    }
    let smooth = smooth_table(n, profile.d)?;
    let seq = specialization_instance(profile, &smooth, &inputs)
        .map_err(|e| InvariantError::Internal(e.to_string()))?;
    let sol = solve_ranks(&seq);
    if !sol.feasible {
        return Err(InvariantError::Infeasible(seq.to_string()));
    }
    Ok((seq, sol))
}

/// Range of a window term; pinned terms come back as a point.
fn interval((seq, sol): &(ExactSequenceSpec, RankSolution), name: &str) -> (BigUint, RankBound) {
    if let Some(iv) = sol.interval(name) {
        return (iv.lo.clone(), iv.hi.clone());
    }
    match seq.terms().iter().find(|t| t.name == name).map(|t| &t.value) {
        Some(RankValue::Known(v)) => (v.clone(), RankBound::Finite(v.clone())),
        _ => panic!("window term {name} missing from the solution"),
    }
}

fn strict_top_bound(n: u32, s: i32, total: &BigUint) -> (BigUint, Option<BigUint>) {
    let k = (n as i32 + s + 1) as u32;
    let stated = total + 1u32;
    let strict = (n as i32 + s) % 2 == 0;
    #[cfg(feature = "mutants")]
    if crate::mutants::drop_strictness() {
        return (stated, None);
    }
    // For n+s even the degree n+s+1 is odd, so b_k(CP^n) = 0 and this is
    // exactly one below the stated bound.
    let emitted = BigUint::from(cp_betti(n, k)) + total;
    let stated_bound = (strict && emitted < stated).then_some(stated);
    (emitted, stated_bound)
}

fn check_route(k: u32, closed: &RankBound, solved: &RankBound) -> Result<(), InvariantError> {
    #[cfg(feature = "mutants")]
    if crate::mutants::drop_strictness() {
        return Ok(());
    }
    if closed != solved {
        return Err(InvariantError::Internal(format!(
            "degree {k}: closed-form bound {closed} disagrees with the exact-sequence bound {solved}"
        )));
    }
    Ok(())
}

fn smooth_rows(profile: &HypersurfaceProfile) -> Result<Vec<GroupInfo>, InvariantError> {
    let n = profile.n;
    let middle = smooth_betti(n, profile.d)?;
    Ok((0..=2 * n)
        .map(|k| match k.cmp(&n) {
            std::cmp::Ordering::Less => GroupInfo::free(k, cp_betti(n, k), Citation::Lefschetz),
            std::cmp::Ordering::Equal => GroupInfo::free(k, middle.clone(), Citation::SmoothHypersurface),
            std::cmp::Ordering::Greater => GroupInfo::free(k, cp_betti(n, k), Citation::Kato),
        })
        .collect())
}

/// Rank intervals for `H^k(V; Z)`, `0 <= k <= 2n`.
///
/// Outside `[n, n+s+1]` the groups are those of `CP^n`. At `n` the group is
/// free of rank at most the smooth middle Betti number; at `n+s+1` the rank is
/// at most `b_{n+s+1}(CP^n) + sum mu`, which is the transversal bound made
/// strict when `n+s` is even (`stated_bound` keeps the non-strict form).
/// Strictly inside the window the bound is infinite: nothing bounds the
/// intermediate vanishing ranks. Lower bounds come from exactness.
pub fn betti_bounds_table(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<CohomologyTable, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    let (n, s) = (profile.n, profile.s);
    if s < 0 {
        return CohomologyTable::new(TableVariant::CohomologyOfV, smooth_rows(profile)?)
            .map_err(InvariantError::Internal);
    }
    let top = (n as i32 + s + 1) as u32;
    let total = vanishing_top_rank_bound(profile, degree_cap)?;
    let sol = solve_window(profile, degree_cap, &BTreeMap::new(), false)?;
    let mut rows = Vec::new();
    for k in 0..=2 * n {
        let row = if k < n {
            GroupInfo::free(k, cp_betti(n, k), Citation::Lefschetz)
        } else if k > top {
            GroupInfo::free(k, cp_betti(n, k), Citation::Kato)
        } else if k == 2 * n {
            GroupInfo::free(k, profile.r, Citation::TopComponents)
        } else if k == n {
            let closed = RankBound::Finite(smooth_betti(n, profile.d)?);
            let (lo, hi) = interval(&sol, &cohomology_name(k));
            if !closed.contains(hi.as_finite().expect("middle degree is bounded")) {
                return Err(InvariantError::Internal(format!(
                    "degree {k}: exact-sequence bound {hi} exceeds the closed form {closed}"
                )));
            }
            GroupInfo::bounded(k, lo, hi, true, Citation::MiddleDegree)
        } else if k == top {
            let (emitted, stated) = strict_top_bound(n, s, &total);
            let (lo, hi) = interval(&sol, &cohomology_name(k));
            let closed = RankBound::Finite(emitted);
            check_route(k, &closed, &hi)?;
            let mut g = GroupInfo::bounded(k, lo, closed, false, Citation::TransversalBound);
            g.stated_bound = stated;
            g
        } else {
            let (lo, hi) = interval(&sol, &cohomology_name(k));
            check_route(k, &RankBound::Infinite, &hi)?;
            GroupInfo::bounded(k, lo, RankBound::Infinite, false, Citation::SpecializationBound)
        };
        rows.push(row);
    }
    CohomologyTable::new(TableVariant::CohomologyOfV, rows).map_err(InvariantError::Internal)
}

/// Rank intervals for `H_k(V; Z)`; ranks agree with cohomology, torsion
/// knowledge differs.
pub fn homology_bounds_table(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<CohomologyTable, InvariantError> {
    let cohom = betti_bounds_table(profile, degree_cap)?;
    let (n, s) = (profile.n, profile.s);
    let top = (n as i32 + s + 1) as u32;
    let rows = cohom
        .rows
        .into_iter()
        .map(|mut g| {
            let k = g.degree;
            let (free, citation) = if s < 0 {
                (true, if k == n { Citation::SmoothHypersurface } else { Citation::HomologyOutsideWindow })
            } else if k < n || k > top {
                (true, Citation::HomologyOutsideWindow)
            } else if k == 2 * n {
                (true, Citation::TopComponents)
            } else if k == top {
                (true, Citation::HomologyTopFree)
            } else if k == n {
                (false, Citation::HomologyMiddle)
            } else {
                (false, Citation::HomologyWindow)
            };
            g.known_free = free;
            g.torsion = if free { Torsion::None } else { Torsion::Unknown };
            g.provenance = citation;
            g
        })
        .collect();
    CohomologyTable::new(TableVariant::HomologyOfV, rows).map_err(InvariantError::Internal)
}

/// Rank intervals for `H^k_phi(V)`, `0 <= k <= 2n`. When `exact` carries the
/// cohomology of `V`, its ranks are fed into the specialization sequence.
pub fn vanishing_table(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
    exact: Option<&CohomologyTable>,
) -> Result<CohomologyTable, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    let n = profile.n;
    let support = vanishing_support(profile);
    let zero = |k| GroupInfo::free(k, 0u32, Citation::VanishingConcentration);
    let Some(window) = support.cohomology else {
        let rows = (0..=2 * n).map(zero).collect();
        return CohomologyTable::new(TableVariant::VanishingCohomology, rows).map_err(InvariantError::Internal);
    };
    let mut known = BTreeMap::new();
    if let Some(t) = exact {
        for g in &t.rows {
            if let Some(r) = &g.exact_rank {
                known.insert(g.degree, r.clone());
            }
        }
    }
    let sol = solve_window(profile, degree_cap, &known, profile.q_homology_manifold)?;
    let rows = (0..=2 * n)
        .map(|k| {
            if !window.contains(k) {
                return zero(k);
            }
            let (lo, hi) = interval(&sol, &vanishing_name(k));
            let citation = if profile.s == 0 {
                Citation::IsolatedSequence
            } else if k == n {
                Citation::VanishingBottomFree
            } else if k == window.hi {
                Citation::VanishingTopBound
            } else {
                Citation::ExactSequence
            };
            GroupInfo::bounded(k, lo, hi, k == n, citation)
        })
        .collect();
    CohomologyTable::new(TableVariant::VanishingCohomology, rows).map_err(InvariantError::Internal)
}

/// Rank intervals for the vanishing homology `H_k(V_D, V_t)`, `0 <= k <= 2n+1`,
/// obtained from the cohomology version by the degree shift.
pub fn vanishing_homology_table(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
    exact: Option<&CohomologyTable>,
) -> Result<CohomologyTable, InvariantError> {
    let cohom = vanishing_table(profile, degree_cap, exact)?;
    let support = vanishing_support(profile);
    let rows = (0..=2 * profile.n + 1)
        .map(|k| {
            let free = support.homology_free_degree == Some(k);
            match k.checked_sub(1).and_then(|j| cohom.row(j)) {
                Some(g) if !(g.is_exact() && g.rank_lo.is_zero()) => GroupInfo::bounded(
                    k,
                    g.rank_lo.clone(),
                    g.rank_hi.clone(),
                    free,
                    Citation::VanishingHomologyConcentration,
                ),
                _ => GroupInfo::free(k, 0u32, Citation::VanishingHomologyConcentration),
            }
        })
        .collect();
    CohomologyTable::new(TableVariant::VanishingHomology, rows).map_err(InvariantError::Internal)
}
