//! Closed-form invariants, range theorems and exact cohomology tables.

mod bounds;
mod exact;
mod ranges;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::ModelError;
use crate::provenance::Citation;
use crate::table::{CohomologyTable, GroupInfo, TableVariant};

pub use bounds::{
    betti_bounds_table, homology_bounds_table, vanishing_homology_table, vanishing_table,
    vanishing_top_rank_bound,
};
pub use exact::{
    cone_table, euler_characteristic, exact_table, qhm_betti, quadric_table,
    stratified_euler_two_step, ExactPath,
};
pub use ranges::{
    kato_classify, kato_classify_all, lefschetz_supplement, vanishing_support, DegreeRange,
    KatoClassification, KatoRegion, LefschetzSupplementReport, VanishingSupport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("{0}")]
    BadParameters(String),
    #[error("negative Betti number {0}: singularity data impossible for this degree")]
    NegativeBetti(BigInt),
    #[error("no top-dimensional singular stratum to bound")]
    MissingTopStratum,
    #[error("profile is smooth; there is no vanishing cohomology to bound")]
    Smooth,
    #[error("Euler characteristic unknown: supply chi_override")]
    MissingChi,
    #[error("Euler characteristic {0} gives a negative middle Betti number")]
    InconsistentChi(BigInt),
    #[error("quadric rank {q} outside 4 <= q <= n+1 = {}", .n + 1)]
    RankOutOfRange { n: u32, q: u32 },
    #[error("malformed base table: {0}")]
    MalformedBase(String),
    #[error("not a rational homology manifold")]
    NotQhm,
    #[error("inconsistent rank constraints: {0}")]
    Infeasible(String),
    #[error("Milnor number: {0}")]
    Milnor(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl InvariantError {
    /// Internal assertion failures (as opposed to bad input).
    pub fn is_internal(&self) -> bool {
        matches!(self, InvariantError::Internal(_))
    }
}

fn check_nd(n: u32, d: u32) -> Result<(), InvariantError> {
    if n < 1 || d < 1 {
        return Err(InvariantError::BadParameters(format!(
            "need n >= 1 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

fn sign(exp: u32) -> BigInt {
    if exp % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn correction_sign(n: u32) -> BigInt {
    #[cfg(feature = "mutants")]
    if crate::mutants::flip_smooth_betti_sign() {
        return sign(n + 1);
    }
    sign(n)
}

/// Middle Betti number of a smooth degree-`d` hypersurface of dimension `n`.
pub fn smooth_betti(n: u32, d: u32) -> Result<BigUint, InvariantError> {
    check_nd(n, d)?;
    let d_big = BigInt::from(d);
    let base: BigInt = &d_big - 1;
    let num = base.pow(n + 2) + sign(n + 1);
    let (q, rem) = num.div_rem(&d_big);
    if !rem.is_zero() {
        return Err(InvariantError::Internal(format!(
            "{d} does not divide (d-1)^(n+2) + (-1)^(n+1) for n = {n}"
        )));
    }
    let b: BigInt = q + (correction_sign(n) * 3 + 1) / 2;
    b.to_biguint()
        .ok_or_else(|| InvariantError::Internal(format!("negative smooth Betti number for n = {n}, d = {d}")))
}

/// Euler characteristic of a smooth degree-`d` hypersurface of dimension `n`.
pub fn smooth_euler(n: u32, d: u32) -> Result<BigInt, InvariantError> {
    check_nd(n, d)?;
    let d_big = BigInt::from(d);
    let base: BigInt = &d_big - 1;
    let num = BigInt::one() + sign(n + 1) * base.pow(n + 2);
    let (q, rem) = num.div_rem(&d_big);
    if !rem.is_zero() {
        return Err(InvariantError::Internal(format!(
            "{d} does not divide 1 + (-1)^(n+1)(d-1)^(n+2) for n = {n}"
        )));
    }
    Ok(BigInt::from(n + 2) - q)
}

/// `b_k(CP^m)`.
pub fn cp_betti(m: u32, k: u32) -> u32 {
    u32::from(k % 2 == 0 && k <= 2 * m)
}

/// Cohomology of a smooth degree-`d` hypersurface of dimension `n`.
pub fn smooth_table(n: u32, d: u32) -> Result<CohomologyTable, InvariantError> {
    let middle = smooth_betti(n, d)?;
    let rows = (0..=2 * n)
        .map(|k| {
            let rank = if k == n {
                middle.clone()
            } else {
                BigUint::from(cp_betti(n, k))
            };
            GroupInfo::free(k, rank, Citation::SmoothHypersurface)
        })
        .collect();
    let table = CohomologyTable::new(TableVariant::SmoothReference, rows).map_err(InvariantError::Internal)?;
    let chi = table.euler_characteristic().expect("smooth table is exact");
    let expected = smooth_euler(n, d)?;
    if chi != expected {
        return Err(InvariantError::Internal(format!(
            "smooth table for n = {n}, d = {d} has Euler characteristic {chi}, expected {expected}"
        )));
    }
    Ok(table)
}

fn sum_mu(mus: &[u64]) -> BigInt {
    mus.iter().map(|m| BigInt::from(*m)).sum()
}

/// Euler characteristic with isolated singularities of the given Milnor numbers.
pub fn euler_isolated(n: u32, d: u32, mus: &[u64]) -> Result<BigInt, InvariantError> {
    if mus.contains(&0) {
        return Err(InvariantError::BadParameters("Milnor numbers of singular points are at least 1".into()));
    }
    Ok(smooth_euler(n, d)? + sign(n + 1) * sum_mu(mus))
}

/// `(b_0, b_1, b_2)` of a reduced plane curve with `r` components and isolated
/// singular points of the given Milnor numbers.
pub fn curve_betti(d: u32, r: u32, mus: &[u64]) -> Result<(BigUint, BigUint, BigUint), InvariantError> {
    if d < 1 || r < 1 {
        return Err(InvariantError::BadParameters(format!(
            "need d >= 1 and r >= 1, got d = {d}, r = {r}"
        )));
    }
    let d_big = BigInt::from(d);
    let b1: BigInt = BigInt::from(r) + 1 + &d_big * &d_big - &d_big * 3 - sum_mu(mus);
    if b1.is_negative() {
        return Err(InvariantError::NegativeBetti(b1));
    }
    Ok((
        BigUint::one(),
        b1.to_biguint().expect("checked nonnegative"),
        BigUint::from(r),
    ))
}

/// Cohomology table of a plane curve.
pub fn curve_table(d: u32, r: u32, mus: &[u64]) -> Result<CohomologyTable, InvariantError> {
    let (b0, b1, b2) = curve_betti(d, r, mus)?;
    let rows = vec![
        GroupInfo::free(0, b0, Citation::PlaneCurve),
        GroupInfo::free(1, b1, Citation::PlaneCurve),
        GroupInfo::free(2, b2, Citation::PlaneCurve),
    ];
    CohomologyTable::new(TableVariant::CohomologyOfV, rows).map_err(InvariantError::Internal)
}

#[cfg(test)]
pub(crate) fn to_u64(v: &BigUint) -> Option<u64> {
    num_traits::ToPrimitive::to_u64(v)
}
