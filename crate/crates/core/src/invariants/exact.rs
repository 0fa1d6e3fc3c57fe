//! Exact cohomology tables: quadrics, projective cones over plane curves,
//! rational homology manifolds, and the Euler characteristic.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{
    cp_betti, curve_table, euler_isolated, sign, smooth_euler, smooth_table, InvariantError,
};
use crate::model::{ensure_valid, Construction, HypersurfaceProfile};
use crate::provenance::Citation;
use crate::table::{CohomologyTable, GroupInfo, TableVariant, Torsion};

/// Which exact computation produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactPath {
    Smooth,
    Curve,
    Quadric,
    Cone,
    RationalHomologyManifold,
}

fn internal_euler(what: &str, table: &CohomologyTable, expected: &BigInt) -> Result<(), InvariantError> {
    let chi = table.euler_characteristic().expect("exact table");
    if &chi != expected {
        return Err(InvariantError::Internal(format!(
            "{what}: alternating rank sum {chi} differs from Euler characteristic {expected}"
        )));
    }
    Ok(())
}

/// Singular quadric of rank `q` in `CP^{n+1}`: a cone with vertex
/// `Sigma = CP^s`, `s = n+1-q`, over a smooth quadric `W_q` of dimension `q-2`.
pub fn quadric_table(n: u32, q: u32) -> Result<CohomologyTable, InvariantError> {
    if q < 4 || q > n + 1 {
        return Err(InvariantError::RankOutOfRange { n, q });
    }
    let s = n + 1 - q;
    let w = smooth_table(q - 2, 2)?;
    let rows = (0..=2 * n)
        .map(|k| {
            let rank = if k <= 2 * s {
                BigUint::from(cp_betti(s, k))
            } else if k == 2 * s + 1 {
                BigUint::zero()
            } else {
                w.rows[(k - 2 - 2 * s) as usize]
                    .exact_rank
                    .clone()
                    .expect("smooth table is exact")
            };
            GroupInfo::free(k, rank, Citation::QuadricCone)
        })
        .collect();
    let table = CohomologyTable::new(TableVariant::CohomologyOfV, rows).map_err(InvariantError::Internal)?;
    // V minus its vertex is a C^{s+1}-bundle over W_q.
    let expected = BigInt::from(s + 1) + smooth_euler(q - 2, 2)?;
    internal_euler("quadric", &table, &expected)?;
    if s == 0 {
        internal_euler("quadric", &table, &euler_isolated(n, 2, &[1])?)?;
    }
    Ok(table)
}

/// Projective cone over a plane curve `C`: `H^k(V) = H^{k-2}(C)` for `k >= 2`.
pub fn cone_table(base: &CohomologyTable) -> Result<CohomologyTable, InvariantError> {
    base.check().map_err(InvariantError::MalformedBase)?;
    if base.rows.len() != 3 {
        return Err(InvariantError::MalformedBase(format!(
            "a plane curve has cohomology in degrees 0..2, got {} rows",
            base.rows.len()
        )));
    }
    if !base.is_exact() {
        return Err(InvariantError::MalformedBase("base table is not exact".into()));
    }
    let mut rows = vec![
        GroupInfo::free(0, 1u32, Citation::ProjectiveCone),
        GroupInfo::free(1, 0u32, Citation::ProjectiveCone),
    ];
    for g in &base.rows {
        let mut g = g.clone();
        g.degree += 2;
        g.provenance = Citation::ProjectiveCone;
        g.stated_bound = None;
        rows.push(g);
    }
    let table = CohomologyTable::new(TableVariant::CohomologyOfV, rows).map_err(InvariantError::Internal)?;
    let expected = base.euler_characteristic().expect("exact base") + 1;
    internal_euler("cone", &table, &expected)?;
    Ok(table)
}

/// `chi(Y) - chi(S_1 \ Y) * mu_1 - chi(S_0) * (chi(F_0) - 1)`, with `Y` a
/// generic hyperplane section, `mu_1` the transversal Milnor number along the
/// one-dimensional stratum `S_1` and `F_0` the Milnor fiber at the point `S_0`.
pub fn stratified_euler_two_step(chi_y: i64, chi_s1_minus_y: i64, mu_t: i64, chi_s0: i64, chi_f0: i64) -> BigInt {
    BigInt::from(chi_y)
        - BigInt::from(chi_s1_minus_y) * BigInt::from(mu_t)
        - BigInt::from(chi_s0) * (BigInt::from(chi_f0) - 1)
}

fn curve_of(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<CohomologyTable, InvariantError> {
    let mus = if profile.s < 0 {
        Vec::new()
    } else {
        profile.top_milnor_numbers(degree_cap).map_err(InvariantError::Milnor)?
    };
    let table = curve_table(profile.d, profile.r, &mus)?;
    internal_euler("curve", &table, &euler_isolated(1, profile.d, &mus)?)?;
    Ok(table)
}

fn smooth_cohomology(n: u32, d: u32) -> Result<CohomologyTable, InvariantError> {
    let mut t = smooth_table(n, d)?;
    t.variant = TableVariant::CohomologyOfV;
    Ok(t)
}

/// Tables determined by global structure, without using the Euler characteristic.
fn structural_table(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
) -> Result<Option<(ExactPath, CohomologyTable)>, InvariantError> {
    let (n, d) = (profile.n, profile.d);
    match &profile.construction {
        Some(Construction::Quadric { rank }) if *rank == n + 2 => {
            return Ok(Some((ExactPath::Quadric, smooth_cohomology(n, d)?)))
        }
        Some(Construction::Quadric { rank }) => return Ok(Some((ExactPath::Quadric, quadric_table(n, *rank)?))),
        Some(Construction::ProjectiveCone(base)) => {
            return Ok(Some((ExactPath::Cone, cone_table(&curve_of(base, degree_cap)?)?)))
        }
        None => {}
    }
    if profile.s < 0 {
        return Ok(Some((ExactPath::Smooth, smooth_cohomology(n, d)?)));
    }
    if n == 1 {
        return Ok(Some((ExactPath::Curve, curve_of(profile, degree_cap)?)));
    }
    Ok(None)
}

fn computed_euler(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<Option<BigInt>, InvariantError> {
    if let Some((_, t)) = structural_table(profile, degree_cap)? {
        return Ok(t.euler_characteristic());
    }
    if profile.s == 0 {
        let mus = profile.top_milnor_numbers(degree_cap).map_err(InvariantError::Milnor)?;
        return Ok(Some(euler_isolated(profile.n, profile.d, &mus)?));
    }
    Ok(None)
}

/// `chi(V)`: `chi_override` when given (checked against any computable value),
/// otherwise computed for smooth, isolated and constructed profiles.
pub fn euler_characteristic(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<BigInt, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    let computed = computed_euler(profile, degree_cap)?;
    match (profile.chi_override, computed) {
        (Some(given), Some(c)) if BigInt::from(given) != c => Err(InvariantError::BadParameters(format!(
            "chi_override = {given} contradicts the computed Euler characteristic {c}"
        ))),
        (Some(given), _) => Ok(BigInt::from(given)),
        (None, Some(c)) => Ok(c),
        (None, None) => Err(InvariantError::MissingChi),
    }
}

/// Betti numbers of a rational homology manifold: those of `CP^n` off the
/// middle degree, the middle one from the Euler characteristic.
pub fn qhm_betti(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<CohomologyTable, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    if !profile.q_homology_manifold {
        return Err(InvariantError::NotQhm);
    }
    let n = profile.n;
    if profile.r != 1 {
        return Err(InvariantError::BadParameters(
            "a rational homology manifold hypersurface is irreducible (r = 1)".into(),
        ));
    }
    let chi = euler_characteristic(profile, degree_cap)?;
    let middle = BigInt::from(cp_betti(n, n)) + sign(n) * (&chi - BigInt::from(n + 1));
    if middle.is_negative() {
        return Err(InvariantError::InconsistentChi(chi));
    }
    let top = n as i64 + profile.s as i64 + 1;
    let rows = (0..=2 * n)
        .map(|k| {
            if k == n {
                GroupInfo::free(k, middle.to_biguint().expect("nonnegative"), Citation::RationalHomologyManifold)
            } else if k < n {
                GroupInfo::free(k, cp_betti(n, k), Citation::Lefschetz)
            } else if k as i64 > top {
                GroupInfo::free(k, cp_betti(n, k), Citation::Kato)
            } else {
                GroupInfo::exact(k, cp_betti(n, k), Torsion::Unknown, Citation::RationalHomologyManifold)
            }
        })
        .collect();
    let table = CohomologyTable::new(TableVariant::CohomologyOfV, rows).map_err(InvariantError::Internal)?;
    internal_euler("rational homology manifold", &table, &chi)?;
    Ok(table)
}

/// The exact cohomology of `V` when some exact path applies.
pub fn exact_table(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
) -> Result<Option<(ExactPath, CohomologyTable)>, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    if let Some(found) = structural_table(profile, degree_cap)? {
        return Ok(Some(found));
    }
    if profile.q_homology_manifold {
        return match qhm_betti(profile, degree_cap) {
            Ok(t) => Ok(Some((ExactPath::RationalHomologyManifold, t))),
            Err(InvariantError::MissingChi) => Ok(None),
            Err(e) => Err(e),
        };
    }
    Ok(None)
}
