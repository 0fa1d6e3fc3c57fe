//! Degree ranges: Lefschetz / middle window / Kato, vanishing windows, and
//! the relative Lefschetz supplement.

use num_bigint::BigUint;
use serde::Serialize;

use super::{betti_bounds_table, cp_betti, InvariantError};
use crate::model::{ensure_valid, HypersurfaceProfile};
use crate::provenance::Citation;
use crate::table::{CohomologyTable, GroupInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KatoRegion {
    LefschetzIso,
    MiddleWindow,
    KatoIso,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KatoClassification {
    pub degree: u32,
    pub region: KatoRegion,
    pub group: GroupInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_description: Option<String>,
}

/// Which region degree `k` falls in for dimension `n` and singular dimension `s`.
pub fn region_of(n: u32, s: i32, k: u32) -> KatoRegion {
    let top = n as i64 + s as i64 + 1;
    if k < n {
        KatoRegion::LefschetzIso
    } else if (k as i64) <= top {
        KatoRegion::MiddleWindow
    } else {
        KatoRegion::KatoIso
    }
}

fn classify_with(profile: &HypersurfaceProfile, bounds: &CohomologyTable, k: u32) -> KatoClassification {
    let region = region_of(profile.n, profile.s, k);
    let (group, map_description) = match region {
        KatoRegion::LefschetzIso => (GroupInfo::free(k, cp_betti(profile.n + 1, k), Citation::Lefschetz), None),
        KatoRegion::KatoIso => {
            let map = (k % 2 == 0).then(|| format!("multiplication by d = {}", profile.d));
            (GroupInfo::free(k, cp_betti(profile.n + 1, k), Citation::Kato), map)
        }
        KatoRegion::MiddleWindow => (bounds.rows[k as usize].clone(), None),
    };
    KatoClassification {
        degree: k,
        region,
        group,
        map_description,
    }
}

pub fn kato_classify(
    profile: &HypersurfaceProfile,
    k: u32,
    degree_cap: u32,
) -> Result<KatoClassification, InvariantError> {
    ensure_valid(profile, degree_cap)?;
    if k > 2 * profile.n {
        return Err(InvariantError::BadParameters(format!(
            "degree {k} outside [0, 2n] = [0, {}]",
            2 * profile.n
        )));
    }
    let bounds = betti_bounds_table(profile, degree_cap)?;
    Ok(classify_with(profile, &bounds, k))
}

/// Classification of every degree in `[0, 2n]`.
pub fn kato_classify_all(
    profile: &HypersurfaceProfile,
    degree_cap: u32,
) -> Result<Vec<KatoClassification>, InvariantError> {
    let bounds = betti_bounds_table(profile, degree_cap)?;
    Ok((0..=2 * profile.n).map(|k| classify_with(profile, &bounds, k)).collect())
}

/// Inclusive degree range; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeRange {
    pub lo: u32,
    pub hi: u32,
}

impl DegreeRange {
    /// `[lo, hi]` as signed bounds, or `None` when empty.
    pub fn new(lo: i64, hi: i64) -> Option<Self> {
        (lo <= hi && lo >= 0).then(|| DegreeRange {
            lo: lo as u32,
            hi: hi as u32,
        })
    }

    pub fn contains(&self, k: u32) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingSupport {
    /// Degrees where `H^k_phi(V)` can be nonzero.
    pub cohomology: Option<DegreeRange>,
    /// Degrees where the vanishing homology can be nonzero.
    pub homology: Option<DegreeRange>,
    /// Degree at which the vanishing cohomology is known to be free.
    pub cohomology_free_degree: Option<u32>,
    /// Degree at which the vanishing homology is known to be free.
    pub homology_free_degree: Option<u32>,
}

pub fn vanishing_support(profile: &HypersurfaceProfile) -> VanishingSupport {
    let (n, s) = (profile.n as i64, profile.s as i64);
    let cohomology = DegreeRange::new(n, n + s);
    let homology = DegreeRange::new(n + 1, n + s + 1);
    VanishingSupport {
        cohomology_free_degree: cohomology.map(|r| r.lo),
        homology_free_degree: homology.map(|r| r.hi),
        cohomology,
        homology,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LefschetzSupplementReport {
    pub n: u32,
    pub s: i32,
    /// `k < n`.
    pub below_middle: Option<DegreeRange>,
    /// `n + s + 1 < k < 2n`.
    pub above_window: Option<DegreeRange>,
    /// `H^{2n}(V, V ∩ H) = Z^r`.
    pub top: GroupInfo,
    pub middle_degree: u32,
    pub middle_free: bool,
}

impl LefschetzSupplementReport {
    /// Every degree in `[0, 2n]` where the relative group vanishes.
    pub fn zero_degrees(&self) -> Vec<u32> {
        self.below_middle
            .iter()
            .chain(self.above_window.iter())
            .flat_map(DegreeRange::degrees)
            .collect()
    }
}

/// Vanishing of `H^k(V, V ∩ H)` for a generic hyperplane `H`.
pub fn lefschetz_supplement(n: u32, s: i32, r: u32) -> Result<LefschetzSupplementReport, InvariantError> {
    if n < 1 || s < -1 || s >= n as i32 || r < 1 {
        return Err(InvariantError::BadParameters(format!(
            "need n >= 1, -1 <= s < n and r >= 1, got n = {n}, s = {s}, r = {r}"
        )));
    }
    let (ni, si) = (n as i64, s as i64);
    Ok(LefschetzSupplementReport {
        n,
        s,
        below_middle: DegreeRange::new(0, ni - 1),
        above_window: DegreeRange::new(ni + si + 2, 2 * ni - 1),
        top: GroupInfo::free(2 * n, BigUint::from(r), Citation::TopComponents),
        middle_degree: n,
        middle_free: true,
    })
}
