//! Per-degree group descriptions and whole cohomology tables.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::provenance::Citation;

/// Upper end of a rank interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RankBound {
    Finite(BigUint),
    Infinite,
}

impl RankBound {
    pub fn finite(v: impl Into<BigUint>) -> Self {
        RankBound::Finite(v.into())
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            RankBound::Finite(v) => Some(v),
            RankBound::Infinite => None,
        }
    }

    pub fn contains(&self, value: &BigUint) -> bool {
        match self {
            RankBound::Finite(v) => value <= v,
            RankBound::Infinite => true,
        }
    }

    /// Minimum of two upper bounds.
    pub fn meet(&self, other: &RankBound) -> RankBound {
        match (self, other) {
            (RankBound::Infinite, b) | (b, RankBound::Infinite) => b.clone(),
            (RankBound::Finite(a), RankBound::Finite(b)) => RankBound::Finite(a.min(b).clone()),
        }
    }
}

impl fmt::Display for RankBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankBound::Finite(v) => write!(f, "{v}"),
            RankBound::Infinite => f.write_str("inf"),
        }
    }
}

/// Serde helpers for ranks: JSON integers when they fit in 64 bits, decimal
/// strings beyond that.
pub mod serde_rank {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(small) => s.serialize_u64(small),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Raw {
        Int(u64),
        Text(String),
    }

    pub(crate) fn from_raw<E: serde::de::Error>(raw: Raw) -> Result<RankBound, E> {
        match raw {
            Raw::Int(v) => Ok(RankBound::Finite(v.into())),
            Raw::Text(t) if t == "inf" => Ok(RankBound::Infinite),
            Raw::Text(t) => t
                .parse::<BigUint>()
                .map(RankBound::Finite)
                .map_err(|_| E::custom(format!("invalid rank `{t}`"))),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match from_raw(Raw::deserialize(d)?)? {
            RankBound::Finite(v) => Ok(v),
            RankBound::Infinite => Err(serde::de::Error::custom("rank must be finite here")),
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(deserialize_with = "super::deserialize")] BigUint);
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

impl Serialize for RankBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RankBound::Finite(v) => serde_rank::serialize(v, s),
            RankBound::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for RankBound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_rank::from_raw(serde_rank::Raw::deserialize(d)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Exact,
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Torsion {
    None,
    Unknown,
    /// Orders of the cyclic prime-power summands.
    Specified(Vec<u64>),
}

/// What is known about one degree of a (co)homology theory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInfo {
    pub degree: u32,
    pub kind: GroupKind,
    #[serde(with = "serde_rank::option", default, skip_serializing_if = "Option::is_none")]
    pub exact_rank: Option<BigUint>,
    pub torsion: Torsion,
    #[serde(with = "serde_rank")]
    pub rank_lo: BigUint,
    pub rank_hi: RankBound,
    pub known_free: bool,
    /// The bound exactly as the underlying inequality states it, when the
    /// emitted `rank_hi` has been sharpened from it.
    #[serde(with = "serde_rank::option", default, skip_serializing_if = "Option::is_none")]
    pub stated_bound: Option<BigUint>,
    pub provenance: Citation,
}

impl GroupInfo {
    pub fn exact(degree: u32, rank: impl Into<BigUint>, torsion: Torsion, provenance: Citation) -> Self {
        let rank = rank.into();
        let known_free = torsion == Torsion::None;
        GroupInfo {
            degree,
            kind: GroupKind::Exact,
            exact_rank: Some(rank.clone()),
            torsion,
            rank_lo: rank.clone(),
            rank_hi: RankBound::Finite(rank),
            known_free,
            stated_bound: None,
            provenance,
        }
    }

    pub fn free(degree: u32, rank: impl Into<BigUint>, provenance: Citation) -> Self {
        Self::exact(degree, rank, Torsion::None, provenance)
    }

    /// A rank interval; collapses to an exact rank when `lo == hi`.
    pub fn bounded(
        degree: u32,
        lo: impl Into<BigUint>,
        hi: RankBound,
        known_free: bool,
        provenance: Citation,
    ) -> Self {
        let lo = lo.into();
        let torsion = if known_free { Torsion::None } else { Torsion::Unknown };
        if hi.as_finite() == Some(&lo) {
            let mut g = Self::exact(degree, lo, torsion, provenance);
            g.known_free = known_free;
            return g;
        }
        GroupInfo {
            degree,
            kind: GroupKind::Bounded,
            exact_rank: None,
            torsion,
            rank_lo: lo,
            rank_hi: hi,
            known_free,
            stated_bound: None,
            provenance,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == GroupKind::Exact
    }

    pub fn contains_rank(&self, rank: &BigUint) -> bool {
        &self.rank_lo <= rank && self.rank_hi.contains(rank)
    }

    /// Checks the record's internal invariants.
    pub fn check(&self) -> Result<(), String> {
        if self.is_exact() {
            let r = self
                .exact_rank
                .as_ref()
                .ok_or_else(|| format!("degree {}: exact group without a rank", self.degree))?;
            if &self.rank_lo != r || self.rank_hi.as_finite() != Some(r) {
                return Err(format!("degree {}: exact rank disagrees with interval", self.degree));
            }
        } else if self.exact_rank.is_some() {
            return Err(format!("degree {}: bounded group carries an exact rank", self.degree));
        }
        if !self.rank_hi.contains(&self.rank_lo) {
            return Err(format!("degree {}: empty rank interval", self.degree));
        }
        if self.known_free && self.torsion != Torsion::None {
            return Err(format!("degree {}: free group with torsion", self.degree));
        }
        Ok(())
    }
}

impl fmt::Display for GroupInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact_rank {
            Some(r) => {
                let free = if r.is_zero() {
                    String::new()
                } else if *r == BigUint::from(1u32) {
                    "Z".to_string()
                } else {
                    format!("Z^{r}")
                };
                let tors = match &self.torsion {
                    Torsion::None => String::new(),
                    Torsion::Unknown => "(+ torsion?)".to_string(),
                    Torsion::Specified(orders) => orders
                        .iter()
                        .map(|o| format!("Z/{o}"))
                        .collect::<Vec<_>>()
                        .join(" + "),
                };
                match (free.is_empty(), tors.is_empty()) {
                    (true, true) => f.write_str("0"),
                    (false, true) => f.write_str(&free),
                    (true, false) if self.torsion == Torsion::Unknown => write!(f, "0 {tors}"),
                    (true, false) => f.write_str(&tors),
                    (false, false) if self.torsion == Torsion::Unknown => write!(f, "{free} {tors}"),
                    (false, false) => write!(f, "{free} + {tors}"),
                }
            }
            None => write!(f, "rank in [{}, {}]", self.rank_lo, self.rank_hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableVariant {
    CohomologyOfV,
    HomologyOfV,
    VanishingCohomology,
    VanishingHomology,
    SmoothReference,
}

impl TableVariant {
    pub fn heading(self) -> &'static str {
        match self {
            TableVariant::CohomologyOfV => "H^k(V; Z)",
            TableVariant::HomologyOfV => "H_k(V; Z)",
            TableVariant::VanishingCohomology => "H^k_phi(V)",
            TableVariant::VanishingHomology => "H_k(V_D, V_t; Z)",
            TableVariant::SmoothReference => "H^k(V_t; Z)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyTable {
    pub variant: TableVariant,
    pub rows: Vec<GroupInfo>,
}

impl CohomologyTable {
    /// Builds a table, checking that rows cover `0..len` in order.
    pub fn new(variant: TableVariant, rows: Vec<GroupInfo>) -> Result<Self, String> {
        let t = CohomologyTable { variant, rows };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<(), String> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.degree as usize != i {
                return Err(format!("row {i} has degree {}", row.degree));
            }
            row.check()?;
        }
        Ok(())
    }

    pub fn row(&self, degree: u32) -> Option<&GroupInfo> {
        self.rows.get(degree as usize)
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(GroupInfo::is_exact)
    }

    /// All ranks, when every row is exact.
    pub fn exact_ranks(&self) -> Option<Vec<BigUint>> {
        self.rows.iter().map(|r| r.exact_rank.clone()).collect()
    }

    /// Alternating sum of ranks, when every row is exact.
    pub fn euler_characteristic(&self) -> Option<BigInt> {
        let ranks = self.exact_ranks()?;
        Some(ranks.into_iter().enumerate().fold(BigInt::zero(), |acc, (k, r)| {
            let r = BigInt::from(r);
            if k % 2 == 0 {
                acc + r
            } else {
                acc - r
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_collapses_to_exact() {
        let g = GroupInfo::bounded(3, 2u32, RankBound::finite(2u32), true, Citation::ExactSequence);
        assert!(g.is_exact());
        assert_eq!(g.exact_rank, Some(2u32.into()));
        g.check().unwrap();
        let g = GroupInfo::bounded(3, 0u32, RankBound::Infinite, false, Citation::ExactSequence);
        assert!(!g.is_exact());
        assert_eq!(g.torsion, Torsion::Unknown);
        g.check().unwrap();
    }

    #[test]
    fn json_uses_inf_and_big_strings() {
        let g = GroupInfo::bounded(3, 0u32, RankBound::Infinite, false, Citation::ExactSequence);
        let json = serde_json::to_value(&g).unwrap();
        assert_eq!(json["rank_hi"], "inf");
        let big: BigUint = "123456789012345678901234567890".parse().unwrap();
        let g = GroupInfo::free(2, big.clone(), Citation::SmoothHypersurface);
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"123456789012345678901234567890\""));
        let back: GroupInfo = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GroupInfo::free(0, 0u32, Citation::Lefschetz).to_string(), "0");
        assert_eq!(GroupInfo::free(0, 1u32, Citation::Lefschetz).to_string(), "Z");
        assert_eq!(GroupInfo::free(0, 3u32, Citation::Lefschetz).to_string(), "Z^3");
        let g = GroupInfo::bounded(3, 0u32, RankBound::finite(10u32), true, Citation::MiddleDegree);
        assert_eq!(g.to_string(), "rank in [0, 10]");
    }

    #[test]
    fn table_checks_degrees() {
        let rows = vec![
            GroupInfo::free(0, 1u32, Citation::Lefschetz),
            GroupInfo::free(2, 1u32, Citation::Lefschetz),
        ];
        assert!(CohomologyTable::new(TableVariant::CohomologyOfV, rows).is_err());
    }
}
