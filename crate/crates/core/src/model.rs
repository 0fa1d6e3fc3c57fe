//! Input records describing a projective hypersurface and its singularities.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::milnor::{milnor, GermSpec};
use crate::poly::{parse_poly, PolyError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed profile: {0}")]
    Json(String),
    #[error("unsupported schema version {} (expected {SCHEMA_VERSION})", found.map_or("missing".to_string(), |v| v.to_string()))]
    Schema { found: Option<u64> },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix must be {expected}x{expected}, got {found}x{found}")]
    WrongSize { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("quadric rank {0} outside the singular range 4 <= q <= n+1")]
    RankOutOfRange(usize),
    #[error("invalid profile: {}", render_violations(.0))]
    Invalid(Vec<Violation>),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("[{}] {}", v.code, v.message))
        .collect::<Vec<_>>()
        .join("; ")
}

impl Serialize for GermSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            GermSpec::Brieskorn(e) => map.serialize_entry("brieskorn", e)?,
            GermSpec::Weighted { weights, degree } => {
                #[derive(Serialize)]
                struct W<'a> {
                    w: &'a [u64],
                    d: u64,
                }
                map.serialize_entry("weighted", &W { w: weights, d: *degree })?
            }
            GermSpec::Explicit(p) => {
                map.serialize_entry("poly", &p.to_string())?;
                map.serialize_entry("vars", p.variables())?;
            }
            GermSpec::Direct(mu) => map.serialize_entry("mu", mu)?,
        }
        map.end()
    }
}

/// Accepts `{"brieskorn":[..]}`, `{"weighted":{"w":[..],"d":..}}`,
/// `{"poly":"..","vars":[..]}` or `{"mu":k}`.
impl<'de> Deserialize<'de> for GermSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Weighted {
            w: Vec<u64>,
            d: u64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            brieskorn: Option<Vec<u32>>,
            weighted: Option<Weighted>,
            poly: Option<String>,
            vars: Option<Vec<String>>,
            mu: Option<u64>,
        }
        let raw = Raw::deserialize(d)?;
        match raw {
            Raw { brieskorn: Some(e), weighted: None, poly: None, vars: None, mu: None } => {
                Ok(GermSpec::Brieskorn(e))
            }
            Raw { brieskorn: None, weighted: Some(w), poly: None, vars: None, mu: None } => {
                Ok(GermSpec::Weighted { weights: w.w, degree: w.d })
            }
            Raw { brieskorn: None, weighted: None, poly: Some(p), vars: Some(v), mu: None } => {
                parse_poly(&p, &v).map(GermSpec::Explicit).map_err(D::Error::custom)
            }
            Raw { brieskorn: None, weighted: None, poly: None, vars: None, mu: Some(mu) } => {
                Ok(GermSpec::Direct(mu))
            }
            _ => Err(D::Error::custom(
                "germ must be exactly one of {brieskorn}, {weighted}, {poly, vars}, {mu}",
            )),
        }
    }
}

/// A connected singular stratum with its generic transversal singularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSummary {
    pub label: String,
    pub dim: u32,
    pub transversal: GermSpec,
    /// Optional in input; when present it must agree with `dim == s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_top: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsolatedSingularity {
    pub label: String,
    pub germ: GermSpec,
}

/// Known global structure that unlocks an exact cohomology computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    /// V is the projective cone over the given plane curve.
    ProjectiveCone(Box<HypersurfaceProfile>),
    /// V is a quadric of the given rank.
    Quadric { rank: u32 },
}

fn default_r() -> u32 {
    1
}

fn is_default_r(r: &u32) -> bool {
    *r == 1
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// `V ⊂ CP^{n+1}` of degree `d` with `r` components and singular locus of dimension `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceProfile {
    pub schema: u32,
    pub n: u32,
    pub d: u32,
    #[serde(default = "default_r", skip_serializing_if = "is_default_r")]
    pub r: u32,
    pub s: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub isolated: Vec<IsolatedSingularity>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub q_homology_manifold: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_override: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
}

impl HypersurfaceProfile {
    pub fn smooth(n: u32, d: u32) -> Self {
        HypersurfaceProfile {
            schema: SCHEMA_VERSION,
            n,
            d,
            r: 1,
            s: -1,
            strata: Vec::new(),
            isolated: Vec::new(),
            q_homology_manifold: false,
            chi_override: None,
            construction: None,
        }
    }

    /// Isolated singularities with the given germs.
    pub fn with_isolated(n: u32, d: u32, r: u32, germs: Vec<GermSpec>) -> Self {
        let mut p = Self::smooth(n, d);
        p.r = r;
        p.s = 0;
        p.isolated = germs
            .into_iter()
            .enumerate()
            .map(|(i, germ)| IsolatedSingularity {
                label: format!("p{}", i + 1),
                germ,
            })
            .collect();
        p
    }

    /// Parses a JSON profile, checking the schema version first.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let found = value.get("schema").map(|v| v.as_u64());
        match found {
            Some(Some(v)) if v == u64::from(SCHEMA_VERSION) => {}
            Some(found) => return Err(ModelError::Schema { found }),
            None => return Err(ModelError::Schema { found: None }),
        }
        serde_json::from_value(value).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn is_smooth(&self) -> bool {
        self.s < 0
    }

    pub fn top_strata(&self) -> impl Iterator<Item = &StratumSummary> {
        let s = self.s;
        self.strata.iter().filter(move |st| st.dim as i32 == s)
    }

    /// Milnor numbers of the top-dimensional strata (s ≥ 1) or of the
    /// isolated points (s = 0), in input order.
    pub fn top_milnor_numbers(&self, degree_cap: u32) -> Result<Vec<u64>, String> {
        let germs: Vec<(&str, &GermSpec)> = if self.s == 0 {
            self.isolated.iter().map(|i| (i.label.as_str(), &i.germ)).collect()
        } else {
            self.top_strata()
                .map(|st| (st.label.as_str(), &st.transversal))
                .collect()
        };
        germs
            .into_iter()
            .map(|(label, g)| milnor(g, degree_cap).map(|r| r.mu).map_err(|e| format!("{label}: {e}")))
            .collect()
    }
}

/// One violated profile invariant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

fn violation(code: &'static str, message: impl Into<String>) -> Violation {
    Violation {
        code,
        message: message.into(),
    }
}

/// Every invariant the profile breaks, sorted. An empty list means valid.
pub fn validate(profile: &HypersurfaceProfile, degree_cap: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    let p = profile;
    let (n, s) = (p.n as i64, p.s as i64);
    if p.schema != SCHEMA_VERSION {
        out.push(violation("schema", format!("schema {} is not {SCHEMA_VERSION}", p.schema)));
    }
    if p.n < 1 {
        out.push(violation("n", "n must be at least 1"));
    }
    if p.d < 1 {
        out.push(violation("d", "degree d must be at least 1"));
    }
    if p.r < 1 {
        out.push(violation("r", "r must be at least 1"));
    }
    if s < -1 || s > n - 1 {
        out.push(violation("s-range", format!("s = {s} must lie in [-1, n-1] = [-1, {}]", n - 1)));
    }
    let no_singularities = p.strata.is_empty() && p.isolated.is_empty();
    if (s == -1) != no_singularities {
        out.push(violation(
            "smooth",
            "s = -1 exactly when there are no strata and no isolated points",
        ));
    }
    if s == 0 && (p.isolated.is_empty() || !p.strata.is_empty()) {
        out.push(violation(
            "isolated",
            "s = 0 requires isolated singular points and no strata",
        ));
    }
    if s != 0 && !p.isolated.is_empty() {
        out.push(violation(
            "isolated",
            "isolated points are only used when s = 0; model points on strata closures as dim-0 strata",
        ));
    }
    if s >= 1 && !p.strata.iter().any(|st| st.dim as i64 == s) {
        out.push(violation("top-stratum", format!("s = {s} needs a stratum of dimension {s}")));
    }
    if p.r >= 2 && s != n - 1 {
        out.push(violation(
            "components",
            format!("r = {} >= 2 requires s = n-1 = {}", p.r, n - 1),
        ));
    }
    if p.d == 1 && s != -1 {
        out.push(violation("hyperplane", "a degree-1 hypersurface is a smooth hyperplane"));
    }

    for st in &p.strata {
        let label = &st.label;
        if st.dim as i64 > s {
            out.push(violation(
                "stratum-dim",
                format!("stratum {label} has dim {} > s = {s}", st.dim),
            ));
        }
        if let Some(top) = st.is_top {
            if top != (st.dim as i64 == s) {
                out.push(violation("is-top", format!("stratum {label}: is_top disagrees with dim == s")));
            }
        }
        if let Err(e) = st.transversal.check() {
            out.push(violation("germ", format!("stratum {label}: {e}")));
        }
        let expected = n - st.dim as i64 + 1;
        if let Some(k) = st.transversal.num_variables() {
            if k as i64 != expected {
                out.push(violation(
                    "germ-vars",
                    format!("stratum {label}: transversal germ has {k} variables, expected n - dim + 1 = {expected}"),
                ));
            }
        }
    }
    for pt in &p.isolated {
        let label = &pt.label;
        if let Err(e) = pt.germ.check() {
            out.push(violation("germ", format!("point {label}: {e}")));
        }
        if let Some(k) = pt.germ.num_variables() {
            if k as i64 != n + 1 {
                out.push(violation(
                    "germ-vars",
                    format!("point {label}: germ has {k} variables, expected n + 1 = {}", n + 1),
                ));
            }
        }
    }

    let germ_errors = out.iter().any(|v| v.code == "germ" || v.code == "germ-vars");
    if s >= 0 && !germ_errors {
        let germs: Vec<(&String, &GermSpec)> = if s == 0 {
            p.isolated.iter().map(|i| (&i.label, &i.germ)).collect()
        } else {
            p.top_strata().map(|st| (&st.label, &st.transversal)).collect()
        };
        let mut total = 0u64;
        let mut complete = true;
        for (label, g) in germs {
            match milnor(g, degree_cap) {
                Ok(r) if r.mu == 0 => out.push(violation(
                    "mu",
                    format!("{label}: Milnor number 0 means the point is not singular"),
                )),
                Ok(r) => total = total.saturating_add(r.mu),
                Err(e) => {
                    complete = false;
                    out.push(violation("mu", format!("{label}: {e}")));
                }
            }
        }
        if complete && s == n - 1 && u64::from(p.r) > total.saturating_add(1) {
            out.push(violation(
                "codim-one",
                format!(
                    "r = {} exceeds 1 + sum of transversal Milnor numbers = {}",
                    p.r,
                    total.saturating_add(1)
                ),
            ));
        }
    }

    match &p.construction {
        None => {}
        Some(Construction::Quadric { rank }) => {
            let q = *rank as i64;
            if p.d != 2 {
                out.push(violation("construction", "a quadric has degree 2"));
            }
            let expected_s = if q == n + 2 { -1 } else { n + 1 - q };
            if !(4..=n + 1).contains(&q) && q != n + 2 {
                out.push(violation("construction", format!("quadric rank {q} outside 4 <= q <= n+1")));
            } else if expected_s != s {
                out.push(violation(
                    "construction",
                    format!("quadric of rank {q} has s = {expected_s}, profile says {s}"),
                ));
            }
        }
        Some(Construction::ProjectiveCone(base)) => {
            if base.n != 1 {
                out.push(violation("construction", "cone base must be a plane curve (n = 1)"));
            }
            if p.n != 2 {
                out.push(violation("construction", "a cone over a plane curve is a surface (n = 2)"));
            }
            if base.d != p.d || base.r != p.r {
                out.push(violation("construction", "cone and base must share d and r"));
            }
            let expected_s = match (base.s, base.d) {
                (_, 1) => -1,
                (-1, _) => 0,
                _ => 1,
            };
            if expected_s != s {
                out.push(violation(
                    "construction",
                    format!("cone over this curve has s = {expected_s}, profile says {s}"),
                ));
            }
            for v in validate(base, degree_cap) {
                out.push(violation("construction", format!("base curve: [{}] {}", v.code, v.message)));
            }
        }
    }

    out.sort();
    out.dedup();
    out
}

/// Fails with every violation when the profile is invalid.
pub fn ensure_valid(profile: &HypersurfaceProfile, degree_cap: u32) -> Result<(), ModelError> {
    let v = validate(profile, degree_cap);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Invalid(v))
    }
}

/// Profile of the quadric `V = {x^T Q x = 0} ⊂ CP^{n+1}` together with `rank(Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricProfile {
    pub rank: usize,
    pub profile: HypersurfaceProfile,
}

/// Computes `q = rank(Q)` exactly. Full rank gives the smooth quadric; for
/// `4 <= q <= n+1` the singular locus is a linear space of dimension
/// `n + 1 - q` with transversal type A_1.
pub fn quadric_profile(n: u32, q_matrix: &RatMatrix) -> Result<QuadricProfile, ModelError> {
    let expected = n as usize + 2;
    if q_matrix.size() != expected {
        return Err(ModelError::WrongSize {
            expected,
            found: q_matrix.size(),
        });
    }
    if !q_matrix.is_symmetric() {
        return Err(ModelError::NonSymmetric);
    }
    if q_matrix.is_zero() {
        return Err(ModelError::ZeroMatrix);
    }
    let rank = q_matrix.rank();
    let mut profile = HypersurfaceProfile::smooth(n, 2);
    profile.construction = Some(Construction::Quadric { rank: rank as u32 });
    if rank == expected {
        return Ok(QuadricProfile { rank, profile });
    }
    if rank < 4 || rank > n as usize + 1 {
        return Err(ModelError::RankOutOfRange(rank));
    }
    let s = n as usize + 1 - rank;
    profile.s = s as i32;
    let a1 = GermSpec::Brieskorn(vec![2; rank]);
    if s == 0 {
        profile.isolated.push(IsolatedSingularity {
            label: "vertex".into(),
            germ: a1,
        });
    } else {
        profile.strata.push(StratumSummary {
            label: "Sigma".into(),
            dim: s as u32,
            transversal: a1,
            is_top: Some(true),
        });
    }
    Ok(QuadricProfile { rank, profile })
}

/// Groups violations by code, for compact reporting.
pub fn violation_summary(v: &[Violation]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for x in v {
        *m.entry(x.code).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::DEFAULT_DEGREE_CAP;

    const CAP: u32 = DEFAULT_DEGREE_CAP;

    fn threefold() -> HypersurfaceProfile {
        HypersurfaceProfile::from_json(
            r#"{
              "schema": 1, "n": 3, "d": 3, "s": 1,
              "strata": [
                {"label": "S1", "dim": 1, "transversal": {"brieskorn": [2, 3, 3]}},
                {"label": "S0", "dim": 0,
                 "transversal": {"poly": "y^2*z + x^3 + x^2 + v^3", "vars": ["x","y","z","v"]}}
              ],
              "q_homology_manifold": true
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn smooth_profile_is_valid() {
        assert!(validate(&HypersurfaceProfile::smooth(2, 2), CAP).is_empty());
    }

    #[test]
    fn components_need_codimension_one() {
        let mut p = HypersurfaceProfile::with_isolated(2, 3, 3, vec![GermSpec::Brieskorn(vec![2, 2, 2])]);
        p.s = 0;
        let v = validate(&p, CAP);
        assert!(v.iter().any(|v| v.code == "components"), "{v:?}");
    }

    #[test]
    fn threefold_profile_is_valid() {
        assert_eq!(validate(&threefold(), CAP), vec![]);
    }

    #[test]
    fn validation_is_order_independent_and_idempotent() {
        let mut p = threefold();
        p.strata.push(StratumSummary {
            label: "bad".into(),
            dim: 2,
            transversal: GermSpec::Brieskorn(vec![1]),
            is_top: Some(true),
        });
        let a = validate(&p, CAP);
        p.strata.reverse();
        let b = validate(&p, CAP);
        assert_eq!(a, b);
        assert_eq!(a, validate(&p, CAP));
        assert!(!a.is_empty());
    }

    #[test]
    fn s_must_match_strata() {
        let mut p = threefold();
        p.s = 2;
        let v = validate(&p, CAP);
        assert!(v.iter().any(|v| v.code == "top-stratum"));
        let mut p = HypersurfaceProfile::smooth(2, 3);
        p.s = 0;
        let v = validate(&p, CAP);
        assert!(v.iter().any(|v| v.code == "smooth"));
    }

    #[test]
    fn non_isolated_top_germ_is_reported() {
        let mut p = threefold();
        p.strata[0].transversal =
            GermSpec::Explicit(parse_poly("x^2*y", &["x".into(), "y".into(), "z".into()]).unwrap());
        let v = validate(&p, 6);
        assert!(v.iter().any(|v| v.code == "mu"), "{v:?}");
    }

    #[test]
    fn germ_json_forms() {
        for text in [
            r#"{"brieskorn":[2,3,3]}"#,
            r#"{"weighted":{"w":[2,3,3],"d":6}}"#,
            r#"{"poly":"x^2 + y^3","vars":["x","y"]}"#,
            r#"{"mu":7}"#,
        ] {
            let g: GermSpec = serde_json::from_str(text).unwrap();
            let back = serde_json::to_string(&g).unwrap();
            assert_eq!(serde_json::from_str::<GermSpec>(&back).unwrap(), g);
        }
        assert!(serde_json::from_str::<GermSpec>(r#"{"mu":1,"brieskorn":[2]}"#).is_err());
        assert!(serde_json::from_str::<GermSpec>(r#"{}"#).is_err());
    }

    #[test]
    fn schema_checks() {
        assert_eq!(
            HypersurfaceProfile::from_json(r#"{"n":2,"d":2,"s":-1}"#),
            Err(ModelError::Schema { found: None })
        );
        assert_eq!(
            HypersurfaceProfile::from_json(r#"{"schema":2,"n":2,"d":2,"s":-1}"#),
            Err(ModelError::Schema { found: Some(2) })
        );
        assert!(matches!(HypersurfaceProfile::from_json(""), Err(ModelError::Json(_))));
        assert!(matches!(
            HypersurfaceProfile::from_json(r#"{"schema":1,"n":2,"d":2,"s":-1,"extra":0}"#),
            Err(ModelError::Json(_))
        ));
    }

    #[test]
    fn quadric_examples() {
        let q = quadric_profile(4, &RatMatrix::diagonal(&[1, 1, 1, 1, 0, 0])).unwrap();
        assert_eq!(q.rank, 4);
        assert_eq!(q.profile.s, 1);
        assert_eq!(q.profile.top_milnor_numbers(CAP).unwrap(), vec![1]);
        assert!(validate(&q.profile, CAP).is_empty());

        let q = quadric_profile(2, &RatMatrix::identity(4)).unwrap();
        assert_eq!((q.rank, q.profile.s), (4, -1));
        assert!(validate(&q.profile, CAP).is_empty());

        let q = quadric_profile(3, &RatMatrix::diagonal(&[1, 1, 1, 1, 0])).unwrap();
        assert_eq!((q.rank, q.profile.s), (4, 0));
        assert_eq!(q.profile.isolated.len(), 1);
        assert!(validate(&q.profile, CAP).is_empty());

        assert_eq!(
            quadric_profile(4, &RatMatrix::diagonal(&[1, 1, 1, 0, 0, 0])),
            Err(ModelError::RankOutOfRange(3))
        );
        let mut m = RatMatrix::identity(4);
        m.set(0, 1, crate::poly::Rational::from_integer(1.into()));
        assert_eq!(quadric_profile(2, &m), Err(ModelError::NonSymmetric));
        assert_eq!(quadric_profile(2, &RatMatrix::zeros(4)), Err(ModelError::ZeroMatrix));
        assert!(matches!(
            quadric_profile(3, &RatMatrix::identity(4)),
            Err(ModelError::WrongSize { .. })
        ));
    }
}
