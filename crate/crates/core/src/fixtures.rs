//! Worked example profiles shared by tests, the acceptance suite and the CLI corpus.

use crate::linalg::RatMatrix;
use crate::milnor::GermSpec;
use crate::model::{quadric_profile, Construction, HypersurfaceProfile, StratumSummary};
use crate::poly::parse_poly;

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn explicit(text: &str, names: &[&str]) -> GermSpec {
    GermSpec::Explicit(parse_poly(text, &vars(names)).expect("fixture polynomial parses"))
}

/// `y^2 z + x^3 + t x^2 + v^3 = 0` in `CP^4`: singular along a line, with a
/// special point on it where the germ is not isolated.
pub fn cubic_threefold_with_line() -> HypersurfaceProfile {
    let mut p = HypersurfaceProfile::smooth(3, 3);
    p.s = 1;
    p.strata = vec![
        StratumSummary {
            label: "S1".into(),
            dim: 1,
            transversal: GermSpec::Brieskorn(vec![2, 3, 3]),
            is_top: Some(true),
        },
        StratumSummary {
            label: "S0".into(),
            dim: 0,
            transversal: explicit("y^2*z + x^3 + x^2 + v^3", &["x", "y", "z", "v"]),
            is_top: Some(false),
        },
    ];
    p
}

/// The same threefold marked as a rational homology manifold with `chi = 4`.
pub fn cubic_threefold_rational_manifold() -> HypersurfaceProfile {
    let mut p = cubic_threefold_with_line();
    p.q_homology_manifold = true;
    p.chi_override = Some(4);
    p
}

/// `xyz = 0` in `CP^2`: three lines meeting in three nodes.
pub fn triangle_curve() -> HypersurfaceProfile {
    HypersurfaceProfile::with_isolated(1, 3, 3, vec![GermSpec::Brieskorn(vec![2, 2]); 3])
}

/// `xyz = 0` in `CP^3`, the projective cone over [`triangle_curve`].
pub fn triangle_cone() -> HypersurfaceProfile {
    let mut p = HypersurfaceProfile::smooth(2, 3);
    p.r = 3;
    p.s = 1;
    for label in ["L1", "L2", "L3"] {
        p.strata.push(StratumSummary {
            label: label.into(),
            dim: 1,
            transversal: GermSpec::Brieskorn(vec![2, 2]),
            is_top: Some(true),
        });
    }
    p.strata.push(StratumSummary {
        label: "vertex".into(),
        dim: 0,
        transversal: explicit("x*y*z", &["x", "y", "z"]),
        is_top: Some(false),
    });
    p.construction = Some(Construction::ProjectiveCone(Box::new(triangle_curve())));
    p
}

/// Quadric `x_0^2 + ... + x_{q-1}^2 = 0` in `CP^{n+1}`.
pub fn quadric(n: u32, q: u32) -> HypersurfaceProfile {
    let diag: Vec<i64> = (0..n + 2).map(|i| i64::from(i < q)).collect();
    quadric_profile(n, &RatMatrix::diagonal(&diag))
        .expect("rank within range")
        .profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::DEFAULT_DEGREE_CAP;
    use crate::model::validate;

    #[test]
    fn fixtures_are_valid() {
        for p in [
            cubic_threefold_with_line(),
            cubic_threefold_rational_manifold(),
            triangle_curve(),
            triangle_cone(),
            quadric(3, 4),
            quadric(5, 4),
            quadric(4, 5),
            quadric(3, 5),
        ] {
            assert_eq!(validate(&p, DEFAULT_DEGREE_CAP), vec![], "{}", p.to_json());
        }
    }
}
