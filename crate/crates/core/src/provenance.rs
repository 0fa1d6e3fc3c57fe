//! Registry of the statements every emitted group is justified by.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! citations {
    ($($variant:ident => $text:literal,)*) => {
        /// A justification attached to a table row. Renders as a fixed string;
        /// parsing accepts only strings from this registry.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Citation {
            $($variant,)*
        }

        impl Citation {
            pub const ALL: &'static [Citation] = &[$(Citation::$variant,)*];

            pub fn text(self) -> &'static str {
                match self {
                    $(Citation::$variant => $text,)*
                }
            }
        }
    };
}

citations! {
    Lefschetz => "Lefschetz hyperplane theorem: H^k(V) = H^k(CP^{n+1}) for k < n",
    Kato => "Kato isomorphism: H^k(V) = H^k(CP^{n+1}) for n+s+2 <= k <= 2n, restriction is multiplication by d in even degrees",
    SmoothHypersurface => "smooth hypersurface: H^k(V) = H^k(CP^n) for k != n, b_n = ((d-1)^{n+2} + (-1)^{n+1})/d + (3(-1)^n + 1)/2, all free",
    MiddleDegree => "specialization sequence: H^n(V) = ker(alpha^n) is free and b_n(V) <= b_n(V_t)",
    SpecializationBound => "specialization sequence: b_k(V) <= rank H^{k-1}_phi(V) + b_k(CP^n) for n+1 <= k <= n+s+1",
    TransversalBound => "top-stratum bound: b_{n+s+1}(V) <= 1 + sum of transversal Milnor numbers, strict for n+s even; applied as b_{n+s+1}(CP^n) + sum",
    TopComponents => "top cohomology: H^{2n}(V) = Z^r with r the number of irreducible components",
    IsolatedSequence => "isolated singularities: H^n_phi(V) = direct sum of reduced cohomology of the Milnor fibers, of rank sum mu_x; five-term specialization sequence",
    PlaneCurve => "plane curve: H^0 = Z, H^2 = Z^r, H^1 free of rank r + 1 + d^2 - 3d - sum mu_x",
    QuadricCone => "singular quadric as a cone over a smooth quadric W_q: H^k = H^k(Sigma) for k <= 2s, 0 for k = 2s+1, H^{k-2-2s}(W_q) for k >= 2s+2",
    ProjectiveCone => "projective cone on a plane curve C: H^k(V) = H^{k-2}(C) for k >= 2",
    RationalHomologyManifold => "rational homology manifold: b_i(V) = b_i(CP^n) for i != n, b_n(V) from the Euler characteristic",
    ProjectiveSpace => "cohomology of complex projective space: Z in even degrees up to twice the dimension, 0 otherwise",
    VanishingConcentration => "vanishing cohomology H^k_phi(V) vanishes for k outside [n, n+s]",
    VanishingBottomFree => "vanishing cohomology H^n_phi(V) is free",
    VanishingTopBound => "rank H^{n+s}_phi(V) <= sum of transversal Milnor numbers over top-dimensional strata",
    VanishingHomologyConcentration => "vanishing homology H_k(V_D, V_t) vanishes for k outside [n+1, n+s+1], the top one is free",
    ExactSequence => "rank interval propagated through the specialization exact sequence",
    HomologyOutsideWindow => "homology: H_k(V) = H_k(CP^n) for k <= n-1 and k >= n+s+2",
    HomologyMiddle => "homology: H_n(V) = coker(alpha_n)",
    HomologyTopFree => "homology: H_{n+s+1}(V) is free",
    HomologyWindow => "homology: ranks agree with cohomology by universal coefficients; torsion not determined",
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a registered citation")]
pub struct UnknownCitation(pub String);

impl FromStr for Citation {
    type Err = UnknownCitation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Citation::ALL
            .iter()
            .copied()
            .find(|c| c.text() == s)
            .ok_or_else(|| UnknownCitation(s.to_string()))
    }
}

impl Serialize for Citation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.text())
    }
}

impl<'de> Deserialize<'de> for Citation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_texts_are_distinct_and_round_trip() {
        for (i, c) in Citation::ALL.iter().enumerate() {
            assert!(!c.text().is_empty());
            assert_eq!(c.text().parse::<Citation>().unwrap(), *c);
            assert!(Citation::ALL[..i].iter().all(|o| o.text() != c.text()));
        }
        assert!("made up".parse::<Citation>().is_err());
    }
}
