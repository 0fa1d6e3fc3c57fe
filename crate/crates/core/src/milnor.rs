//! Milnor numbers of isolated hypersurface singularity germs.
//!
//! Closed forms cover Brieskorn–Pham and weighted-homogeneous germs. The jet
//! oracle works directly from an explicit germ: it computes the dimension of
//! `Q[x] / (J(f) + m^N)` by exact elimination and waits for it to stabilize.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Monomial, MultiPoly, Rational};

/// Jet oracle default for the largest truncation degree tried.
pub const DEFAULT_DEGREE_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("Brieskorn exponent {value} at position {index} is below 2")]
    ExponentTooSmall { index: usize, value: u32 },
    #[error("Brieskorn germ needs at least one exponent")]
    EmptyExponents,
    #[error("weight {weight} at position {index} must satisfy 0 < w <= {degree}")]
    BadWeight { index: usize, weight: u64, degree: u64 },
    #[error("weighted data gives non-integer Milnor number {0}")]
    NonIntegerMilnor(String),
    #[error("Milnor number overflows 64 bits")]
    Overflow,
    #[error("germ has nonzero constant term; it does not vanish at the origin")]
    NotAtOrigin,
    #[error("germ is constant; its Jacobian ideal is empty")]
    EmptyJacobian,
    #[error("degree cap {0} is below 2")]
    CapTooSmall(u32),
    #[error("jet algebra did not stabilize by degree {0} (non-isolated singularity or cap too small)")]
    NotStabilized(u32),
    #[error("Milnor number cross-check mismatch: {0} vs {1}")]
    CrossCheckMismatch(u64, u64),
}

/// How a germ is described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GermSpec {
    Brieskorn(Vec<u32>),
    Weighted { weights: Vec<u64>, degree: u64 },
    Explicit(MultiPoly),
    Direct(u64),
}

impl GermSpec {
    /// Number of variables the germ lives in, when the description fixes it.
    pub fn num_variables(&self) -> Option<usize> {
        match self {
            GermSpec::Brieskorn(e) => Some(e.len()),
            GermSpec::Weighted { weights, .. } => Some(weights.len()),
            GermSpec::Explicit(p) => Some(p.nvars()),
            GermSpec::Direct(_) => None,
        }
    }

    /// Checks the description without computing anything expensive.
    pub fn check(&self) -> Result<(), MilnorError> {
        match self {
            GermSpec::Brieskorn(e) => check_exponents(e),
            GermSpec::Weighted { weights, degree } => check_weights(weights, *degree),
            GermSpec::Explicit(p) => {
                if !p.constant_term().is_zero() {
                    Err(MilnorError::NotAtOrigin)
                } else {
                    Ok(())
                }
            }
            GermSpec::Direct(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MilnorMethod {
    Brieskorn,
    WeightedHomogeneous,
    JetOracle,
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorResult {
    pub mu: u64,
    pub method: MilnorMethod,
    #[serde(rename = "stabilization_degree")]
    pub oracle_stabilization_degree: Option<u32>,
}

fn check_exponents(exponents: &[u32]) -> Result<(), MilnorError> {
    if exponents.is_empty() {
        return Err(MilnorError::EmptyExponents);
    }
    for (index, &value) in exponents.iter().enumerate() {
        if value < 2 {
            return Err(MilnorError::ExponentTooSmall { index, value });
        }
    }
    Ok(())
}

fn check_weights(weights: &[u64], degree: u64) -> Result<(), MilnorError> {
    for (index, &weight) in weights.iter().enumerate() {
        if weight == 0 || weight > degree {
            return Err(MilnorError::BadWeight {
                index,
                weight,
                degree,
            });
        }
    }
    Ok(())
}

/// `mu = prod (a_i - 1)` for `x_1^{a_1} + ... + x_k^{a_k}`.
pub fn milnor_brieskorn(exponents: &[u32]) -> Result<MilnorResult, MilnorError> {
    check_exponents(exponents)?;
    let mu = exponents.iter().try_fold(1u64, |acc, &a| {
        acc.checked_mul(u64::from(a - 1)).ok_or(MilnorError::Overflow)
    })?;
    Ok(MilnorResult {
        mu,
        method: MilnorMethod::Brieskorn,
        oracle_stabilization_degree: None,
    })
}

/// Milnor–Orlik: `mu = prod (d - w_i) / w_i`, required to be an integer.
pub fn milnor_weighted(weights: &[u64], degree: u64) -> Result<MilnorResult, MilnorError> {
    check_weights(weights, degree)?;
    let product = weights.iter().fold(BigRational::one(), |acc, &w| {
        acc * BigRational::new(BigInt::from(degree - w), BigInt::from(w))
    });
    if !product.is_integer() {
        return Err(MilnorError::NonIntegerMilnor(product.to_string()));
    }
    let mu = product.to_integer().to_u64().ok_or(MilnorError::Overflow)?;
    Ok(MilnorResult {
        mu,
        method: MilnorMethod::WeightedHomogeneous,
        oracle_stabilization_degree: None,
    })
}

/// Row-echelon workspace over the rationals. Rows are sparse and keyed by
/// their leading (smallest) column, normalized so that entry is 1.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<usize, BTreeMap<usize, Rational>>,
}

impl Echelon {
    fn reduce(&self, mut row: BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut cursor = 0;
        loop {
            let next = row
                .range(cursor..)
                .find(|(col, _)| self.pivots.contains_key(col))
                .map(|(col, c)| (*col, c.clone()));
            let Some((col, factor)) = next else {
                return row;
            };
            for (pc, pv) in &self.pivots[&col] {
                let entry = row.entry(*pc).or_insert_with(Rational::zero);
                *entry -= &factor * pv;
                if entry.is_zero() {
                    row.remove(pc);
                }
            }
            cursor = col + 1;
        }
    }

    fn insert(&mut self, row: BTreeMap<usize, Rational>) {
        let row = self.reduce(row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return;
        };
        let inv = lead_val.recip();
        let row = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, row);
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

struct TruncatedAlgebra {
    dim: usize,
    echelon: Echelon,
    index: HashMap<Monomial, usize>,
}

/// `Q[x] / (J + m^bound)` as the span of truncated multiples of the generators.
fn truncated_algebra(generators: &[MultiPoly], nvars: usize, bound: u32) -> TruncatedAlgebra {
    let mut monomials = Vec::new();
    for deg in 0..bound {
        monomials.extend(Monomial::all_of_degree(nvars, deg));
    }
    let index: HashMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut echelon = Echelon::default();
    for g in generators {
        let Some(order) = g.order() else { continue };
        for m in &monomials {
            if m.degree() + order >= u64::from(bound) {
                continue;
            }
            let mut row = BTreeMap::new();
            for (gm, c) in g.terms() {
                let prod = gm.checked_mul(m).expect("exponents bounded by degree cap");
                if let Some(&col) = index.get(&prod) {
                    row.insert(col, c.clone());
                }
            }
            echelon.insert(row);
        }
    }
    TruncatedAlgebra {
        dim: monomials.len() - echelon.rank(),
        echelon,
        index,
    }
}

/// Milnor number of an explicit germ from its local Jacobian algebra.
///
/// For N = 1, 2, ... the dimension of `Q[x]/(J + m^N)` is computed. It is
/// nondecreasing in N. Once two consecutive values agree and every monomial of
/// degree N-1 lies in `J + m^N`, Nakayama's lemma gives `m^{N-1} ⊆ J` locally,
/// so the value is the local algebra dimension.
pub fn milnor_jet_oracle(germ: &MultiPoly, degree_cap: u32) -> Result<MilnorResult, MilnorError> {
    if degree_cap < 2 {
        return Err(MilnorError::CapTooSmall(degree_cap));
    }
    if !germ.constant_term().is_zero() {
        return Err(MilnorError::NotAtOrigin);
    }
    let jacobian: Vec<MultiPoly> = germ.jacobian().into_iter().filter(|g| !g.is_zero()).collect();
    if jacobian.is_empty() {
        return Err(MilnorError::EmptyJacobian);
    }
    let nvars = germ.nvars();
    let mut previous = truncated_algebra(&jacobian, nvars, 1).dim;
    for bound in 2..=degree_cap {
        let algebra = truncated_algebra(&jacobian, nvars, bound);
        assert!(
            algebra.dim >= previous,
            "truncated Jacobian algebra dimension decreased from {previous} to {}",
            algebra.dim
        );
        if algebra.dim == previous && top_degree_reducible(&algebra, nvars, bound - 1) {
            return Ok(MilnorResult {
                mu: algebra.dim as u64,
                method: MilnorMethod::JetOracle,
                oracle_stabilization_degree: Some(bound),
            });
        }
        previous = algebra.dim;
    }
    Err(MilnorError::NotStabilized(degree_cap))
}

fn top_degree_reducible(algebra: &TruncatedAlgebra, nvars: usize, degree: u32) -> bool {
    Monomial::all_of_degree(nvars, degree).iter().all(|m| {
        let col = algebra.index[m];
        let row = BTreeMap::from([(col, Rational::one())]);
        algebra.echelon.reduce(row).is_empty()
    })
}

/// Exponents when `germ` is a sum of pure powers, each variable appearing in
/// exactly one term with exponent at least 2.
pub fn recognize_brieskorn(germ: &MultiPoly) -> Option<Vec<u32>> {
    let mut exponents = vec![0u32; germ.nvars()];
    for (m, _) in germ.terms() {
        let mut nonzero = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0);
        let (slot, &e) = nonzero.next()?;
        if nonzero.next().is_some() || e < 2 || exponents[slot] != 0 {
            return None;
        }
        exponents[slot] = e;
    }
    if germ.nvars() == 0 || exponents.contains(&0) {
        return None;
    }
    Some(exponents)
}

/// Dispatches on the germ description. Explicit Brieskorn–Pham germs are
/// computed both by closed form and by the jet oracle, which must agree.
pub fn milnor(spec: &GermSpec, degree_cap: u32) -> Result<MilnorResult, MilnorError> {
    match spec {
        GermSpec::Brieskorn(e) => milnor_brieskorn(e),
        GermSpec::Weighted { weights, degree } => milnor_weighted(weights, *degree),
        GermSpec::Direct(mu) => Ok(MilnorResult {
            mu: *mu,
            method: MilnorMethod::Direct,
            oracle_stabilization_degree: None,
        }),
        GermSpec::Explicit(germ) => {
            let oracle = milnor_jet_oracle(germ, degree_cap)?;
            if let Some(exponents) = recognize_brieskorn(germ) {
                let closed = milnor_brieskorn(&exponents)?;
                if closed.mu != oracle.mu {
                    return Err(MilnorError::CrossCheckMismatch(closed.mu, oracle.mu));
                }
            }
            Ok(oracle)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn vars(n: usize) -> Vec<String> {
        ["x", "y", "z", "v", "w"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn germ(text: &str, n: usize) -> MultiPoly {
        parse_poly(text, &vars(n)).unwrap()
    }

    #[test]
    fn brieskorn_examples() {
        assert_eq!(milnor_brieskorn(&[2, 2, 2]).unwrap().mu, 1);
        assert_eq!(milnor_brieskorn(&[2, 3, 3]).unwrap().mu, 4);
        for k in 1..=5u32 {
            assert_eq!(milnor_brieskorn(&[k + 1, 2]).unwrap().mu, u64::from(k));
        }
        assert_eq!(
            milnor_brieskorn(&[2, 1]),
            Err(MilnorError::ExponentTooSmall { index: 1, value: 1 })
        );
        assert_eq!(milnor_brieskorn(&[]), Err(MilnorError::EmptyExponents));
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(milnor_weighted(&[1, 1], 3).unwrap().mu, 4);
        assert_eq!(milnor_weighted(&[5, 5, 5], 5).unwrap().mu, 0);
        assert_eq!(milnor_weighted(&[3, 2, 2], 6).unwrap().mu, 4);
        assert!(matches!(
            milnor_weighted(&[2, 2], 3),
            Err(MilnorError::NonIntegerMilnor(_))
        ));
        assert!(matches!(milnor_weighted(&[0, 1], 3), Err(MilnorError::BadWeight { .. })));
        assert!(matches!(milnor_weighted(&[4], 3), Err(MilnorError::BadWeight { .. })));
    }

    #[test]
    fn jet_oracle_examples() {
        let a1 = milnor_jet_oracle(&germ("x^2+y^2", 2), 16).unwrap();
        assert_eq!(a1.mu, 1);
        assert!(a1.oracle_stabilization_degree.unwrap() <= 3);
        assert_eq!(milnor_jet_oracle(&germ("x^3+y^2", 2), 16).unwrap().mu, 2);
        assert_eq!(milnor_jet_oracle(&germ("y^2+x^3+z^3", 3), 16).unwrap().mu, 4);
    }

    #[test]
    fn jet_oracle_a_k_series() {
        for k in 1..=5u32 {
            let f = germ(&format!("x^{}+y^2", k + 1), 2);
            assert_eq!(milnor_jet_oracle(&f, 16).unwrap().mu, u64::from(k));
        }
    }

    #[test]
    fn jet_oracle_non_brieskorn_germs() {
        // D_4: x^2 y + y^3 has mu = 4; E_6: x^3 + y^4 has mu = 6.
        assert_eq!(milnor_jet_oracle(&germ("x^2*y + y^3", 2), 16).unwrap().mu, 4);
        assert_eq!(milnor_jet_oracle(&germ("x^3 + y^4", 2), 16).unwrap().mu, 6);
        // Node with a non-diagonal quadratic part.
        assert_eq!(milnor_jet_oracle(&germ("x*y", 2), 16).unwrap().mu, 1);
        // Smooth germ.
        assert_eq!(milnor_jet_oracle(&germ("x + y^2", 2), 16).unwrap().mu, 0);
    }

    #[test]
    fn jet_oracle_errors() {
        assert_eq!(
            milnor_jet_oracle(&germ("x^2*y", 2), 8),
            Err(MilnorError::NotStabilized(8))
        );
        assert_eq!(
            milnor_jet_oracle(&germ("0", 2), 8),
            Err(MilnorError::EmptyJacobian)
        );
        assert_eq!(
            milnor_jet_oracle(&germ("x^2 + 1", 2), 8),
            Err(MilnorError::NotAtOrigin)
        );
        assert_eq!(
            milnor_jet_oracle(&germ("x^2", 1), 1),
            Err(MilnorError::CapTooSmall(1))
        );
    }

    #[test]
    fn dispatch() {
        assert_eq!(milnor(&GermSpec::Brieskorn(vec![2, 3, 3]), 16).unwrap().mu, 4);
        let r = milnor(&GermSpec::Explicit(germ("x^2+y^3+z^3", 3)), 16).unwrap();
        assert_eq!(r.mu, 4);
        assert_eq!(r.method, MilnorMethod::JetOracle);
        let r = milnor(&GermSpec::Direct(7), 16).unwrap();
        assert_eq!((r.mu, r.method), (7, MilnorMethod::Direct));
    }

    #[test]
    fn brieskorn_recognizer() {
        assert_eq!(recognize_brieskorn(&germ("3*x^2 - y^5", 2)), Some(vec![2, 5]));
        assert_eq!(recognize_brieskorn(&germ("x^2 + y^2", 3)), None);
        assert_eq!(recognize_brieskorn(&germ("x^2 + x^3 + y^2", 2)), None);
        assert_eq!(recognize_brieskorn(&germ("x*y", 2)), None);
        assert_eq!(recognize_brieskorn(&germ("x + y^2", 2)), None);
    }
}
