//! Multivariate polynomials with exact rational coefficients.
//!
//! A [`MultiPoly`] carries its ordered variable list. Operations that combine
//! two polynomials require identical variable lists and fail otherwise.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::parse_poly;

/// Exact rational number, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("exponent overflow at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("chart index {index} out of range for {nvars} variables")]
    ChartOutOfRange { index: usize, nvars: usize },
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then exponents compared left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Product of two monomials; `None` on exponent overflow.
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// All monomials in `nvars` variables of total degree exactly `degree`,
    /// in descending graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn fill(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if slot + 1 == cur.len() {
                cur[slot] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[slot] = e;
                fill(slot + 1, left - e, cur, out);
            }
            cur[slot] = 0;
        }
        if nvars == 0 {
            return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        fill(0, degree, &mut vec![0; nvars], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over the rationals in a fixed, named list of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

fn check_variables(vars: &[String]) -> Result<(), PolyError> {
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(PolyError::InvalidVariable(v.clone()));
        }
        if vars[..i].contains(v) {
            return Err(PolyError::DuplicateVariable(v.clone()));
        }
    }
    Ok(())
}

impl MultiPoly {
    pub fn zero(variables: Vec<String>) -> Result<Self, PolyError> {
        check_variables(&variables)?;
        Ok(MultiPoly {
            variables,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(variables: Vec<String>, c: Rational) -> Result<Self, PolyError> {
        let mut p = Self::zero(variables)?;
        let one = Monomial::one(p.nvars());
        p.add_term(one, c);
        Ok(p)
    }

    /// The polynomial consisting of the single variable at `index`.
    pub fn var(variables: Vec<String>, index: usize) -> Result<Self, PolyError> {
        let mut p = Self::zero(variables)?;
        if index >= p.nvars() {
            return Err(PolyError::ChartOutOfRange {
                index,
                nvars: p.nvars(),
            });
        }
        p.add_term(Monomial::var(p.nvars(), index), Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(variables: Vec<String>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(variables)?;
        for (m, c) in terms {
            assert_eq!(m.len(), p.nvars(), "monomial length must match variable count");
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.order()
    }

    fn same_vars(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.variables == other.variables {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.variables.clone(),
                right: other.variables.clone(),
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.same_vars(other)?;
        let mut out = MultiPoly {
            variables: self.variables.clone(),
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma
                    .checked_mul(mb)
                    .ok_or(PolyError::ExponentOverflow { offset: 0 })?;
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> MultiPoly {
        if factor.is_zero() {
            return MultiPoly {
                variables: self.variables.clone(),
                terms: BTreeMap::new(),
            };
        }
        MultiPoly {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Partial derivative with respect to the variable at `index`.
    pub fn derivative(&self, index: usize) -> MultiPoly {
        let mut out = MultiPoly {
            variables: self.variables.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.0.clone();
            dm[index] -= 1;
            out.add_term(Monomial(dm), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Partial derivatives in variable order.
    pub fn jacobian(&self) -> Vec<MultiPoly> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Sets the variable at `chart` to 1 and drops it from the variable list.
    pub fn dehomogenize(&self, chart: usize) -> Result<MultiPoly, PolyError> {
        if chart >= self.nvars() {
            return Err(PolyError::ChartOutOfRange {
                index: chart,
                nvars: self.nvars(),
            });
        }
        let mut variables = self.variables.clone();
        variables.remove(chart);
        let mut out = MultiPoly {
            variables,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(chart);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate_below(&self, bound: u64) -> MultiPoly {
        MultiPoly {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

/// Renders in descending graded-lex order, e.g. `x^3 + x^2*t - (1/2)*y`.
/// The output parses back to the same polynomial.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            for (v, &e) in self.variables.iter().zip(m.exponents()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            if factors.is_empty() {
                write_coefficient(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_coefficient(f, &abs)?;
                    f.write_str("*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, names: &[&str]) -> MultiPoly {
        parse_poly(text, &vars(names)).unwrap()
    }

    #[test]
    fn total_degree_examples() {
        assert_eq!(p("x^3 + y^2*z", &["x", "y", "z"]).total_degree(), Some(3));
        assert_eq!(p("x*y*z", &["x", "y", "z"]).total_degree(), Some(3));
        assert_eq!(p("0", &["x", "y"]).total_degree(), None);
    }

    #[test]
    fn homogeneity_examples() {
        assert!(p("y^2*z + x^3 + t*x^2 + v^3", &["x", "y", "z", "t", "v"]).is_homogeneous());
        assert!(!p("x^2 + y", &["x", "y"]).is_homogeneous());
        assert!(p("0", &["x"]).is_homogeneous());
    }

    #[test]
    fn jacobian_examples() {
        let j = p("x^2+y^2", &["x", "y"]).jacobian();
        assert_eq!(j, vec![p("2*x", &["x", "y"]), p("2*y", &["x", "y"])]);
        let j = p("x^3+y^2", &["x", "y"]).jacobian();
        assert_eq!(j, vec![p("3*x^2", &["x", "y"]), p("2*y", &["x", "y"])]);
        let j = p("5", &["x", "y", "z"]).jacobian();
        assert_eq!(j.len(), 3);
        assert!(j.iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn dehomogenize_examples() {
        let f = p("x*y*z", &["x", "y", "z"]);
        assert_eq!(f.dehomogenize(2).unwrap(), p("x*y", &["x", "y"]));
        let f = p("x^2+y^2+z^2", &["x", "y", "z"]);
        assert_eq!(f.dehomogenize(2).unwrap(), p("x^2+y^2+1", &["x", "y"]));
        let f = p("y^2*z + x^3 + t*x^2 + v^3", &["x", "y", "z", "t", "v"]);
        assert_eq!(
            f.dehomogenize(3).unwrap(),
            p("y^2*z + x^3 + x^2 + v^3", &["x", "y", "z", "v"])
        );
        assert!(matches!(
            f.dehomogenize(5),
            Err(PolyError::ChartOutOfRange { index: 5, nvars: 5 })
        ));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = p("x", &["x", "y"]);
        let b = p("x", &["x", "z"]);
        assert!(matches!(a.try_add(&b), Err(PolyError::VariableMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(PolyError::VariableMismatch { .. })));
    }

    #[test]
    fn render_is_grlex_descending() {
        let f = p("y^2*z + x^3 + t*x^2 + v^3", &["x", "y", "z", "t", "v"]);
        assert_eq!(f.to_string(), "x^3 + x^2*t + y^2*z + v^3");
        let g = p("-(1/2)*x + 3 - y^2", &["x", "y"]);
        assert_eq!(g.to_string(), "-y^2 - (1/2)*x + 3");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let f = p("x + y - x", &["x", "y"]);
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f, p("y", &["x", "y"]));
    }

    #[test]
    fn monomials_of_degree() {
        let ms = Monomial::all_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert!(ms.iter().all(|m| m.degree() == 2));
    }
}
