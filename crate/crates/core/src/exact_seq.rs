//! Rank bookkeeping for finite exact sequences of finitely generated abelian groups.
//!
//! For `0 -> A_1 -> ... -> A_m -> 0` exact, write `e_j` for the rank of the
//! image of `A_j -> A_{j+1}` (with `e_0 = e_m = 0`). Exactness at `A_j` is
//! `rank A_j = e_{j-1} + e_j`. Unknown ranks and the `e_j` are nonnegative
//! integers; intervals for the unknowns come from Fourier–Motzkin elimination.
//!
//! Exactness of integer rounding: every constraint row has coefficients in
//! {-1, 0, 1}, the `e`-columns form an interval (consecutive-ones) matrix and
//! each unknown occupies a single unit column, so the system is totally
//! unimodular. Its vertices are integral, and so is every slice `x = t` with
//! integer `t`; hence the rational projection of the polytope onto one
//! unknown, rounded inward, is exactly the set of feasible integer values.
//! This is why unknown names must be distinct.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::model::HypersurfaceProfile;
use crate::table::{serde_rank, CohomologyTable, RankBound};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("exact sequence needs at least one term")]
    Empty,
    #[error("unknown `{0}` appears more than once")]
    DuplicateUnknown(String),
    #[error("unknown `{0}` has an empty range")]
    EmptyRange(String),
    #[error("term `{0}` is not known")]
    UnknownTerm(String),
    #[error("cannot parse sequence term `{0}`")]
    Parse(String),
    #[error("inconsistent specialization window: {0}")]
    Window(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankValue {
    Known(BigUint),
    Unknown { lo: BigUint, hi: RankBound },
}

impl RankValue {
    pub fn known(v: impl Into<BigUint>) -> Self {
        RankValue::Known(v.into())
    }

    pub fn free() -> Self {
        RankValue::Unknown {
            lo: BigUint::zero(),
            hi: RankBound::Infinite,
        }
    }

    pub fn at_most(hi: impl Into<BigUint>) -> Self {
        RankValue::Unknown {
            lo: BigUint::zero(),
            hi: RankBound::Finite(hi.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTerm {
    pub name: String,
    pub value: RankValue,
}

impl RankTerm {
    pub fn new(name: impl Into<String>, value: RankValue) -> Self {
        RankTerm {
            name: name.into(),
            value,
        }
    }

    pub fn known(name: impl Into<String>, v: impl Into<BigUint>) -> Self {
        Self::new(name, RankValue::known(v))
    }

    pub fn unknown(name: impl Into<String>) -> Self {
        Self::new(name, RankValue::free())
    }
}

/// `0 -> A_1 -> ... -> A_m -> 0`; the outer zeros are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSequenceSpec {
    terms: Vec<RankTerm>,
}

impl ExactSequenceSpec {
    pub fn new(terms: Vec<RankTerm>) -> Result<Self, SeqError> {
        if terms.is_empty() {
            return Err(SeqError::Empty);
        }
        let mut seen = BTreeSet::new();
        for t in &terms {
            if let RankValue::Unknown { lo, hi } = &t.value {
                if !seen.insert(t.name.as_str()) {
                    return Err(SeqError::DuplicateUnknown(t.name.clone()));
                }
                if !hi.contains(lo) {
                    return Err(SeqError::EmptyRange(t.name.clone()));
                }
            }
        }
        Ok(ExactSequenceSpec { terms })
    }

    /// Parses a comma-separated list: integers are known ranks, identifiers
    /// are unknowns, `name<=k` bounds an unknown above.
    pub fn parse(text: &str) -> Result<Self, SeqError> {
        let mut terms = Vec::new();
        for raw in text.split(',') {
            let tok = raw.trim();
            if let Ok(v) = tok.parse::<BigUint>() {
                terms.push(RankTerm::known(tok, v));
                continue;
            }
            let (name, value) = match tok.split_once("<=") {
                Some((name, hi)) => {
                    let hi = hi
                        .trim()
                        .parse::<BigUint>()
                        .map_err(|_| SeqError::Parse(tok.to_string()))?;
                    (name.trim(), RankValue::at_most(hi))
                }
                None => (tok, RankValue::free()),
            };
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || "_^{}()".contains(c));
            if !valid {
                return Err(SeqError::Parse(tok.to_string()));
            }
            terms.push(RankTerm::new(name, value));
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &[RankTerm] {
        &self.terms
    }

    pub fn reversed(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.reverse();
        ExactSequenceSpec { terms }
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &RankTerm> {
        self.terms
            .iter()
            .filter(|t| matches!(t.value, RankValue::Unknown { .. }))
    }
}

impl fmt::Display for ExactSequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0")?;
        for t in &self.terms {
            match &t.value {
                RankValue::Known(v) if t.name == v.to_string() => write!(f, " -> {v}")?,
                RankValue::Known(v) => write!(f, " -> {}={v}", t.name)?,
                RankValue::Unknown { .. } => write!(f, " -> {}", t.name)?,
            }
        }
        f.write_str(" -> 0")
    }
}

/// `true` iff the alternating sum of ranks vanishes. Every term must be known.
pub fn alternating_sum_check(seq: &ExactSequenceSpec) -> Result<bool, SeqError> {
    let mut sum = BigInt::zero();
    for (j, t) in seq.terms.iter().enumerate() {
        let RankValue::Known(v) = &t.value else {
            return Err(SeqError::UnknownTerm(t.name.clone()));
        };
        let v = BigInt::from(v.clone());
        if j % 2 == 0 {
            sum += v;
        } else {
            sum -= v;
        }
    }
    Ok(sum.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub name: String,
    #[serde(with = "serde_rank")]
    pub lo: BigUint,
    pub hi: RankBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankSolution {
    pub feasible: bool,
    /// One interval per unknown, in sequence order. Empty when infeasible.
    pub intervals: Vec<Interval>,
    /// Linear relations among the unknowns forced by exactness.
    pub relations: Vec<String>,
}

impl RankSolution {
    pub fn interval(&self, name: &str) -> Option<&Interval> {
        self.intervals.iter().find(|i| i.name == name)
    }
}

/// `sum coeffs[v] * x_v + constant`, compared against zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Row {
    coeffs: BTreeMap<usize, BigInt>,
    constant: BigInt,
}

impl Row {
    fn coeff(&self, v: usize) -> Option<&BigInt> {
        self.coeffs.get(&v)
    }

    /// `self * a + other * b`.
    fn combine(&self, a: &BigInt, other: &Row, b: &BigInt) -> Row {
        let mut coeffs = BTreeMap::new();
        for (v, c) in &self.coeffs {
            coeffs.insert(*v, c * a);
        }
        for (v, c) in &other.coeffs {
            let e = coeffs.entry(*v).or_insert_with(BigInt::zero);
            *e += c * b;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Row {
            coeffs,
            constant: &self.constant * a + &other.constant * b,
        }
    }

    fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides an equality by the gcd of all its entries.
    fn normalize_eq(mut self) -> Row {
        let g = self.content().gcd(&self.constant);
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.values_mut() {
                *c /= &g;
            }
            self.constant /= &g;
        }
        if self.coeffs.values().next().is_some_and(|c| c.is_negative()) {
            for c in self.coeffs.values_mut() {
                *c = -&*c;
            }
            self.constant = -&self.constant;
        }
        self
    }

    /// Divides an inequality by the gcd of its coefficients, rounding the
    /// constant down (valid for integer points).
    fn normalize_ineq(mut self) -> Row {
        let g = self.content();
        if !g.is_zero() && !g.is_one() {
            for c in self.coeffs.values_mut() {
                *c /= &g;
            }
            self.constant = self.constant.div_floor(&g);
        }
        self
    }
}

#[derive(Debug, Clone, Default)]
struct System {
    eqs: Vec<Row>,
    ineqs: BTreeSet<Row>,
}

struct Infeasible;

impl System {
    fn check_constants(&mut self) -> Result<(), Infeasible> {
        for r in self.eqs.iter().filter(|r| r.coeffs.is_empty()) {
            if !r.constant.is_zero() {
                return Err(Infeasible);
            }
        }
        self.eqs.retain(|r| !r.coeffs.is_empty());
        for r in self.ineqs.iter().filter(|r| r.coeffs.is_empty()) {
            if r.constant.is_negative() {
                return Err(Infeasible);
            }
        }
        self.ineqs.retain(|r| !r.coeffs.is_empty());
        Ok(())
    }

    /// Removes every variable not in `keep`: equalities by substitution, the
    /// rest by Fourier–Motzkin.
    fn eliminate(mut self, keep: &BTreeSet<usize>, fourier_motzkin: bool) -> Result<System, Infeasible> {
        self.check_constants()?;
        loop {
            let choice = self.eqs.iter().enumerate().find_map(|(i, r)| {
                r.coeffs
                    .iter()
                    .filter(|(v, _)| !keep.contains(v))
                    .min_by_key(|(_, c)| c.magnitude().clone())
                    .map(|(v, _)| (i, *v))
            });
            let Some((i, v)) = choice else { break };
            let pivot = self.eqs.swap_remove(i);
            let a = pivot.coeff(v).expect("pivot variable present").clone();
            let a_abs = a.abs();
            let sign = a.signum();
            let substitute = |r: &Row| -> Row {
                match r.coeff(v) {
                    None => r.clone(),
                    Some(b) => r.combine(&a_abs, &pivot, &(-(&sign * b))),
                }
            };
            self.eqs = self.eqs.iter().map(|r| substitute(r).normalize_eq()).collect();
            self.ineqs = self.ineqs.iter().map(|r| substitute(r).normalize_ineq()).collect();
            self.check_constants()?;
        }
        if !fourier_motzkin {
            return Ok(self);
        }
        loop {
            let vars: BTreeSet<usize> = self
                .ineqs
                .iter()
                .flat_map(|r| r.coeffs.keys().copied())
                .filter(|v| !keep.contains(v))
                .collect();
            let Some(v) = vars.into_iter().min_by_key(|&v| {
                let pos = self.ineqs.iter().filter(|r| r.coeff(v).is_some_and(|c| c.is_positive())).count();
                let neg = self.ineqs.iter().filter(|r| r.coeff(v).is_some_and(|c| c.is_negative())).count();
                pos * neg
            }) else {
                break;
            };
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
            for r in std::mem::take(&mut self.ineqs) {
                match r.coeff(v).map(|c| c.sign()) {
                    Some(Sign::Plus) => pos.push(r),
                    Some(Sign::Minus) => neg.push(r),
                    _ => {
                        rest.insert(r);
                    }
                }
            }
            for p in &pos {
                for q in &neg {
                    let a = p.coeff(v).expect("positive coefficient");
                    let b = q.coeff(v).expect("negative coefficient").abs();
                    rest.insert(p.combine(&b, q, a).normalize_ineq());
                }
            }
            self.ineqs = rest;
            self.check_constants()?;
        }
        Ok(self)
    }
}

struct Encoded {
    system: System,
    unknown_names: Vec<String>,
}

fn encode(seq: &ExactSequenceSpec) -> Encoded {
    let unknown_names: Vec<String> = seq.unknowns().map(|t| t.name.clone()).collect();
    let u = unknown_names.len();
    let m = seq.terms.len();
    // Image ranks e_1..e_{m-1} live at indices u..u+m-1.
    let image = |j: usize| -> Option<usize> { (j >= 1 && j < m).then(|| u + j - 1) };
    let mut system = System::default();
    let mut next_unknown = 0;
    for (idx, term) in seq.terms.iter().enumerate() {
        let j = idx + 1;
        let mut row = Row {
            coeffs: BTreeMap::new(),
            constant: BigInt::zero(),
        };
        match &term.value {
            RankValue::Known(v) => row.constant = BigInt::from(v.clone()),
            RankValue::Unknown { lo, hi } => {
                let x = next_unknown;
                next_unknown += 1;
                row.coeffs.insert(x, BigInt::one());
                let mut lower = BTreeMap::new();
                lower.insert(x, BigInt::one());
                system.ineqs.insert(Row {
                    coeffs: lower,
                    constant: -BigInt::from(lo.clone()),
                });
                if let RankBound::Finite(h) = hi {
                    let mut upper = BTreeMap::new();
                    upper.insert(x, -BigInt::one());
                    system.ineqs.insert(Row {
                        coeffs: upper,
                        constant: BigInt::from(h.clone()),
                    });
                }
            }
        }
        for e in [image(j - 1), image(j)].into_iter().flatten() {
            *row.coeffs.entry(e).or_insert_with(BigInt::zero) -= BigInt::one();
        }
        system.eqs.push(row);
    }
    for j in 1..m {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(image(j).expect("interior image"), BigInt::one());
        system.ineqs.insert(Row {
            coeffs,
            constant: BigInt::zero(),
        });
    }
    Encoded {
        system,
        unknown_names,
    }
}

fn render_relation(row: &Row, names: &[String]) -> String {
    let mut lhs = String::new();
    for (i, (v, c)) in row.coeffs.iter().enumerate() {
        let mag = c.magnitude();
        let term = if mag.is_one() {
            names[*v].clone()
        } else {
            format!("{mag}*{}", names[*v])
        };
        match (i, c.is_negative()) {
            (0, true) => lhs.push_str(&format!("-{term}")),
            (0, false) => lhs.push_str(&term),
            (_, true) => lhs.push_str(&format!(" - {term}")),
            (_, false) => lhs.push_str(&format!(" + {term}")),
        }
    }
    format!("{lhs} = {}", -&row.constant)
}

fn infeasible() -> RankSolution {
    RankSolution {
        feasible: false,
        intervals: Vec::new(),
        relations: Vec::new(),
    }
}

/// Tightest integer interval for every unknown rank, or infeasibility.
pub fn solve_ranks(seq: &ExactSequenceSpec) -> RankSolution {
    let Encoded {
        system,
        unknown_names,
    } = encode(seq);
    let unknown_set: BTreeSet<usize> = (0..unknown_names.len()).collect();

    let relations = match system.clone().eliminate(&unknown_set, false) {
        Ok(reduced) => {
            let mut rel: Vec<String> = reduced
                .eqs
                .iter()
                .map(|r| render_relation(r, &unknown_names))
                .collect();
            rel.sort();
            rel
        }
        Err(Infeasible) => return infeasible(),
    };
    if unknown_names.is_empty() {
        return match system.eliminate(&BTreeSet::new(), true) {
            Ok(_) => RankSolution {
                feasible: true,
                intervals: Vec::new(),
                relations,
            },
            Err(Infeasible) => infeasible(),
        };
    }

    let mut intervals = Vec::new();
    for (x, name) in unknown_names.iter().enumerate() {
        let keep = BTreeSet::from([x]);
        let Ok(reduced) = system.clone().eliminate(&keep, true) else {
            return infeasible();
        };
        let mut lo = BigInt::zero();
        let mut hi: Option<BigInt> = None;
        let tighten_hi = |hi: &mut Option<BigInt>, v: BigInt| {
            *hi = Some(match hi.take() {
                Some(h) => h.min(v),
                None => v,
            });
        };
        for r in &reduced.eqs {
            let a = r.coeff(x).expect("only the kept variable remains");
            let (q, rem) = (-&r.constant).div_rem(a);
            if !rem.is_zero() {
                return infeasible();
            }
            lo = lo.max(q.clone());
            tighten_hi(&mut hi, q);
        }
        for r in &reduced.ineqs {
            let a = r.coeff(x).expect("only the kept variable remains");
            if a.is_positive() {
                lo = lo.max((-&r.constant).div_ceil(a));
            } else {
                tighten_hi(&mut hi, r.constant.div_floor(&-a));
            }
        }
        if hi.as_ref().is_some_and(|h| *h < lo) {
            return infeasible();
        }
        intervals.push(Interval {
            name: name.clone(),
            lo: lo.to_biguint().expect("lower bound is nonnegative"),
            hi: match hi {
                Some(h) => RankBound::Finite(h.to_biguint().expect("upper bound is at least lower")),
                None => RankBound::Infinite,
            },
        });
    }
    RankSolution {
        feasible: true,
        intervals,
        relations,
    }
}

/// Caller-supplied ranks for the specialization sequence.
#[derive(Debug, Clone, Default)]
pub struct SpecializationInputs {
    /// `H^k(V)` by degree; unlisted degrees in the window are free unknowns.
    pub cohomology: BTreeMap<u32, RankValue>,
    /// `H^k_phi(V)` by degree, only inside `[n, n+s]`.
    pub vanishing: BTreeMap<u32, RankValue>,
}

pub fn cohomology_name(k: u32) -> String {
    format!("H^{k}(V)")
}

pub fn smooth_name(k: u32) -> String {
    format!("H^{k}(V_t)")
}

pub fn vanishing_name(k: u32) -> String {
    format!("H^{k}_phi(V)")
}

/// The specialization sequence restricted to the degrees where it can differ
/// from the smooth case:
///
/// `0 = H^{n-1}_phi -> H^n(V) -> H^n(V_t) -> H^n_phi -> ... -> H^{n+s+1}(V) -> H^{n+s+1}(V_t) -> H^{n+s+1}_phi = 0`.
///
/// Vanishing cohomology outside `[n, n+s]` is zero, which makes both ends exact.
pub fn specialization_instance(
    profile: &HypersurfaceProfile,
    smooth: &CohomologyTable,
    inputs: &SpecializationInputs,
) -> Result<ExactSequenceSpec, SeqError> {
    let n = profile.n;
    if n < 1 || profile.s < -1 || profile.s >= n as i32 {
        return Err(SeqError::Window(format!("n = {n}, s = {}", profile.s)));
    }
    if smooth.rows.len() != 2 * n as usize + 1 {
        return Err(SeqError::Window(format!(
            "smooth table has {} rows, expected 2n+1 = {}",
            smooth.rows.len(),
            2 * n + 1
        )));
    }
    let top = (n as i32 + profile.s + 1) as u32;
    for k in inputs.cohomology.keys() {
        if *k < n || *k > top {
            return Err(SeqError::Window(format!("H^{k}(V) is outside [{n}, {top}]")));
        }
    }
    for (k, v) in &inputs.vanishing {
        if *k < n || *k >= top {
            let zero = matches!(v, RankValue::Known(x) if x.is_zero());
            if !zero {
                return Err(SeqError::Window(format!(
                    "H^{k}_phi(V) must vanish outside [{n}, {}]",
                    top as i64 - 1
                )));
            }
        }
    }
    let mut terms = vec![RankTerm::known(vanishing_name(n - 1), 0u32)];
    for k in n..=top {
        let vt = smooth
            .row(k)
            .and_then(|r| r.exact_rank.clone())
            .ok_or_else(|| SeqError::Window(format!("smooth table row {k} is not exact")))?;
        terms.push(RankTerm::new(
            cohomology_name(k),
            inputs.cohomology.get(&k).cloned().unwrap_or_else(RankValue::free),
        ));
        terms.push(RankTerm::known(smooth_name(k), vt));
        let phi = if k < top {
            inputs.vanishing.get(&k).cloned().unwrap_or_else(RankValue::free)
        } else {
            RankValue::known(0u32)
        };
        terms.push(RankTerm::new(vanishing_name(k), phi));
    }
    ExactSequenceSpec::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn five_term_example() {
        let seq = ExactSequenceSpec::parse("0,a,7,2,b,0").unwrap();
        let sol = solve_ranks(&seq);
        assert!(sol.feasible);
        assert_eq!(sol.interval("a").unwrap().lo, big(5));
        assert_eq!(sol.interval("a").unwrap().hi, RankBound::finite(7u32));
        assert_eq!(sol.interval("b").unwrap().lo, big(0));
        assert_eq!(sol.interval("b").unwrap().hi, RankBound::finite(2u32));
        assert_eq!(sol.relations, vec!["a - b = 5".to_string()]);
    }

    #[test]
    fn forced_zero_and_sum() {
        let sol = solve_ranks(&ExactSequenceSpec::parse("0,x,0").unwrap());
        assert_eq!(sol.interval("x").unwrap().hi, RankBound::finite(0u32));
        let sol = solve_ranks(&ExactSequenceSpec::parse("0,3,x,3,0").unwrap());
        let x = sol.interval("x").unwrap();
        assert_eq!((x.lo.clone(), x.hi.clone()), (big(6), RankBound::finite(6u32)));
    }

    #[test]
    fn unbounded_unknowns() {
        let sol = solve_ranks(&ExactSequenceSpec::parse("a,b").unwrap());
        assert_eq!(sol.interval("a").unwrap().hi, RankBound::Infinite);
        assert_eq!(sol.relations, vec!["a - b = 0".to_string()]);
        let sol = solve_ranks(&ExactSequenceSpec::parse("2,a,b<=3").unwrap());
        let a = sol.interval("a").unwrap();
        assert_eq!((a.lo.clone(), a.hi.clone()), (big(2), RankBound::finite(5u32)));
    }

    #[test]
    fn alternating_sums() {
        assert!(alternating_sum_check(&ExactSequenceSpec::parse("2,7,5").unwrap()).unwrap());
        assert!(!alternating_sum_check(&ExactSequenceSpec::parse("1,1,1").unwrap()).unwrap());
        assert!(alternating_sum_check(&ExactSequenceSpec::parse("0,7,7,2,2,0").unwrap()).unwrap());
        assert!(alternating_sum_check(&ExactSequenceSpec::parse("1,a").unwrap()).is_err());
    }

    #[test]
    fn infeasible_sequences() {
        assert!(!solve_ranks(&ExactSequenceSpec::parse("1,1,1").unwrap()).feasible);
        assert!(!solve_ranks(&ExactSequenceSpec::parse("5,a<=2,1").unwrap()).feasible);
        assert!(!solve_ranks(&ExactSequenceSpec::parse("0,1,5,a<=1,0").unwrap()).feasible);
        // Alternating sum is 4, so no exact sequence has these ranks.
        assert!(!solve_ranks(&ExactSequenceSpec::parse("3,1,2").unwrap()).feasible);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(ExactSequenceSpec::parse("a,1,a"), Err(SeqError::DuplicateUnknown("a".into())));
        assert!(matches!(ExactSequenceSpec::parse("1,-2"), Err(SeqError::Parse(_))));
        assert!(matches!(ExactSequenceSpec::parse("1,,2"), Err(SeqError::Parse(_))));
        assert!(ExactSequenceSpec::new(vec![]).is_err());
    }

    #[test]
    fn display() {
        let seq = ExactSequenceSpec::parse("0,a,7").unwrap();
        assert_eq!(seq.to_string(), "0 -> 0 -> a -> 7 -> 0");
    }
}
