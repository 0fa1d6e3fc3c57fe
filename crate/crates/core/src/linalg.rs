//! Exact rational matrices: rank by elimination, symmetric-matrix input.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer};

use crate::poly::Rational;

/// Dense square matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    size: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, String> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err("matrix is not square".into());
        }
        Ok(RatMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let size = diag.len();
        let mut m = Self::zeros(size);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, Rational::from_integer(BigInt::from(*d)));
        }
        m
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal(&vec![1; size])
    }

    pub fn zeros(size: usize) -> Self {
        RatMatrix {
            size,
            entries: vec![Rational::zero(); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.size + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `P^T * self * P`.
    pub fn congruent(&self, p: &RatMatrix) -> Self {
        p.transpose().mul(self).mul(p)
    }

    /// Rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let n = self.size;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            let inv = Rational::one() / &a[rank][col];
            for r in (rank + 1)..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let delta = &factor * &a[rank][c];
                    a[r][c] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(i64),
    Text(String),
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let parse_int = |s: &str| s.trim().parse::<BigInt>().map_err(|_| format!("bad matrix entry `{text}`"));
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{text}`"));
            }
            Ok(Rational::new(parse_int(num)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// JSON form: an array of rows, entries either integers or strings `"p/q"`.
impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Vec<RawEntry>>::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        RawEntry::Int(v) => Ok(Rational::from_integer(v.into())),
                        RawEntry::Text(t) => parse_rational(&t),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        RatMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}
