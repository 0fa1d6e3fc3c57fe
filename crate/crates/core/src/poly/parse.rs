//! Recursive-descent parser for polynomial text.
//!
//! Accepted grammar (whitespace is ignored between tokens):
//!
//! ```text
//! poly   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ['^' uint]
//! coeff  := uint | '(' ['-'] uint ['/' uint] ')'
//! var    := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! This contains the documented form `[coeff '*'] var ['^' uint] ('*' ...)*`
//! and everything the renderer emits.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_variables, Monomial, MultiPoly, PolyError, Rational};

/// Parses `text` as a polynomial in the given ordered variables.
pub fn parse_poly(text: &str, variables: &[String]) -> Result<MultiPoly, PolyError> {
    check_variables(variables)?;
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        variables,
    };
    let poly = parser.poly()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    variables: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), PolyError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{}`", byte as char)))
        }
    }

    fn poly(&mut self) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(self.variables.to_vec())?;
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (m, mut c) = self.term()?;
            if sign < 0 {
                c = -c;
            }
            out.add_term(m, c);
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), PolyError> {
        let mut exps = vec![0u32; self.variables.len()];
        let mut coeff = Rational::one();
        loop {
            match self.peek() {
                Some(b'(') | Some(b'0'..=b'9') => coeff *= self.coeff()?,
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let (index, e, offset) = self.power()?;
                    exps[index] = exps[index]
                        .checked_add(e)
                        .ok_or(PolyError::ExponentOverflow { offset })?;
                }
                Some(_) => return Err(self.syntax("expected a coefficient or variable")),
                None => return Err(self.syntax("unexpected end of input")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits parse"))
    }

    fn coeff(&mut self) -> Result<Rational, PolyError> {
        if self.peek() != Some(b'(') {
            return Ok(Rational::from_integer(self.uint()?));
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut num = self.uint()?;
        if negative {
            num = -num;
        }
        let value = if self.peek() == Some(b'/') {
            self.pos += 1;
            let offset = self.pos;
            let den = self.uint()?;
            if den.is_zero() {
                return Err(PolyError::Syntax {
                    offset,
                    message: "zero denominator".into(),
                });
            }
            Rational::new(num, den)
        } else {
            Rational::from_integer(num)
        };
        self.expect(b')')?;
        Ok(value)
    }

    fn power(&mut self) -> Result<(usize, u32, usize), PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let index = self
            .variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable {
                name: name.to_string(),
                offset: start,
            })?;
        if self.peek() != Some(b'^') {
            return Ok((index, 1, start));
        }
        self.pos += 1;
        let offset = {
            self.skip_ws();
            self.pos
        };
        let e = self.uint()?;
        let e = u32::try_from(e).map_err(|_| PolyError::ExponentOverflow { offset })?;
        Ok((index, e, offset))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn a1_quadric() {
        let f = parse_poly("x^2 + y^2 + z^2", &vars(&["x", "y", "z"])).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert!(f.terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn threefold_equation() {
        let v = vars(&["x", "y", "z", "t", "v"]);
        let f = parse_poly("y^2*z + x^3 + t*x^2 + v^3", &v).unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.total_degree(), Some(3));
        assert_eq!(
            f.coefficient(&Monomial::new(vec![2, 0, 0, 1, 0])),
            Rational::one()
        );
    }

    #[test]
    fn zero_polynomial() {
        let f = parse_poly("0", &vars(&["x", "y"])).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn whitespace_independent() {
        let v = vars(&["x", "y"]);
        let a = parse_poly("3*x^2-(1/2)*y", &v).unwrap();
        let b = parse_poly("  3 * x ^ 2  -  ( 1 / 2 ) * y ", &v).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_coefficients_reduce() {
        let v = vars(&["x"]);
        let a = parse_poly("(2/4)*x", &v).unwrap();
        let b = parse_poly("(1/2)*x", &v).unwrap();
        assert_eq!(a, b);
        let c = parse_poly("(-3/6)*x", &v).unwrap();
        assert_eq!(c, b.neg());
    }

    #[test]
    fn errors_carry_offsets() {
        let v = vars(&["x", "y"]);
        assert_eq!(
            parse_poly("x + w^2", &v),
            Err(PolyError::UnknownVariable {
                name: "w".into(),
                offset: 4
            })
        );
        assert!(matches!(
            parse_poly("x + * y", &v),
            Err(PolyError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse_poly("x^99999999999", &v),
            Err(PolyError::ExponentOverflow { offset: 2 })
        ));
        assert!(matches!(
            parse_poly("x^4294967295*x", &v),
            Err(PolyError::ExponentOverflow { .. })
        ));
        assert!(matches!(
            parse_poly("(1/0)*x", &v),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_poly("", &v), Err(PolyError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_poly("x y", &v), Err(PolyError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn bad_variable_lists() {
        assert!(matches!(
            parse_poly("x", &vars(&["x", "x"])),
            Err(PolyError::DuplicateVariable(_))
        ));
        assert!(matches!(
            parse_poly("x", &vars(&["x", "2y"])),
            Err(PolyError::InvalidVariable(_))
        ));
    }
}
