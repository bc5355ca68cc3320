//! Parser for rational expressions such as `(2*l-1)/(l^2-l)`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Identifiers may contain any alphanumeric characters and `_`, and must be
//! one of the supplied variable names. Results are exact over `ℚ`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::Rationals;
use super::poly::RationalFunction;
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Parse(format!("{msg} at column {}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction<Rationals>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction<Rationals>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| {
                    self.pos = at;
                    self.err("division by zero")
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction<Rationals>> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction<Rationals>> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer exponent"));
        }
        let e: i32 = digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        let e = if negative { -e } else { e };
        base.pow(e)
            .map_err(|_| self.err("zero raised to a negative power"))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && pred(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<RationalFunction<Rationals>> {
        let n = self.names.len();
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let v: BigInt = digits.parse().unwrap();
                Ok(RationalFunction::constant(
                    &Rationals,
                    n,
                    BigRational::from_integer(v),
                ))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                let ident = self.take_while(|c| c.is_alphanumeric() || c == '_');
                match self.names.iter().position(|x| *x == ident) {
                    Some(i) => Ok(RationalFunction::var(&Rationals, n, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(format!("unknown variable '{ident}'")))
                    }
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
        }
    }
}

/// Parses an exact rational expression in the named variables.
pub fn parse_rational_function(
    input: &str,
    names: &[String],
) -> Result<RationalFunction<Rationals>> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        names,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses an exact rational number such as `-3/4` or `7`.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let f = parse_rational_function(input, &[])?;
    f.as_constant()
        .ok_or_else(|| Error::Parse(format!("'{input}' is not a number")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Field, Ring};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_legendre_entry() {
        let n = names(&["λ"]);
        let f = parse_rational_function("(2*λ-1)/(λ^2-λ)", &n).unwrap();
        let v = f.eval(&[Rationals.from_int(2)]).unwrap();
        assert_eq!(Rationals.format(&v), "3/2");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let n = names(&["x", "y"]);
        let f = parse_rational_function("-x^2 + 3*x*y - 1/2", &n).unwrap();
        let v = f
            .eval(&[Rationals.from_int(1), Rationals.from_int(2)])
            .unwrap();
        assert_eq!(Rationals.format(&v), "9/2");
        let g = parse_rational_function("x^-1", &n).unwrap();
        assert_eq!(
            g.eval(&[Rationals.from_int(4), Rationals.zero()]).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn errors_carry_columns() {
        let n = names(&["x"]);
        assert_eq!(
            parse_rational_function("x + y", &n),
            Err(Error::Parse("unknown variable 'y' at column 5".into()))
        );
        assert!(matches!(
            parse_rational_function("(x", &n),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_rational_function("1/(x-x)", &n),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn numbers() {
        assert_eq!(
            parse_rational("-3/4").unwrap(),
            BigRational::new((-3).into(), 4.into())
        );
        assert!(parse_rational("x").is_err());
    }
}
