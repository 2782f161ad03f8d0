//! Recursive-descent parser for polynomial text input.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' uint)?
//! atom   := number ('/' number)? | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x`, `x y`) is rejected.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Rational, SparsePoly, Var};

pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, len: text.len() };
    let p = parser.expr()?;
    match parser.peek() {
        None => Ok(p),
        Some(t) => Err(syntax(t.pos, format!("unexpected {}", t.kind.describe()))),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Num(n) => format!("number {n}"),
            Kind::Var(Var::X) => "'x'".into(),
            Kind::Var(Var::Y) => "'y'".into(),
            Kind::Plus => "'+'".into(),
            Kind::Minus => "'-'".into(),
            Kind::Star => "'*'".into(),
            Kind::Caret => "'^'".into(),
            Kind::Slash => "'/'".into(),
            Kind::LParen => "'('".into(),
            Kind::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let kind = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token { kind: Kind::Num(digits.parse().unwrap()), pos });
                continue;
            }
            'x' => Kind::Var(Var::X),
            'y' => Kind::Var(Var::Y),
            '+' => Kind::Plus,
            '-' | '\u{2212}' => Kind::Minus,
            '*' => Kind::Star,
            '^' => Kind::Caret,
            '/' => Kind::Slash,
            '(' => Kind::LParen,
            ')' => Kind::RParen,
            other => return Err(syntax(pos, format!("unexpected character {other:?}"))),
        };
        chars.next();
        out.push(Token { kind, pos });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len, |t| t.pos)
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Kind::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Kind::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.unary()?;
        while self.eat(&Kind::Star) {
            acc = &acc * &self.unary()?;
        }
        if let Some(t) = self.peek() {
            if matches!(t.kind, Kind::Num(_) | Kind::Var(_) | Kind::LParen) {
                return Err(syntax(t.pos, "implicit multiplication is not allowed; use '*'"));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly> {
        if self.eat(&Kind::Minus) {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if !self.eat(&Kind::Caret) {
            return Ok(base);
        }
        let pos = self.here();
        match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Num(n)) => {
                self.pos += 1;
                let e: u32 = n
                    .try_into()
                    .map_err(|_| syntax(pos, "exponent too large"))?;
                Ok(base.pow(e))
            }
            Some(Kind::Minus) => Err(Error::NegativeExponent { pos }),
            _ => Err(syntax(pos, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        let pos = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.pos += 1;
        match tok.kind {
            Kind::Num(n) => {
                if self.eat(&Kind::Slash) {
                    let dpos = self.here();
                    match self.peek().map(|t| t.kind.clone()) {
                        Some(Kind::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(SparsePoly::constant(Rational::new(n, d)))
                        }
                        Some(Kind::Num(_)) => Err(syntax(dpos, "zero denominator")),
                        _ => Err(syntax(dpos, "expected an integer denominator")),
                    }
                } else {
                    Ok(SparsePoly::constant(Rational::from_integer(n)))
                }
            }
            Kind::Var(v) => Ok(SparsePoly::var(v)),
            Kind::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Kind::RParen) {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                Ok(inner)
            }
            other => Err(syntax(pos, format!("unexpected {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn simple_difference() {
        let p = parse_poly("x^2 - y").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff_of(2, 0), rat(1));
        assert_eq!(p.coeff_of(0, 1), rat(-1));
    }

    #[test]
    fn squared_binomial() {
        let p = parse_poly("(y - x^2)^2").unwrap();
        assert_eq!(p, parse_poly("y^2 - 2*x^2*y + x^4").unwrap());
    }

    #[test]
    fn negative_exponent() {
        assert_eq!(parse_poly("x^-1"), Err(Error::NegativeExponent { pos: 2 }));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_poly("2x"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(x"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x ^ y"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("z"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_poly("-x^2").unwrap(), parse_poly("-(x^2)").unwrap());
        assert_eq!(parse_poly("--x").unwrap(), parse_poly("x").unwrap());
    }

    #[test]
    fn rational_literals() {
        let p = parse_poly("3/6*x + 1/3").unwrap();
        assert_eq!(p.coeff_of(1, 0), crate::poly::ratio(1, 2));
        assert_eq!(p.constant_term(), crate::poly::ratio(1, 3));
    }

    #[test]
    fn unicode_minus_is_accepted() {
        assert_eq!(parse_poly("x \u{2212} y").unwrap(), parse_poly("x - y").unwrap());
    }
}
