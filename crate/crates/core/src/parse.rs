//! Surface syntax for group-side operators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := atom ['^' uint]
//! atom   := rational | symbol | '(' expr ')'
//! rational := int ['/' uint]
//! symbol := a | b | c | d | Dinv | da | db | dc | dd | wa | wb | wc | wd
//! ```
//!
//! `*` is composition (non-commutative). `wa..wd` are the weighted
//! derivations `da - d*Dinv`, `db + c*Dinv`, `dc + b*Dinv`, `dd - a*Dinv`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coeffs::Rational;
use crate::group::{weighted_derivation, Coord, GroupOperator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero denominator at byte {pos}")]
    ZeroDenominator { pos: usize },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::ZeroDenominator { pos } => *pos,
        }
    }
}

pub fn parse_operator(text: &str) -> Result<GroupOperator, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GroupOperator, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GroupOperator, ParseError> {
        let neg = self.eat(b'-');
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(if neg { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<GroupOperator, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let n = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let n: u32 = n.try_into().map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<GroupOperator, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().unwrap();
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_pos = self.pos;
                    let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { pos: den_pos });
                    }
                    Ok(GroupOperator::scalar(Rational::new(num, den)))
                } else {
                    self.pos = save;
                    Ok(GroupOperator::scalar(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                symbol(name).ok_or(ParseError::Syntax {
                    pos: start,
                    msg: format!("unknown symbol '{name}'"),
                })
            }
            Some(_) => Err(self.err("expected a number, symbol or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn symbol(name: &str) -> Option<GroupOperator> {
    use Coord::*;
    let coord = |s: &str| match s {
        "a" => Some(A),
        "b" => Some(B),
        "c" => Some(C),
        "d" => Some(D),
        _ => None,
    };
    if name == "Dinv" {
        return Some(GroupOperator::det_inv());
    }
    if let Some(x) = coord(name) {
        return Some(GroupOperator::coord(x));
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let x = coord(tail)?;
    match head {
        "d" => Some(GroupOperator::deriv(x)),
        "w" => Some(weighted_derivation(x)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::rat;

    #[test]
    fn weyl_relation_normalizes() {
        assert_eq!(parse_operator("da*a - a*da").unwrap(), GroupOperator::one());
        assert_eq!(parse_operator("Dinv*(a*d - b*c)").unwrap(), GroupOperator::one());
    }

    #[test]
    fn euler_operator() {
        let e = parse_operator("a*da + b*db + c*dc + d*dd").unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(parse_operator(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn rationals_and_powers() {
        assert_eq!(parse_operator("3/2").unwrap(), GroupOperator::scalar(rat(3, 2)));
        assert_eq!(parse_operator("-1/2*a^2").unwrap().to_string(), "-1/2*a^2");
        assert_eq!(parse_operator("c^2").unwrap(), GroupOperator::coord(Coord::C).pow(2));
        assert_eq!(parse_operator("x^0").unwrap_err().pos(), 0);
    }

    #[test]
    fn weighted_derivations() {
        assert_eq!(parse_operator("wa").unwrap().to_string(), "da - d*Dinv");
        assert_eq!(parse_operator("wb").unwrap().to_string(), "db + c*Dinv");
        assert_eq!(parse_operator("wc").unwrap().to_string(), "dc + b*Dinv");
        assert_eq!(parse_operator("wd").unwrap().to_string(), "dd - a*Dinv");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_operator("1/0"), Err(ParseError::ZeroDenominator { pos: 2 }));
        assert_eq!(parse_operator("a + ").unwrap_err().pos(), 4);
        assert_eq!(parse_operator("a + q").unwrap_err().pos(), 4);
        assert_eq!(parse_operator("(a").unwrap_err().pos(), 2);
        assert!(parse_operator("").is_err());
        assert!(parse_operator("a b").is_err());
    }
}
