//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Variables are `x` and `y` when `n = 1`, `x, y1, …, yn` otherwise. For
//! `n = 2` the names `y` and `z` are accepted as aliases of `y1`, `y2`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Polynomial, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*^/()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn nvars(&self) -> usize {
        self.n + 1
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.1)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.eat_sym('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat_sym('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat_sym('^') {
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.idx += 1;
                    let e: u32 = e.try_into().map_err(|_| ParseError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    Ok(base.pow(e))
                }
                Some(Tok::Sym('-')) => Err(ParseError::NegativeExponent { pos }),
                _ => Err(self.syntax("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.idx += 1;
                if self.eat_sym('/') {
                    let dpos = self.pos();
                    match self.peek().cloned() {
                        Some(Tok::Int(den)) => {
                            self.idx += 1;
                            if den.is_zero() {
                                return Err(ParseError::DivisionByZero { pos: dpos });
                            }
                            Ok(Polynomial::constant(self.nvars(), Q::new(num, den)))
                        }
                        _ => Err(ParseError::Syntax {
                            pos: dpos,
                            msg: "only integer denominators are allowed".into(),
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(self.nvars(), Q::from_integer(num)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                let i = self
                    .variable_index(&name)
                    .ok_or(ParseError::UnknownVariable { pos, name })?;
                Ok(Polynomial::var(self.nvars(), i))
            }
            Some(Tok::Sym('(')) => {
                self.idx += 1;
                let inner = self.expr()?;
                if !self.eat_sym(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.syntax("unexpected token")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn variable_index(&self, name: &str) -> Option<usize> {
        match name {
            "x" => return Some(0),
            "y" if self.n <= 2 => return Some(1),
            "z" if self.n == 2 => return Some(2),
            _ => {}
        }
        let idx: usize = name.strip_prefix('y')?.parse().ok()?;
        (idx >= 1 && idx <= self.n).then_some(idx)
    }
}

/// Parses `text` into a polynomial in the coordinates `(x, y1, …, yn)`.
pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial, ParseError> {
    assert!(n >= 1, "at least one y coordinate is required");
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        idx: 0,
        end: text.chars().count(),
        n,
    };
    let p = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(parser.syntax("trailing input"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qf, Monomial};

    #[test]
    fn reads_off_literals() {
        let p = parse_polynomial("x + y^2", 1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![1, 0])), qf(1, 1));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 2])), qf(1, 1));

        let p = parse_polynomial("x^2 + y1^3", 2).unwrap();
        assert_eq!(p.coeff(&Monomial::new(vec![2, 0, 0])), qf(1, 1));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 3, 0])), qf(1, 1));

        let p = parse_polynomial("1/2*x*y - y^3", 1).unwrap();
        assert_eq!(p.coeff(&Monomial::new(vec![1, 1])), qf(1, 2));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 3])), qf(-1, 1));
    }

    #[test]
    fn parentheses_and_powers_expand() {
        let p = parse_polynomial(" (x + y)^2 - 2 * x*y", 1).unwrap();
        assert_eq!(p.to_string(), "x^2 + y^2");
        let p = parse_polynomial("-(y2 - y1)*3", 2).unwrap();
        assert_eq!(p.to_string(), "3*y1 - 3*y2");
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            parse_polynomial("x + w", 1),
            Err(ParseError::UnknownVariable { pos: 4, .. })
        ));
        assert!(matches!(
            parse_polynomial("y3", 2),
            Err(ParseError::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse_polynomial("x^-2", 1),
            Err(ParseError::NegativeExponent { pos: 2 })
        ));
        assert!(matches!(
            parse_polynomial("x + * y", 1),
            Err(ParseError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_polynomial("(x", 1),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_polynomial("1/0", 1),
            Err(ParseError::DivisionByZero { .. })
        ));
        assert!(matches!(
            parse_polynomial("x/2", 1),
            Err(ParseError::Syntax { .. })
        ));
    }
}
