//! Parser for polynomial expressions such as `n - 5`, `-n + 6` or
//! `(-1/924)n^3 + (5/1232)n^2 + (1105/924)n - 35/176`.
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := coef? '*'? var ('^' uint)? | coef
//! coef := '-'? (uint | uint '/' uint | decimal | '(' coef ')')
//! var  := 'n' | 'x'
//! ```
//! Whitespace separates tokens and is otherwise ignored. A term may carry a leading minus
//! even when it has no explicit coefficient (`-n`).

use num_traits::Zero;
use thiserror::Error;

use crate::poly::RationalPolynomial;
use crate::rational::{parse_rational, Rational};

const MAX_EXPONENT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("not a polynomial: {0}")]
    NonPolynomial(String),
    #[error("irrational literal `{0}` is not supported")]
    IrrationalLiteral(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Var(char),
    Word(String),
}

const IRRATIONAL_WORDS: &[&str] = &["pi", "π", "e", "tau", "τ", "phi", "φ", "sqrt", "√"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (at, c) = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = c.to_string();
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                    s.push(chars[i].1);
                    i += 1;
                }
                Tok::Num(s)
            }
            c if c.is_alphabetic() || c == '√' => {
                let mut s = c.to_string();
                while i < chars.len() && chars[i].1.is_alphanumeric() {
                    s.push(chars[i].1);
                    i += 1;
                }
                match s.as_str() {
                    "n" | "x" => Tok::Var(c),
                    _ => Tok::Word(s),
                }
            }
            other => {
                return Err(ExprError::SyntaxError {
                    offset: at,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((at, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    var: Option<char>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if IRRATIONAL_WORDS.contains(&w.to_lowercase().as_str()) {
                return Err(ExprError::IrrationalLiteral(w.clone()));
            }
        }
        Err(ExprError::SyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn number(&mut self) -> Result<Rational, ExprError> {
        let Some(Tok::Num(s)) = self.peek().cloned() else {
            return self.error("expected a number");
        };
        self.pos += 1;
        if self.eat(&Tok::Slash) {
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return self.error("expected a denominator");
            };
            if s.contains('.') || d.contains('.') {
                return self.error("fractions take integer parts");
            }
            self.pos += 1;
            return parse_rational(&format!("{s}/{d}")).map_err(|e| ExprError::SyntaxError {
                offset: self.offset(),
                message: e.to_string(),
            });
        }
        parse_rational(&s).map_err(|e| ExprError::SyntaxError {
            offset: self.offset(),
            message: e.to_string(),
        })
    }

    /// `'-'? (number | '(' coef ')')`
    fn coef(&mut self) -> Result<Rational, ExprError> {
        let negative = self.eat(&Tok::Minus);
        let value = if self.eat(&Tok::LParen) {
            let inner = self.coef()?;
            if !self.eat(&Tok::RParen) {
                return self.error("expected `)`");
            }
            inner
        } else {
            self.number()?
        };
        Ok(if negative { -value } else { value })
    }

    fn exponent(&mut self) -> Result<usize, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) if !s.contains('.') => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    return Err(ExprError::NonPolynomial(format!(
                        "fractional exponent {s}/..."
                    )));
                }
                let e: usize = s.parse().map_err(|_| ExprError::NonPolynomial(s.clone()))?;
                if e > MAX_EXPONENT {
                    return self.error(format!("exponent {e} exceeds {MAX_EXPONENT}"));
                }
                Ok(e)
            }
            Some(Tok::Num(s)) => Err(ExprError::NonPolynomial(format!("fractional exponent {s}"))),
            Some(Tok::Minus) => Err(ExprError::NonPolynomial("negative exponent".into())),
            Some(Tok::LParen) => Err(ExprError::NonPolynomial("non-integer exponent".into())),
            _ => self.error("expected an exponent"),
        }
    }

    fn term(&mut self) -> Result<(Rational, usize), ExprError> {
        let negative = self.eat(&Tok::Minus);
        let coef = match self.peek() {
            Some(Tok::Num(_)) | Some(Tok::LParen) | Some(Tok::Minus) => Some(self.coef()?),
            _ => None,
        };
        let star = self.eat(&Tok::Star);
        let power = match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                if self.var.is_some_and(|seen| seen != v) {
                    return self.error("mixed variables `n` and `x`");
                }
                self.var = Some(v);
                self.pos += 1;
                if self.eat(&Tok::Caret) {
                    self.exponent()?
                } else {
                    1
                }
            }
            _ if star || coef.is_none() => return self.error("expected `n` or `x`"),
            _ => 0,
        };
        let value = coef.unwrap_or_else(|| Rational::from_integer(1.into()));
        Ok((if negative { -value } else { value }, power))
    }
}

pub fn parse_function_expr(text: &str) -> Result<RationalPolynomial, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        var: None,
    };
    if p.peek().is_none() {
        return p.error("empty expression");
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut add = |(c, power): (Rational, usize)| {
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        coeffs[power] += c;
    };
    add(p.term()?);
    loop {
        if p.eat(&Tok::Plus) {
            add(p.term()?);
        } else if p.eat(&Tok::Minus) {
            let (c, power) = p.term()?;
            add((-c, power));
        } else if p.peek().is_none() {
            break;
        } else {
            return p.error("expected `+`, `-` or end of expression");
        }
    }
    Ok(RationalPolynomial::new(coeffs).trim())
}
