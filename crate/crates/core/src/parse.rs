//! Expression parser for scalars.
//!
//! Grammar: identifiers `[A-Za-z_][A-Za-z0-9_]*`, nonnegative integer
//! literals, binary `+ - * /` with standard precedence, `^` with an integer
//! exponent (optionally negative, optionally parenthesized), unary minus and
//! parentheses. Whitespace is insignificant. Rationals are written as
//! integer quotients, e.g. `1/2`. Expressions are evaluated directly into
//! canonical scalars while parsing.

use num::BigInt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_whitespace() {
                lx.pos += 1;
            }
            if lx.pos >= lx.src.len() {
                break;
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    Tok::Int(text.parse::<BigInt>().unwrap())
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((tok, start));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    chart: &'a Chart,
    end: usize,
}

pub(crate) fn parse_scalar(text: &str, chart: &Chart) -> Result<Scalar> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        chart,
        end: text.len(),
    };
    let s = p.expr()?;
    if let Some((tok, pos)) = p.peek() {
        return Err(Error::Syntax {
            pos,
            msg: format!("unexpected token {tok:?} after expression"),
        });
    }
    Ok(s)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.idx).cloned()
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.idx)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.factor()?;
        while let Some((tok, _pos)) = self.peek() {
            match tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(Error::DivisionByZero { at_parse: true });
                    }
                    acc = acc.div(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let mut base = self.atom()?;
        while let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            let e = self.exponent()?;
            base = base.int_pow(e)?;
        }
        Ok(base)
    }

    /// Exponent: INT, `-INT`, or a parenthesized signed integer.
    fn exponent(&mut self) -> Result<i64> {
        let pos = self.here();
        match self.bump() {
            Some((Tok::Int(n), _)) => int_to_i64(&n, pos),
            Some((Tok::Minus, _)) => match self.bump() {
                Some((Tok::Int(n), _)) => Ok(-int_to_i64(&n, pos)?),
                other => Err(Error::Syntax {
                    pos: other.map(|(_, p)| p).unwrap_or(self.end),
                    msg: "expected integer exponent after `-`".to_string(),
                }),
            },
            Some((Tok::LParen, _)) => {
                let e = self.exponent()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(e),
                    other => Err(Error::Syntax {
                        pos: other.map(|(_, p)| p).unwrap_or(self.end),
                        msg: "expected `)` closing exponent".to_string(),
                    }),
                }
            }
            other => Err(Error::Syntax {
                pos: other.map(|(_, p)| p).unwrap_or(self.end),
                msg: "expected integer exponent".to_string(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        let pos = self.here();
        match self.bump() {
            Some((Tok::Int(n), _)) => Ok(Scalar::from_rational(
                self.chart.clone(),
                num::BigRational::from_integer(n),
            )),
            Some((Tok::Ident(name), pos)) => {
                let idx = self
                    .chart
                    .var_index(&name)
                    .ok_or(Error::UnknownSymbol { name, pos })?;
                Ok(self
                    .chart
                    .var(self.chart.var_name(idx))
                    .expect("known symbol"))
            }
            Some((Tok::LParen, _)) => {
                let s = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(s),
                    other => Err(Error::Syntax {
                        pos: other.map(|(_, p)| p).unwrap_or(self.end),
                        msg: "expected `)`".to_string(),
                    }),
                }
            }
            Some((tok, pos)) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos,
                msg: "unexpected end of expression".to_string(),
            }),
        }
    }
}

fn int_to_i64(n: &BigInt, pos: usize) -> Result<i64> {
    i64::try_from(n.clone()).map_err(|_| Error::Syntax {
        pos,
        msg: format!("exponent {n} out of range"),
    })
}
