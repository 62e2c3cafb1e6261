use num::BigInt;

use super::lexer::{tokenize, Tok, Token};
use super::{Arg, Bound, Cert, Expr};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// Parses a set expression. Whitespace is insignificant; errors carry the
/// line and column of the offending token.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

/// Parses a tail certificate: `increasing`, `cap:<int>` or
/// `summable:<expression in N>`.
pub fn parse_cert(text: &str) -> Result<Cert> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let c = p.cert()?;
    p.expect(Tok::Eof)?;
    Ok(c)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    // expr := and_term (('|' | '\') and_term)*
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.and_term()?;
        loop {
            match self.peek() {
                Tok::Pipe => {
                    self.next();
                    lhs = Expr::Union(Box::new(lhs), Box::new(self.and_term()?));
                }
                Tok::Backslash => {
                    self.next();
                    lhs = Expr::Diff(Box::new(lhs), Box::new(self.and_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn and_term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            lhs = Expr::Intersect(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Bang {
            self.next();
            return Ok(Expr::Complement(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.next();
                let lo = self.rational()?;
                self.expect(Tok::Comma)?;
                let hi = self.rational()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Interval(lo, hi))
            }
            Tok::LBrace => {
                self.next();
                let mut atoms = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        atoms.push(self.atom()?);
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.next();
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(Expr::Atoms(atoms))
            }
            Tok::Ident(name) if name == "i" => {
                self.next();
                Ok(Expr::Index(self.index_offset()?))
            }
            Tok::Ident(name) => {
                self.next();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Name(name));
                }
                self.next();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        let arg = if name == "cup" && args.len() == 1 { Arg::Cert(self.cert()?) } else { self.arg()? };
                        args.push(arg);
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.next();
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::Call(name, args))
            }
            other => Err(self.error(format!("expected a set expression, found {}", other.describe()))),
        }
    }

    fn index_offset(&mut self) -> Result<u64> {
        if *self.peek() == Tok::Plus {
            self.next();
            return self.uint();
        }
        Ok(0)
    }

    fn arg(&mut self) -> Result<Arg> {
        if matches!(self.peek(), Tok::Int(_)) {
            return Ok(Arg::Int(self.uint()?));
        }
        Ok(Arg::Expr(self.expr()?))
    }

    fn atom(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Ident(s) if s.len() > 1 && s.starts_with('a') && s[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let n = s[1..].parse().map_err(|_| self.error(format!("atom index in '{s}' is too large")))?;
                self.next();
                Ok(n)
            }
            other => Err(self.error(format!("expected an atom like a0, found {}", other.describe()))),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let n = s.parse().map_err(|_| self.error(format!("integer {s} is too large")))?;
                self.next();
                Ok(n)
            }
            other => Err(self.error(format!("expected an integer, found {}", other.describe()))),
        }
    }

    fn bigint(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.next();
                Ok(s.parse().expect("lexer yields digit strings"))
            }
            other => Err(self.error(format!("expected an integer, found {}", other.describe()))),
        }
    }

    // rat := int | int '/' int
    fn rational(&mut self) -> Result<Rational> {
        let n = self.bigint()?;
        if *self.peek() != Tok::Slash {
            return Ok(Rational::from_big(n.into()));
        }
        self.next();
        let at_denominator = self.error("zero denominator");
        let d = self.bigint()?;
        Rational::from_bigints(n, d).ok_or(at_denominator)
    }

    fn cert(&mut self) -> Result<Cert> {
        let name = match self.peek().clone() {
            Tok::Ident(s) => s,
            other => return Err(self.error(format!("expected a tail certificate, found {}", other.describe()))),
        };
        match name.as_str() {
            "increasing" => {
                self.next();
                Ok(Cert::Increasing)
            }
            "cap" => {
                self.next();
                self.expect(Tok::Colon)?;
                Ok(Cert::Cap(self.uint()?))
            }
            "summable" => {
                self.next();
                self.expect(Tok::Colon)?;
                Ok(Cert::Summable(self.bound_sum()?))
            }
            _ => Err(self.error(format!("unknown tail certificate '{name}'"))),
        }
    }

    fn bound_sum(&mut self) -> Result<Bound> {
        let mut lhs = self.bound_product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Bound::Add,
                Tok::Minus => Bound::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = op(Box::new(lhs), Box::new(self.bound_product()?));
        }
    }

    fn bound_product(&mut self) -> Result<Bound> {
        let mut lhs = self.bound_power()?;
        loop {
            let op = match self.peek() {
                Tok::Star => Bound::Mul,
                Tok::Slash => Bound::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = op(Box::new(lhs), Box::new(self.bound_power()?));
        }
    }

    // '^' is right-associative and binds tighter than unary minus on its
    // left, as in `-2^N = -(2^N)`.
    fn bound_power(&mut self) -> Result<Bound> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Bound::Neg(Box::new(self.bound_power()?)));
        }
        let base = self.bound_atom()?;
        if *self.peek() == Tok::Caret {
            self.next();
            return Ok(Bound::Pow(Box::new(base), Box::new(self.bound_power()?)));
        }
        Ok(base)
    }

    fn bound_atom(&mut self) -> Result<Bound> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(Bound::Const(self.bigint()?)),
            Tok::Ident(s) if s == "N" => {
                self.next();
                Ok(Bound::N)
            }
            Tok::LParen => {
                self.next();
                let b = self.bound_sum()?;
                self.expect(Tok::RParen)?;
                Ok(b)
            }
            other => Err(self.error(format!("expected a bound term, found {}", other.describe()))),
        }
    }
}
