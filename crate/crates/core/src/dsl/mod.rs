//! A small text language for elements, completion points and countable
//! unions.
//!
//! ```text
//! expr  := and (('|' | '\') and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | primary
//! primary := '(' expr ')' | '[' rat ',' rat ')' | '{' atoms '}'
//!          | ident | ident '(' args ')' | 'i' ('+' int)?
//! rat   := int | int '/' int
//! ```
//!
//! `!` binds tightest, then `&`, then `|` and `\` (left-associative).
//! Builtins: `empty`, `universe`, `fatcantor`, `increasing`, `perturb(seed)`,
//! `dyadicblocks(n)`, `prefix(n)`, `shift(expr, s)` and
//! `cup(member, cert)`, where `member` may use the index `i` or `i+c` as a
//! builtin argument and `cert` is `increasing`, `cap:<int>` or
//! `summable:<expression in N>`.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use num::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use eval::{builtin, eval_cert, eval_element, eval_family, eval_point};
pub use parser::{parse, parse_cert};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Interval(Rational, Rational),
    Atoms(Vec<u32>),
    Name(String),
    Call(String, Vec<Arg>),
    /// The family index `i + offset`.
    Index(u64),
    Union(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Complement(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Int(u64),
    Expr(Expr),
    Cert(Cert),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cert {
    Increasing,
    Cap(u64),
    Summable(Bound),
}

/// Arithmetic in the member count `N`, for summable tail bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Const(BigInt),
    N,
    Neg(Box<Bound>),
    Add(Box<Bound>, Box<Bound>),
    Sub(Box<Bound>, Box<Bound>),
    Mul(Box<Bound>, Box<Bound>),
    Div(Box<Bound>, Box<Bound>),
    Pow(Box<Bound>, Box<Bound>),
}

impl Bound {
    pub fn eval(&self, n: u64) -> Result<Rational> {
        Ok(match self {
            Bound::Const(c) => Rational::from_big(c.clone().into()),
            Bound::N => Rational::from_big(BigInt::from(n).into()),
            Bound::Neg(a) => -a.eval(n)?,
            Bound::Add(a, b) => a.eval(n)? + b.eval(n)?,
            Bound::Sub(a, b) => a.eval(n)? - b.eval(n)?,
            Bound::Mul(a, b) => a.eval(n)? * b.eval(n)?,
            Bound::Div(a, b) => {
                let d = b.eval(n)?;
                if d.is_zero() {
                    return Err(Error::Usage(format!("bound divides by zero at N = {n}")));
                }
                a.eval(n)? / d
            }
            Bound::Pow(a, b) => {
                let base = a.eval(n)?;
                let exp = b.eval(n)?;
                let e = (exp.denom() == BigInt::from(1))
                    .then(|| i32::try_from(exp.numer()).ok())
                    .flatten()
                    .ok_or_else(|| Error::Usage(format!("bound exponent {exp} is not a small integer")))?;
                if base == Rational::from_integer(2) {
                    Rational::pow2(e as i64)
                } else {
                    base.pow(e).ok_or_else(|| Error::Usage(format!("bound evaluates 0^{e}")))?
                }
            }
        })
    }
}

// Integers print without a denominator; every other rational as p/q.
struct Lit<'a>(&'a Rational);

impl fmt::Display for Lit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom() == BigInt::from(1) {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with every binary operation parenthesized, so the output parses
/// back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Interval(lo, hi) => write!(f, "[{},{})", Lit(lo), Lit(hi)),
            Expr::Atoms(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|a| format!("a{a}")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Expr::Name(n) => f.write_str(n),
            Expr::Call(n, args) => {
                let parts: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{n}({})", parts.join(", "))
            }
            Expr::Index(0) => f.write_str("i"),
            Expr::Index(c) => write!(f, "i+{c}"),
            Expr::Union(a, b) => write!(f, "({a} | {b})"),
            Expr::Intersect(a, b) => write!(f, "({a} & {b})"),
            Expr::Diff(a, b) => write!(f, "({a} \\ {b})"),
            Expr::Complement(a) => write!(f, "!{a}"),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Expr(e) => write!(f, "{e}"),
            Arg::Cert(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Cert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cert::Increasing => f.write_str("increasing"),
            Cert::Cap(n) => write!(f, "cap:{n}"),
            Cert::Summable(b) => write!(f, "summable:{b}"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Const(c) => write!(f, "{c}"),
            Bound::N => f.write_str("N"),
            Bound::Neg(a) => write!(f, "(-{a})"),
            Bound::Add(a, b) => write!(f, "({a} + {b})"),
            Bound::Sub(a, b) => write!(f, "({a} - {b})"),
            Bound::Mul(a, b) => write!(f, "({a} * {b})"),
            Bound::Div(a, b) => write!(f, "({a} / {b})"),
            Bound::Pow(a, b) => write!(f, "({a}^{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn precedence() {
        let e = parse("[0,1/2) | [3/4,1)").unwrap();
        assert_eq!(
            e,
            Expr::Union(Box::new(Expr::Interval(q("0"), q("1/2"))), Box::new(Expr::Interval(q("3/4"), q("1"))))
        );
        let e = parse("!([0,1/3) & [1/4,1))").unwrap();
        assert!(matches!(e, Expr::Complement(ref inner) if matches!(**inner, Expr::Intersect(..))));
        // & binds tighter than | and \, which associate left.
        assert_eq!(parse("a | b & c").unwrap().to_string(), "(a | (b & c))");
        assert_eq!(parse("a \\ b | c").unwrap().to_string(), "((a \\ b) | c)");
        assert_eq!(parse("!a & b").unwrap().to_string(), "(!a & b)");
        assert!(parse("[1/2,1/4)").is_ok());
    }

    #[test]
    fn parse_errors_have_positions() {
        let cases = [("!", 1, 2), ("[0,1/2", 1, 7), ("[0, 1/0)", 1, 7), ("a |\n  | b", 2, 3), ("cup(x, bogus)", 1, 8)];
        for (text, line, column) in cases {
            match parse(text) {
                Err(Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn families_and_certificates() {
        let e = parse("cup(dyadicblocks(i+1), summable:2^(-N-1))").unwrap();
        assert_eq!(e.to_string(), "cup(dyadicblocks(i+1), summable:(2^((-N) - 1)))");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
        let c = parse_cert("summable:2^(-N-1)").unwrap();
        let Cert::Summable(b) = c else { panic!() };
        assert_eq!(b.eval(3).unwrap(), q("1/16"));
        assert_eq!(parse_cert("cap:12").unwrap(), Cert::Cap(12));
        assert_eq!(parse_cert("increasing").unwrap(), Cert::Increasing);
        assert!(parse_cert("summable:1/(N-N)").map(|c| match c {
            Cert::Summable(b) => b.eval(0).is_err(),
            _ => false,
        }).unwrap());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "[0,1/2) | [3/4,1)",
            "!!{a0,a3} \\ {}",
            "shift(fatcantor & [0,1/2), 3) | perturb(7)",
            "cup(prefix(i), increasing) & !cup(perturb(i) & [0,1/8), cap:40)",
            "[2/4,1) & universe",
        ] {
            let e = parse(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{text} -> {printed}");
            assert_eq!(parse(&printed).unwrap().to_string(), printed);
        }
    }
}
