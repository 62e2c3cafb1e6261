use std::sync::Arc;

use super::{Arg, Cert, Expr};
use crate::completion::{constant_point, CauchyPoint};
use crate::error::{Error, Result};
use crate::families;
use crate::set_algebra::{AlgebraConfig, Element};
use crate::sigma_ops::{complement_pt, countable_union, difference_pt, intersect_pt, union_pt, Family, TailCertificate};

fn usage(message: impl Into<String>) -> Error {
    Error::Usage(message.into())
}

fn require_interval(cfg: &AlgebraConfig, what: &str) -> Result<()> {
    match cfg {
        AlgebraConfig::IntervalUnit => Ok(()),
        AlgebraConfig::FiniteWeighted(_) => Err(usage(format!("{what} needs the interval algebra"))),
    }
}

fn int_args(name: &str, args: &[Arg], arity: usize) -> Result<Vec<u64>> {
    if args.len() != arity {
        return Err(usage(format!("{name} takes {arity} argument(s), got {}", args.len())));
    }
    args.iter()
        .map(|a| match a {
            Arg::Int(n) => Ok(*n),
            Arg::Expr(Expr::Index(_)) => Err(usage(format!("index variable in {name} outside a cup member"))),
            other => Err(usage(format!("{name} expects an integer argument, got {other}"))),
        })
        .collect()
}

/// The point-valued builtins by name.
pub fn builtin(name: &str, params: &[u64]) -> Result<CauchyPoint> {
    let arity = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(usage(format!("{name} takes {n} argument(s), got {}", params.len())))
        }
    };
    match name {
        "fatcantor" => arity(0).map(|_| families::fat_cantor()),
        "increasing" => arity(0).map(|_| families::increasing()),
        "perturb" => arity(1).map(|_| families::perturb(params[0])),
        "dyadicblocks" => arity(1).map(|_| families::dyadic_blocks(params[0])),
        "prefix" => arity(1).map(|_| families::prefix(params[0])),
        _ => Err(usage(format!("unknown builtin '{name}'"))),
    }
}

/// Evaluates an expression with no limiting builtins to a canonical element.
pub fn eval_element(e: &Expr, cfg: &AlgebraConfig) -> Result<Element> {
    match e {
        Expr::Interval(lo, hi) => {
            require_interval(cfg, "an interval literal")?;
            Element::from_raw_intervals(&[(lo.clone(), hi.clone())])
        }
        Expr::Atoms(atoms) => match cfg {
            AlgebraConfig::FiniteWeighted(_) => Element::from_atoms(cfg, atoms),
            AlgebraConfig::IntervalUnit => Err(usage("atom literals need a finite algebra")),
        },
        Expr::Name(n) if n == "empty" => Ok(Element::empty(cfg)),
        Expr::Name(n) if n == "universe" => Ok(Element::universe(cfg)),
        Expr::Name(n) if n == "fatcantor" || n == "increasing" => {
            Err(usage(format!("'{n}' is a limit, not an element; use measure or dist")))
        }
        Expr::Name(n) => Err(usage(format!("unknown name '{n}'"))),
        Expr::Call(n, args) if n == "dyadicblocks" || n == "prefix" => {
            require_interval(cfg, n)?;
            let k = int_args(n, args, 1)?[0];
            Ok(if n == "prefix" { families::prefix_element(k) } else { families::dyadic_block_element(k) })
        }
        Expr::Call(n, _) => Err(usage(format!("'{n}(..)' is not an element of the algebra"))),
        Expr::Index(_) => Err(usage("index variable outside a cup member")),
        Expr::Union(a, b) => eval_element(a, cfg)?.union(&eval_element(b, cfg)?),
        Expr::Intersect(a, b) => eval_element(a, cfg)?.intersect(&eval_element(b, cfg)?),
        Expr::Diff(a, b) => eval_element(a, cfg)?.difference(&eval_element(b, cfg)?),
        Expr::Complement(a) => Ok(eval_element(a, cfg)?.complement()),
    }
}

fn is_element(e: &Expr) -> bool {
    match e {
        Expr::Interval(..) | Expr::Atoms(_) => true,
        Expr::Name(n) => n == "empty" || n == "universe",
        Expr::Call(n, args) => (n == "dyadicblocks" || n == "prefix") && matches!(args.as_slice(), [Arg::Int(_)]),
        Expr::Index(_) => false,
        Expr::Union(a, b) | Expr::Intersect(a, b) | Expr::Diff(a, b) => is_element(a) && is_element(b),
        Expr::Complement(a) => is_element(a),
    }
}

/// Evaluates any expression to a completion point. Element-valued subtrees
/// become constant points, so their enclosures stay exact.
pub fn eval_point(e: &Expr, cfg: &AlgebraConfig) -> Result<CauchyPoint> {
    if is_element(e) {
        return Ok(constant_point(eval_element(e, cfg)?).relabel(e.to_string()));
    }
    match e {
        Expr::Name(n) => {
            require_interval(cfg, n)?;
            builtin(n, &[])
        }
        Expr::Call(n, args) if n == "shift" => {
            let [Arg::Expr(inner), Arg::Int(s)] = args.as_slice() else {
                return Err(usage("shift takes a point and an integer"));
            };
            Ok(eval_point(inner, cfg)?.shift(*s as usize))
        }
        Expr::Call(n, args) if n == "cup" => {
            let [Arg::Expr(member), Arg::Cert(cert)] = args.as_slice() else {
                return Err(usage("cup takes a member expression and a tail certificate"));
            };
            let family = eval_family(member, cfg)?;
            let union = countable_union(&family, eval_cert(cert, cfg)?)?;
            Ok(union.point().clone().relabel(e.to_string()))
        }
        Expr::Call(n, args) => {
            require_interval(cfg, n)?;
            let arity = if n == "perturb" { 1 } else { args.len() };
            builtin(n, &int_args(n, args, arity)?)
        }
        Expr::Union(a, b) => union_pt(&eval_point(a, cfg)?, &eval_point(b, cfg)?),
        Expr::Intersect(a, b) => intersect_pt(&eval_point(a, cfg)?, &eval_point(b, cfg)?),
        Expr::Diff(a, b) => difference_pt(&eval_point(a, cfg)?, &eval_point(b, cfg)?),
        Expr::Complement(a) => Ok(complement_pt(&eval_point(a, cfg)?)),
        Expr::Index(_) => Err(usage("index variable outside a cup member")),
        Expr::Interval(..) | Expr::Atoms(_) => unreachable!("element literals handled above"),
    }
}

fn mentions_index(e: &Expr) -> bool {
    match e {
        Expr::Index(_) => true,
        Expr::Call(n, _) if n == "cup" => false,
        Expr::Call(_, args) => args.iter().any(|a| matches!(a, Arg::Expr(x) if mentions_index(x))),
        Expr::Union(a, b) | Expr::Intersect(a, b) | Expr::Diff(a, b) => mentions_index(a) || mentions_index(b),
        Expr::Complement(a) => mentions_index(a),
        _ => false,
    }
}

// Binds `i` in builtin arguments. Nested cups keep their own index.
fn substitute(e: &Expr, i: u64) -> Expr {
    let sub = |x: &Expr| Box::new(substitute(x, i));
    match e {
        Expr::Call(n, args) if n != "cup" => Expr::Call(
            n.clone(),
            args.iter()
                .map(|a| match a {
                    Arg::Expr(Expr::Index(c)) => Arg::Int(i.saturating_add(*c)),
                    Arg::Expr(x) => Arg::Expr(substitute(x, i)),
                    other => other.clone(),
                })
                .collect(),
        ),
        Expr::Union(a, b) => Expr::Union(sub(a), sub(b)),
        Expr::Intersect(a, b) => Expr::Intersect(sub(a), sub(b)),
        Expr::Diff(a, b) => Expr::Diff(sub(a), sub(b)),
        Expr::Complement(a) => Expr::Complement(sub(a)),
        other => other.clone(),
    }
}

/// The family `i ↦ member[i]`, for `i = 0, 1, 2, ...`. Members that are
/// elements for every `i` give a family of constant points.
pub fn eval_family(member: &Expr, cfg: &AlgebraConfig) -> Result<Family> {
    let label = member.to_string();
    let first = substitute(member, 0);
    let member = Arc::new(member.clone());
    let cfg2 = cfg.clone();
    if is_element(&first) {
        eval_element(&first, cfg)?;
        return Ok(Family::constants(cfg.clone(), label, move |i| {
            eval_element(&substitute(&member, i as u64), &cfg2).expect("member 0 evaluated")
        }));
    }
    eval_point(&first, cfg)?;
    if !mentions_index(&member) {
        let p = eval_point(&member, cfg)?;
        return Ok(Family::points(cfg.clone(), label, move |_| p.clone()));
    }
    Ok(Family::points(cfg.clone(), label, move |i| {
        eval_point(&substitute(&member, i as u64), &cfg2).expect("member 0 evaluated")
    }))
}

/// A negative or undefined bound value is replaced by `μ(X)`, which is
/// always a valid tail bound.
pub fn eval_cert(c: &Cert, cfg: &AlgebraConfig) -> Result<TailCertificate> {
    Ok(match c {
        Cert::Increasing => TailCertificate::Increasing,
        Cert::Cap(0) => return Err(usage("search cap must be positive")),
        Cert::Cap(n) => TailCertificate::SearchCap(usize::try_from(*n).unwrap_or(usize::MAX)),
        Cert::Summable(b) => {
            b.eval(0)?;
            let b = b.clone();
            let mass = cfg.total_mass();
            TailCertificate::summable(move |n| match b.eval(n as u64) {
                Ok(v) if !v.is_negative() => v.min(mass.clone()),
                _ => mass.clone(),
            })
        }
    })
}
