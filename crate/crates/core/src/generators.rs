//! Seeded random inputs for the verification suites and property tests.
//!
//! Interval sets have a geometric number of parts with dyadic breakpoints of
//! bounded denominator, which keeps the arithmetic small while still
//! exercising merging and canonicalization.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::completion::CauchyPoint;
use crate::dsl::{Arg, Bound, Cert, Expr};
use crate::families;
use crate::outer_measure::Cover;
use crate::rational::Rational;
use crate::set_algebra::{canonicalize, AlgebraConfig, Element, IntervalSet};

/// The generator for trial `index` of a run seeded with `seed`. Trials get
/// independent streams, so their order of evaluation does not matter.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn geometric(rng: &mut impl Rng, cap: usize) -> usize {
    let mut n = 0;
    while n < cap && rng.gen_bool(0.5) {
        n += 1;
    }
    n
}

pub fn random_interval_set(rng: &mut impl Rng) -> IntervalSet {
    let parts = geometric(rng, 8);
    let bits = rng.gen_range(1..=10u32);
    let grid = 1usize << bits;
    let count = (2 * parts).min(grid + 1);
    let mut points: Vec<usize> = sample(rng, grid + 1, count).into_vec();
    points.sort_unstable();
    let raw: Vec<(Rational, Rational)> = points
        .chunks_exact(2)
        .map(|c| (Rational::new(c[0] as i64, grid as i64), Rational::new(c[1] as i64, grid as i64)))
        .collect();
    canonicalize(&raw).expect("grid points lie in [0, 1]")
}

pub fn random_element(rng: &mut impl Rng, cfg: &AlgebraConfig) -> Element {
    match cfg {
        AlgebraConfig::IntervalUnit => Element::from_intervals(random_interval_set(rng)),
        AlgebraConfig::FiniteWeighted(w) => {
            let full = if w.len() == 64 { u64::MAX } else { (1u64 << w.len()) - 1 };
            Element::from_mask(cfg, rng.gen::<u64>() & full).expect("mask fits the atoms")
        }
    }
}

/// Seeded positive weights on the grid of 1/16, for the finite oracle.
pub fn random_weights(rng: &mut impl Rng, atoms: usize) -> Vec<Rational> {
    (0..atoms).map(|_| Rational::new(rng.gen_range(1..=16), 16)).collect()
}

fn widen(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let pad = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(0.5) {
            Rational::zero()
        } else {
            Rational::pow2(-(rng.gen_range(2..=12) as i64))
        }
    };
    let lo = lo - &pad(rng);
    let hi = hi + &pad(rng);
    (lo.max(Rational::zero()), hi.min(Rational::one()))
}

/// A finite cover of `e`, or occasionally a random family that may fail to
/// cover it. Pieces overlap and overshoot `e`.
pub fn random_cover(rng: &mut impl Rng, e: &Element) -> Cover {
    let cfg = e.config();
    let mut pieces = Vec::new();
    let honest = rng.gen_bool(0.85);
    match (e.as_intervals(), honest) {
        (Some(set), true) => {
            for part in set.parts() {
                // Split at a dyadic point inside the part, then pad each side.
                let cut = rng.gen_bool(0.5).then(|| {
                    let t = Rational::new(rng.gen_range(1..16), 16);
                    part.lo() + &(t * part.length())
                });
                let bounds = match cut {
                    Some(c) => vec![(part.lo().clone(), c.clone()), (c, part.hi().clone())],
                    None => vec![(part.lo().clone(), part.hi().clone())],
                };
                for (lo, hi) in bounds {
                    let (lo, hi) = widen(rng, &lo, &hi);
                    pieces.push(Element::from_raw_intervals(&[(lo, hi)]).expect("widened within [0, 1]"));
                }
            }
        }
        (None, true) => {
            let mask = e.as_atoms().expect("finite element").mask();
            let full = e.complement().as_atoms().expect("finite element").mask() | mask;
            let mut left = mask;
            while left != 0 {
                let take = left & (rng.gen::<u64>() | (left & left.wrapping_neg()));
                pieces.push(Element::from_mask(cfg, (take | (rng.gen::<u64>() & full)) & full).expect("mask fits"));
                left &= !take;
            }
        }
        (_, false) => {}
    }
    for _ in 0..geometric(rng, 3) {
        pieces.push(random_element(rng, cfg));
    }
    if pieces.is_empty() {
        pieces.push(random_element(rng, cfg));
    }
    pieces.shuffle(rng);
    Cover::new(pieces).expect("pieces share the element's configuration")
}

/// One of `fatcantor`, `increasing` or `perturb(seed)`.
pub fn random_point(rng: &mut impl Rng) -> CauchyPoint {
    match rng.gen_range(0..3) {
        0 => families::fat_cantor(),
        1 => families::increasing(),
        _ => families::perturb(rng.gen()),
    }
}

/// A re-indexing `i ↦ g(i)` with `g` nondecreasing, `g(i) ≥ i` and
/// `g(i) ≤ i + 3`, described by a short label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reindex {
    Shift(usize),
    ParityShift(usize),
    CappedDouble(usize),
}

impl Reindex {
    pub fn random(rng: &mut impl Rng) -> Self {
        match rng.gen_range(0..3) {
            0 => Reindex::Shift(rng.gen_range(0..=3)),
            1 => Reindex::ParityShift(rng.gen_range(0..=2)),
            _ => Reindex::CappedDouble(rng.gen_range(1..=3)),
        }
    }

    pub fn map(self, i: usize) -> usize {
        match self {
            Reindex::Shift(c) => i + c,
            Reindex::ParityShift(c) => i + i % 2 + c,
            Reindex::CappedDouble(c) => i + i.min(c),
        }
    }

    pub fn apply(self, x: &CauchyPoint) -> CauchyPoint {
        let label = match self {
            Reindex::Shift(c) => format!("{}∘(i+{c})", x.label()),
            Reindex::ParityShift(c) => format!("{}∘(i+i%2+{c})", x.label()),
            Reindex::CappedDouble(c) => format!("{}∘(i+min(i,{c}))", x.label()),
        };
        x.reindex(label, move |i| self.map(i))
    }
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    let d = 1i64 << rng.gen_range(0..=6);
    Rational::new(rng.gen_range(0..=d), d)
}

fn random_bound(rng: &mut impl Rng, depth: u32) -> Bound {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.5) { Bound::N } else { Bound::Const(rng.gen_range(0..20u32).into()) };
    }
    let mut sub = || Box::new(random_bound(rng, depth - 1));
    let (a, b) = (sub(), sub());
    match rng.gen_range(0..6) {
        0 => Bound::Add(a, b),
        1 => Bound::Sub(a, b),
        2 => Bound::Mul(a, b),
        3 => Bound::Div(a, b),
        4 => Bound::Pow(a, b),
        _ => Bound::Neg(a),
    }
}

fn random_int_arg(rng: &mut impl Rng, in_family: bool) -> Arg {
    if in_family && rng.gen_bool(0.5) {
        Arg::Expr(Expr::Index(rng.gen_range(0..3)))
    } else {
        Arg::Int(rng.gen_range(0..100))
    }
}

fn random_leaf(rng: &mut impl Rng, in_family: bool) -> Expr {
    match rng.gen_range(0..8) {
        0 | 1 => Expr::Interval(random_rational(rng), random_rational(rng)),
        2 => {
            let mut atoms: Vec<u32> = (0..geometric(rng, 4)).map(|_| rng.gen_range(0..8)).collect();
            atoms.dedup();
            Expr::Atoms(atoms)
        }
        3 => Expr::Name(["empty", "universe", "fatcantor", "increasing"][rng.gen_range(0..4)].into()),
        4 => Expr::Call("perturb".into(), vec![random_int_arg(rng, in_family)]),
        5 => Expr::Call("dyadicblocks".into(), vec![random_int_arg(rng, in_family)]),
        6 => Expr::Call("prefix".into(), vec![random_int_arg(rng, in_family)]),
        _ => Expr::Index(rng.gen_range(0..3)),
    }
}

/// A random syntax tree of at most `depth` operator levels, for printer and
/// parser round trips. It need not evaluate.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    random_expr_in(rng, depth, false)
}

fn random_expr_in(rng: &mut impl Rng, depth: u32, in_family: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return random_leaf(rng, in_family);
    }
    let sub = |rng: &mut _| Box::new(random_expr_in(rng, depth - 1, in_family));
    match rng.gen_range(0..7) {
        0 => Expr::Union(sub(rng), sub(rng)),
        1 => Expr::Intersect(sub(rng), sub(rng)),
        2 => Expr::Diff(sub(rng), sub(rng)),
        3 => Expr::Complement(sub(rng)),
        4 => Expr::Call("shift".into(), vec![Arg::Expr(*sub(rng)), Arg::Int(rng.gen_range(0..5))]),
        5 => {
            let member = random_expr_in(rng, depth - 1, true);
            let cert = match rng.gen_range(0..3) {
                0 => Cert::Increasing,
                1 => Cert::Cap(rng.gen_range(1..1000)),
                _ => Cert::Summable(random_bound(rng, 3)),
            };
            Expr::Call("cup".into(), vec![Arg::Expr(member), Arg::Cert(cert)])
        }
        _ => random_leaf(rng, in_family),
    }
}
