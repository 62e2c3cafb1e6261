//! Builtin sequences with proven moduli.
//!
//! * `fatcantor`: stage `n` removes, from each of the `2^(n−1)` surviving
//!   blocks, the centered middle interval of length `4^-n`. Stages are
//!   nested and `μ(stage n) = 1/2 + 2^(−n−1)`, so for `m > n`
//!   `d(stage n, stage m) = 2^(−n−1) − 2^(−m−1) < 2^-n`: modulus `k ↦ k`.
//! * `increasing`: `[0, 1 − 1/(i+2))`. `d(i, j) < 1/(min(i,j)+2)`, so
//!   modulus `k ↦ 2^k`.
//! * `perturb(seed)`: a random walk `B_i = B_{i−1} △ D_i` with
//!   `μ(D_i) ≤ 2^(−i−1)`. For `i < j`, `d(B_i, B_j) ≤ Σ_{t>i} 2^(−t−1) <
//!   2^(−i−1)`: modulus `k ↦ k`.
//! * `dyadicblocks(i)`: the constant point `[1 − 2^-i, 1 − 2^(−i−1))`.
//! * `prefix(i)`: the constant point `[0, 1 − 1/(i+2))`, i.e. the i-th
//!   approximant of `increasing`.

use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::completion::{constant_point, CauchyPoint};
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element, Interval, IntervalSet};

// Stage 18 has 2^18 parts; deeper stages are rebuilt on demand.
const CACHED_STAGES: usize = 18;

static STAGES: OnceLock<Mutex<Vec<IntervalSet>>> = OnceLock::new();

fn next_stage(prev: &IntervalSet, n: usize) -> IntervalSet {
    let half_gap = Rational::pow2(-2 * n as i64 - 1);
    let two = Rational::from_integer(2);
    let mut parts = Vec::with_capacity(prev.len() * 2);
    for block in prev.parts() {
        let center = (block.lo() + block.hi()) / &two;
        parts.push(Interval::new_unchecked(block.lo().clone(), &center - &half_gap));
        parts.push(Interval::new_unchecked(&center + &half_gap, block.hi().clone()));
    }
    IntervalSet::from_canonical(parts)
}

/// Stage `n` of the fat Cantor construction; stage 0 is `[0, 1)`.
pub fn fat_cantor_stage(n: usize) -> IntervalSet {
    let cache = STAGES.get_or_init(|| Mutex::new(vec![IntervalSet::universe()]));
    let cached = {
        let mut stages = cache.lock().expect("stage cache poisoned");
        while stages.len() <= n.min(CACHED_STAGES) {
            let k = stages.len();
            let s = next_stage(&stages[k - 1], k);
            stages.push(s);
        }
        stages[n.min(CACHED_STAGES)].clone()
    };
    (CACHED_STAGES + 1..=n).fold(cached, |s, k| next_stage(&s, k))
}

pub fn fat_cantor() -> CauchyPoint {
    CauchyPoint::new(
        AlgebraConfig::IntervalUnit,
        "fatcantor",
        |n| Element::from_intervals(fat_cantor_stage(n)),
        |k| k as usize,
    )
}

/// `[0, 1 − 1/(i+2))`.
pub fn prefix_element(i: u64) -> Element {
    let hi = Rational::one() - Rational::new(1, i as i64 + 2);
    Element::from_intervals(IntervalSet::from_canonical(vec![Interval::new_unchecked(
        Rational::zero(),
        hi,
    )]))
}

pub fn increasing() -> CauchyPoint {
    CauchyPoint::new(
        AlgebraConfig::IntervalUnit,
        "increasing",
        |i| prefix_element(i as u64),
        |k| 1usize.checked_shl(k).unwrap_or(usize::MAX),
    )
}

/// `[1 − 2^-i, 1 − 2^(−i−1))`.
pub fn dyadic_block_element(i: u64) -> Element {
    let lo = Rational::one() - Rational::pow2(-(i as i64));
    let hi = Rational::one() - Rational::pow2(-(i as i64) - 1);
    Element::from_intervals(IntervalSet::from_canonical(vec![Interval::new_unchecked(lo, hi)]))
}

pub fn dyadic_blocks(i: u64) -> CauchyPoint {
    constant_point(dyadic_block_element(i)).relabel(format!("dyadicblocks({i})"))
}

pub fn prefix(i: u64) -> CauchyPoint {
    constant_point(prefix_element(i)).relabel(format!("prefix({i})"))
}

// Parts of B_0 and every step D_t sit on the grid of multiples of 2^-(t+4).
fn perturb_start(seed: u64) -> IntervalSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = rng.gen_range(1..=3);
    let mut raw = Vec::with_capacity(parts);
    for _ in 0..parts {
        let a: i64 = rng.gen_range(0..16);
        let b: i64 = rng.gen_range(0..=16);
        let (a, b) = (a.min(b), a.max(b));
        raw.push((Rational::new(a, 16), Rational::new(b, 16)));
    }
    crate::set_algebra::canonicalize(&raw).expect("grid endpoints lie in [0, 1]")
}

fn perturb_step(seed: u64, t: usize) -> IntervalSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let exp = t as i64 + 4;
    let coarse = exp.min(60);
    // length ≤ 8 cells of 2^-(t+4) = 2^(-t-1)
    let cells: i64 = rng.gen_range(1..=8);
    let start: i64 = rng.gen_range(0..=(1i64 << coarse) - 8);
    let lo = Rational::new(start, 1i64 << coarse);
    let hi = &lo + &(Rational::from_integer(cells) * Rational::pow2(-exp));
    IntervalSet::from_canonical(vec![Interval::new_unchecked(lo, hi)])
}

/// The seeded walk, memoized per point.
pub fn perturb(seed: u64) -> CauchyPoint {
    let walk: Arc<Mutex<Vec<IntervalSet>>> = Arc::new(Mutex::new(vec![perturb_start(seed)]));
    CauchyPoint::new(
        AlgebraConfig::IntervalUnit,
        format!("perturb({seed})"),
        move |i| {
            let mut w = walk.lock().expect("walk cache poisoned");
            while w.len() <= i {
                let t = w.len();
                let next = w[t - 1].symm_diff(&perturb_step(seed, t));
                w.push(next);
            }
            Element::from_intervals(w[i].clone())
        },
        |k| k as usize,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::check_modulus;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn fat_cantor_first_stages() {
        let s1 = fat_cantor_stage(1);
        let expected = crate::set_algebra::canonicalize(&[(q("0"), q("3/8")), (q("5/8"), q("1"))]).unwrap();
        assert_eq!(s1, expected);
        assert_eq!(fat_cantor_stage(2).len(), 4);
        assert_eq!(fat_cantor_stage(2).measure(), q("5/8"));
    }

    #[test]
    fn fat_cantor_closed_form_measures() {
        // μ(stage n) = 1 − Σ_{k≤n} 2^(k−1)·4^(−k), summed term by term.
        let mut partial = Rational::one();
        for n in 1..=20usize {
            partial = partial - Rational::pow2(n as i64 - 1) * Rational::pow2(-2 * n as i64);
            let stage = fat_cantor_stage(n);
            assert_eq!(stage.measure(), partial, "stage {n}");
            assert_eq!(partial, q("1/2") + Rational::pow2(-(n as i64) - 1));
            assert_eq!(stage.len(), 1 << n);
        }
    }

    #[test]
    fn fat_cantor_stages_nested() {
        for n in 0..10 {
            assert!(fat_cantor_stage(n + 1).is_subset(&fat_cantor_stage(n)));
        }
    }

    #[test]
    fn increasing_approximants() {
        let inc = increasing();
        assert_eq!(inc.approximant(2), Element::from_raw_intervals(&[(q("0"), q("3/4"))]).unwrap());
        assert_eq!(inc.modulus(5), 32);
    }

    #[test]
    fn dyadic_blocks_examples() {
        let b = dyadic_blocks(1);
        assert_eq!(b.approximant(0), Element::from_raw_intervals(&[(q("1/2"), q("3/4"))]).unwrap());
        assert_eq!(b.settled(), Some(0));
        assert_eq!(dyadic_block_element(3).measure(), q("1/16"));
    }

    #[test]
    fn perturb_is_deterministic_and_decays() {
        let a = perturb(11);
        let b = perturb(11);
        for i in [0, 3, 9, 4] {
            assert_eq!(a.approximant(i), b.approximant(i));
        }
        for t in 1..20usize {
            assert!(perturb_step(11, t).measure() <= Rational::pow2(-(t as i64) - 1));
        }
        assert_ne!(perturb(12).approximant(10), a.approximant(10));
    }

    #[test]
    fn builtins_pass_modulus_check() {
        for p in [fat_cantor(), increasing(), perturb(3), perturb(99), dyadic_blocks(4), prefix(6)] {
            assert!(check_modulus(&p, 12), "{}", p.label());
        }
    }
}
