//! Points of the completion Ω̄.
//!
//! A [`CauchyPoint`] is a sequence of algebra elements together with an
//! explicit modulus: for all `i, j ≥ modulus(k)`, `d(B_i, B_j) ≤ 2^-k`.
//! Limits are never materialized. Distances and measures in the completion
//! come back as [`Enclosure`]s whose width is controlled by the modulus.
//!
//! A point may also declare a settling index `s`: `B_i = B_s` for all
//! `i ≥ s`. Constant points settle at 0, and their enclosures are exact.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::enclosure::Enclosure;
use crate::error::Result;
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element};

type ApproximantFn = Arc<dyn Fn(usize) -> Element + Send + Sync>;
type ModulusFn = Arc<dyn Fn(u32) -> usize + Send + Sync>;
type AuditFn = Arc<dyn Fn(u32) -> Certification + Send + Sync>;

/// Whether a point's modulus contract is backed by a certificate at a given
/// precision. Only countable unions built from a capped search can be
/// partial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Full,
    /// The construction only reached stage `stage`, i.e. precision `1/stage`.
    Partial { stage: usize, precision: Rational },
}

impl Certification {
    pub fn is_full(&self) -> bool {
        matches!(self, Certification::Full)
    }
}

#[derive(Clone)]
pub struct CauchyPoint {
    config: AlgebraConfig,
    approximant: ApproximantFn,
    modulus: ModulusFn,
    settled: Option<usize>,
    audit: Option<AuditFn>,
    label: String,
}

impl CauchyPoint {
    /// `approximant` must be deterministic and `modulus` nondecreasing and
    /// honest; [`check_modulus`] spot-checks the latter.
    pub fn new(
        config: AlgebraConfig,
        label: impl Into<String>,
        approximant: impl Fn(usize) -> Element + Send + Sync + 'static,
        modulus: impl Fn(u32) -> usize + Send + Sync + 'static,
    ) -> Self {
        CauchyPoint {
            config,
            approximant: Arc::new(approximant),
            modulus: Arc::new(modulus),
            settled: None,
            audit: None,
            label: label.into(),
        }
    }

    /// Declares that `approximant(i) == approximant(index)` for all `i ≥ index`.
    pub fn settled_at(mut self, index: usize) -> Self {
        self.settled = Some(index);
        self
    }

    pub(crate) fn with_audit(mut self, audit: AuditFn) -> Self {
        self.audit = Some(audit);
        self
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn settled(&self) -> Option<usize> {
        self.settled
    }

    pub fn approximant(&self, index: usize) -> Element {
        (self.approximant)(index)
    }

    pub fn modulus(&self, k: u32) -> usize {
        (self.modulus)(k)
    }

    /// Certification of the modulus contract at precision `2^-k`.
    pub fn certify(&self, k: u32) -> Certification {
        self.audit.as_ref().map_or(Certification::Full, |a| a(k))
    }

    /// The sequence `i ↦ B_{g(i)}`. `g` must be nondecreasing with
    /// `g(i) ≥ i`, which keeps the original modulus valid.
    pub fn reindex(
        &self,
        label: impl Into<String>,
        g: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> CauchyPoint {
        let inner = self.approximant.clone();
        CauchyPoint {
            config: self.config.clone(),
            approximant: Arc::new(move |i| {
                let j = g(i);
                debug_assert!(j >= i, "reindex map must satisfy g(i) >= i");
                inner(j)
            }),
            modulus: self.modulus.clone(),
            settled: self.settled,
            audit: self.audit.clone(),
            label: label.into(),
        }
    }

    /// The tail `i ↦ B_{i+s}`.
    pub fn shift(&self, s: usize) -> CauchyPoint {
        let label = format!("shift({}, {s})", self.label);
        self.reindex(label, move |i| i + s)
    }
}

impl fmt::Debug for CauchyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyPoint")
            .field("label", &self.label)
            .field("settled", &self.settled)
            .finish_non_exhaustive()
    }
}

/// `E_A`, the class of the constant sequence `A, A, A, ...`.
pub fn constant_point(a: Element) -> CauchyPoint {
    let config = a.config().clone();
    let label = format!("const({})", serde_json::to_string(&a).unwrap_or_default());
    CauchyPoint::new(config, label, move |_| a.clone(), |_| 0).settled_at(0)
}

/// `E_∅`.
pub fn zero_point(config: &AlgebraConfig) -> CauchyPoint {
    constant_point(Element::empty(config)).relabel("zero")
}

/// Spot-checks the modulus contract. For each `k ≤ depth`, every pair of
/// indices in `[modulus(k), modulus(k) + depth − k]` must be within `2^-k`.
/// The window narrows as `k` grows so the deepest index probed stays near
/// `modulus(depth)`; approximant sizes can grow exponentially in the index.
pub fn check_modulus(x: &CauchyPoint, depth: u32) -> bool {
    assert!(depth >= 1, "depth must be positive");
    let mut cache: HashMap<usize, Element> = HashMap::new();
    let mut get = |i: usize| cache.entry(i).or_insert_with(|| x.approximant(i)).clone();
    for k in 0..=depth {
        let start = x.modulus(k);
        let end = start + (depth - k) as usize;
        let bound = Rational::pow2(-(k as i64));
        for i in start..=end {
            let bi = get(i);
            for j in i + 1..=end {
                match bi.distance(&get(j)) {
                    Ok(d) if d <= bound => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// The fast subsequence `n ↦ B_{f(n)}` with `f(n) = max(modulus(n), f(n−1)+1)`.
/// Strictly increasing, and `d(B_{f(n)}, B_{f(m)}) ≤ 2^-n` for all `m ≥ n`.
#[derive(Clone, Debug)]
pub struct FastPoint {
    source: CauchyPoint,
}

pub fn extract_fast(x: &CauchyPoint) -> FastPoint {
    FastPoint { source: x.clone() }
}

impl FastPoint {
    pub fn source(&self) -> &CauchyPoint {
        &self.source
    }

    pub fn config(&self) -> &AlgebraConfig {
        self.source.config()
    }

    /// `f(n)`.
    pub fn index(&self, n: usize) -> usize {
        let mut f = self.source.modulus(0);
        for k in 1..=n {
            let m = self.source.modulus(k.min(u32::MAX as usize) as u32);
            f = m.max(f.saturating_add(1));
        }
        f
    }

    pub fn approximant(&self, n: usize) -> Element {
        self.source.approximant(self.index(n))
    }

    /// True when the n-th fast approximant already equals the limit.
    pub fn is_exact_at(&self, n: usize) -> bool {
        // f(n) ≥ n, so n ≥ s is enough and avoids walking the modulus.
        self.source.settled.is_some_and(|s| n >= s || self.index(n) >= s)
    }

    /// Certified `d̄(B_{f(n)}, limit)`: `2^-n`, or 0 once settled.
    pub fn tail_bound(&self, n: usize) -> Rational {
        if self.is_exact_at(n) {
            Rational::zero()
        } else {
            Rational::pow2(-(n as i64))
        }
    }

    /// The fast sequence as a point in its own right, with `modulus(k) = k`.
    pub fn as_point(&self) -> CauchyPoint {
        let fast = self.clone();
        let mut p = CauchyPoint::new(
            self.config().clone(),
            format!("fast({})", self.source.label),
            move |n| fast.approximant(n),
            |k| k as usize,
        );
        p.settled = self.source.settled;
        p.audit = self.source.audit.clone();
        p
    }
}

/// Enclosure of `d̄(x, y) = lim d(B^x_n, B^y_n)`: the distance of the two fast
/// approximants at `depth`, widened by both tail bounds (`2^-depth` each).
pub fn dist_completion(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Enclosure> {
    x.config().check_same(y.config())?;
    let (fx, fy) = (extract_fast(x), extract_fast(y));
    let n = depth as usize;
    let center = fx.approximant(n).distance(&fy.approximant(n))?;
    Ok(Enclosure::around(center, fx.tail_bound(n) + fy.tail_bound(n)))
}

/// Enclosure of `μ̄(x) = d̄(x, E_∅) = lim μ(B_n)`.
pub fn measure_completion(x: &CauchyPoint, depth: u32) -> Enclosure {
    let fx = extract_fast(x);
    let n = depth as usize;
    Enclosure::around(fx.approximant(n).measure(), fx.tail_bound(n))
}

/// Enclosure of `lim d(B^x_n, B^y_n)`. Equivalence `x ∼ y` is only
/// semi-decidable; callers compare the enclosure against a tolerance.
pub fn equivalent_within(x: &CauchyPoint, y: &CauchyPoint, depth: u32) -> Result<Enclosure> {
    dist_completion(x, y, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> Element {
        Element::from_raw_intervals(&[(q(lo), q(hi))]).unwrap()
    }

    #[test]
    fn constant_points() {
        let a = constant_point(iv("0", "1/2"));
        for n in [0, 1, 7, 100] {
            assert_eq!(a.approximant(n), iv("0", "1/2"));
        }
        assert_eq!(a.modulus(9), 0);
        let u = constant_point(Element::universe(&AlgebraConfig::IntervalUnit));
        for depth in [1, 5, 20] {
            assert_eq!(measure_completion(&u, depth), Enclosure::exact(q("1")));
        }
    }

    #[test]
    fn zero_points() {
        let z = zero_point(&AlgebraConfig::IntervalUnit);
        assert!(z.approximant(3).is_empty());
        let cfg = AlgebraConfig::finite_weighted(vec![q("1"), q("1"), q("1")]).unwrap();
        let z3 = zero_point(&cfg);
        assert_eq!(z3.approximant(0).as_atoms().unwrap().mask(), 0);
        for depth in [1, 8, 30] {
            assert_eq!(measure_completion(&z3, depth), Enclosure::exact(q("0")));
        }
    }

    #[test]
    fn fast_index_formula() {
        let c = extract_fast(&constant_point(iv("0", "1")));
        assert_eq!((0..5).map(|n| c.index(n)).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);

        let doubled = CauchyPoint::new(
            AlgebraConfig::IntervalUnit,
            "doubled",
            |_| Element::empty(&AlgebraConfig::IntervalUnit),
            |k| 2 * k as usize,
        );
        let f = extract_fast(&doubled);
        assert_eq!((0..5).map(|n| f.index(n)).collect::<Vec<_>>(), vec![0, 2, 4, 6, 8]);

        // A flat modulus is pushed to strict increase.
        let flat = CauchyPoint::new(
            AlgebraConfig::IntervalUnit,
            "flat",
            |_| Element::empty(&AlgebraConfig::IntervalUnit),
            |k| if k < 3 { 5 } else { 6 },
        );
        let f = extract_fast(&flat);
        assert_eq!((0..5).map(|n| f.index(n)).collect::<Vec<_>>(), vec![5, 6, 7, 8, 9]);
    }

    #[test]
    fn fat_cantor_fast_tail() {
        let fc = families::fat_cantor();
        let f = extract_fast(&fc);
        for n in 0..8 {
            assert_eq!(f.index(n), n);
        }
        // d(stage n, stage m) = 2^(-n-1) - 2^(-m-1) ≤ 2^-n
        for n in 0..8usize {
            for m in n..10 {
                let d = f.approximant(n).distance(&f.approximant(m)).unwrap();
                let expected = Rational::pow2(-(n as i64) - 1) - Rational::pow2(-(m as i64) - 1);
                assert_eq!(d, expected);
                assert!(d <= Rational::pow2(-(n as i64)));
            }
        }
    }

    #[test]
    fn modulus_checks() {
        assert!(check_modulus(&constant_point(iv("1/4", "1/2")), 6));
        assert!(check_modulus(&families::fat_cantor(), 12));
    }

    #[test]
    fn corrupted_modulus_is_caught() {
        // Same sequence, modulus claiming 4× tighter tails than it has.
        let fc = families::fat_cantor();
        let bad = CauchyPoint::new(
            AlgebraConfig::IntervalUnit,
            "fatcantor/corrupt",
            move |i| fc.approximant(i),
            |k| (k as usize).saturating_sub(2),
        );
        let first_failure = (1..=4).find(|&d| !check_modulus(&bad, d));
        assert!(first_failure.is_some());
    }

    #[test]
    fn dist_completion_examples() {
        let a = constant_point(iv("0", "1/2"));
        let b = constant_point(iv("1/4", "3/4"));
        assert_eq!(dist_completion(&a, &a, 5).unwrap(), Enclosure::exact(q("0")));
        assert_eq!(dist_completion(&a, &b, 5).unwrap(), Enclosure::exact(q("1/2")));

        let fc = families::fat_cantor();
        let z = zero_point(&AlgebraConfig::IntervalUnit);
        let e = dist_completion(&fc, &z, 20).unwrap();
        assert!(e.contains(&q("1/2")));
        assert!(e.width() <= Rational::pow2(-18));
    }

    #[test]
    fn dist_of_non_settled_point_with_itself() {
        let fc = families::fat_cantor();
        let e = dist_completion(&fc, &fc, 6).unwrap();
        assert_eq!(e, Enclosure::new(q("0"), Rational::pow2(-5)));
    }

    #[test]
    fn measure_of_increasing_family() {
        let inc = families::increasing();
        let e = measure_completion(&inc, 12);
        assert!(e.contains(&q("1")));
    }

    #[test]
    fn equivalence_examples() {
        let fc = families::fat_cantor();
        let shifted = fc.shift(1);
        let reindexed = fc.reindex("fc∘(i+i%2)", |i| i + i % 2);
        let mut last = None;
        for depth in [4u32, 8, 12] {
            let e = equivalent_within(&shifted, &reindexed, depth).unwrap();
            assert!(e.contains_zero());
            if let Some(prev) = last.replace(e.hi().clone()) {
                assert!(*e.hi() < prev);
            }
        }

        let a = constant_point(iv("0", "1/2"));
        let b = constant_point(iv("1/2", "1"));
        for depth in 3..8 {
            assert!(equivalent_within(&a, &b, depth).unwrap().lo().is_positive());
        }
    }

    #[test]
    fn mixed_configs_rejected() {
        let cfg = AlgebraConfig::finite_weighted(vec![q("1")]).unwrap();
        let a = zero_point(&cfg);
        let b = zero_point(&AlgebraConfig::IntervalUnit);
        assert!(dist_completion(&a, &b, 3).is_err());
    }
}
