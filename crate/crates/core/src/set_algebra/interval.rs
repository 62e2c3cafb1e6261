//! Finite unions of half-open subintervals of `[0, 1)` in canonical form.

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A non-empty half-open interval `[lo, hi)` with `0 ≤ lo < hi ≤ 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        check_endpoint(&lo)?;
        check_endpoint(&hi)?;
        if lo >= hi {
            return Err(Error::Domain(format!("empty or reversed interval [{lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub(crate) fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q < self.hi
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

fn check_endpoint(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::Domain(format!("endpoint {x} outside [0, 1]")));
    }
    Ok(())
}

/// Sorted, pairwise disjoint, non-adjacent intervals. Two sets are equal as
/// point sets iff their part sequences are identical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Arc<[Interval]>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn universe() -> Self {
        IntervalSet {
            parts: Arc::from(vec![Interval::new_unchecked(Rational::zero(), Rational::one())]),
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn measure(&self) -> Rational {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let idx = self.parts.partition_point(|p| p.hi <= *q);
        self.parts.get(idx).is_some_and(|p| p.contains(q))
    }

    pub fn union(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a && !b)
    }

    pub fn symm_diff(&self, other: &Self) -> Self {
        combine(self, other, |a, b| a != b)
    }

    pub fn complement(&self) -> Self {
        combine(&IntervalSet::universe(), self, |u, a| u && !a)
    }

    /// `measure(symm_diff(self, other))` without materializing the difference.
    pub fn distance(&self, other: &Self) -> Rational {
        let mut total = Rational::zero();
        sweep(&self.parts, &other.parts, |a, b| a != b, |lo, hi| {
            total = &total + &(hi - lo);
        });
        total
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        let mut nonempty = false;
        sweep(&self.parts, &other.parts, |a, b| a && !b, |_, _| nonempty = true);
        !nonempty
    }

    /// Union of many sets in one sort-and-merge pass.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> Self {
        let mut raw: Vec<Interval> = sets.into_iter().flat_map(|s| s.parts.iter().cloned()).collect();
        raw.sort_by(|a, b| a.lo.cmp(&b.lo));
        IntervalSet { parts: merge_sorted(raw).into() }
    }

    pub(crate) fn from_canonical(parts: Vec<Interval>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalSet { parts: parts.into() }
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.parts.iter()).finish()
    }
}

/// Canonical form of an arbitrary finite list of `(lo, hi)` pairs.
/// Degenerate pairs (`lo == hi`) are dropped; `lo > hi` and endpoints outside
/// `[0, 1]` are domain errors.
pub fn canonicalize(raw: &[(Rational, Rational)]) -> Result<IntervalSet> {
    let mut parts = Vec::with_capacity(raw.len());
    for (lo, hi) in raw {
        check_endpoint(lo)?;
        check_endpoint(hi)?;
        match lo.cmp(hi) {
            std::cmp::Ordering::Less => parts.push(Interval::new_unchecked(lo.clone(), hi.clone())),
            std::cmp::Ordering::Equal => {}
            std::cmp::Ordering::Greater => {
                return Err(Error::Domain(format!("reversed interval [{lo}, {hi})")))
            }
        }
    }
    parts.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(IntervalSet { parts: merge_sorted(parts).into() })
}

fn merge_sorted(sorted: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

fn combine(a: &IntervalSet, b: &IntervalSet, keep: impl Fn(bool, bool) -> bool) -> IntervalSet {
    let mut parts = Vec::new();
    sweep(&a.parts, &b.parts, keep, |lo, hi| {
        parts.push(Interval::new_unchecked(lo.clone(), hi.clone()))
    });
    IntervalSet::from_canonical(parts)
}

// k-th boundary of a canonical part list: lo0, hi0, lo1, hi1, ...
fn boundary(parts: &[Interval], k: usize) -> Option<&Rational> {
    parts.get(k / 2).map(|p| if k.is_multiple_of(2) { &p.lo } else { &p.hi })
}

/// Merged walk over the boundaries of two canonical part lists. `emit` is
/// called once per maximal run on which `keep(in_a, in_b)` holds, in order.
/// `keep(false, false)` must be false.
fn sweep<'a>(
    a: &'a [Interval],
    b: &'a [Interval],
    keep: impl Fn(bool, bool) -> bool,
    mut emit: impl FnMut(&'a Rational, &'a Rational),
) {
    debug_assert!(!keep(false, false));
    let (mut i, mut j) = (0, 0);
    let mut open: Option<&'a Rational> = None;
    loop {
        let xa = boundary(a, i);
        let xb = boundary(b, j);
        let x = match (xa, xb) {
            (None, None) => break,
            (Some(p), None) => p,
            (None, Some(q)) => q,
            (Some(p), Some(q)) => p.min(q),
        };
        if xa == Some(x) {
            i += 1;
        }
        if xb == Some(x) {
            j += 1;
        }
        // An odd cursor means we are inside a part.
        let now = keep(i % 2 == 1, j % 2 == 1);
        match (open, now) {
            (None, true) => open = Some(x),
            (Some(start), false) => {
                emit(start, x);
                open = None;
            }
            _ => {}
        }
    }
    debug_assert!(open.is_none());
}

/// Serialized as `[["lo", "hi"], ...]`.
impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.parts.iter().map(|p| (&p.lo, &p.hi)))
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(Rational, Rational)> = Vec::deserialize(deserializer)?;
        canonicalize(&raw).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        let raw: Vec<_> = pairs.iter().map(|(a, b)| (q(a), q(b))).collect();
        canonicalize(&raw).unwrap()
    }

    #[test]
    fn canonicalize_merges_adjacent() {
        assert_eq!(set(&[("0", "1/2"), ("1/2", "3/4")]), set(&[("0", "3/4")]));
        assert_eq!(set(&[("0", "1/2"), ("1/2", "3/4")]).len(), 1);
    }

    #[test]
    fn canonicalize_drops_degenerate() {
        assert!(set(&[("1/4", "1/4")]).is_empty());
    }

    #[test]
    fn canonicalize_sorts() {
        let s = set(&[("1/2", "3/4"), ("0", "1/3")]);
        assert_eq!(s.parts()[0], Interval::new(q("0"), q("1/3")).unwrap());
        assert_eq!(s.parts()[1], Interval::new(q("1/2"), q("3/4")).unwrap());
    }

    #[test]
    fn canonicalize_rejects_out_of_range() {
        assert!(matches!(canonicalize(&[(q("0"), q("3/2"))]), Err(Error::Domain(_))));
        assert!(matches!(canonicalize(&[(q("-1/2"), q("1/2"))]), Err(Error::Domain(_))));
        assert!(matches!(canonicalize(&[(q("1/2"), q("1/4"))]), Err(Error::Domain(_))));
    }

    #[test]
    fn overlapping_and_nested_inputs() {
        let s = set(&[("0", "1/2"), ("1/4", "1/3"), ("1/3", "3/5"), ("7/8", "1")]);
        assert_eq!(s, set(&[("0", "3/5"), ("7/8", "1")]));
    }

    #[test]
    fn complement_in_unit_interval() {
        let a = set(&[("0", "1/3"), ("1/2", "1")]);
        assert_eq!(a.complement(), set(&[("1/3", "1/2")]));
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::universe());
        assert!(IntervalSet::universe().complement().is_empty());
    }

    #[test]
    fn shared_boundaries_in_sweep() {
        let a = set(&[("0", "1/2")]);
        let b = set(&[("1/2", "1")]);
        assert_eq!(a.union(&b), IntervalSet::universe());
        assert!(a.intersect(&b).is_empty());
        assert_eq!(a.symm_diff(&b), IntervalSet::universe());
        assert_eq!(a.distance(&b), q("1"));
    }

    #[test]
    fn membership() {
        let a = set(&[("0", "1/3"), ("1/2", "1")]);
        assert!(a.contains(&q("0")));
        assert!(!a.contains(&q("1/3")));
        assert!(a.contains(&q("1/2")));
        assert!(!a.contains(&q("2/5")));
    }

    #[test]
    fn serde_shape() {
        let a = set(&[("0", "1/2"), ("3/4", "1")]);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"[["0/1","1/2"],["3/4","1/1"]]"#);
        let back: IntervalSet = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }
}
