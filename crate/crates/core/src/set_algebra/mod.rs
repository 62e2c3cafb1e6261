//! The base algebra Ω, its finite measure μ and the pseudometric
//! `d(A, B) = μ(A △ B)`.
//!
//! Two algebras ship: finite unions of half-open subintervals of `[0, 1)`
//! with Lebesgue length, and the powerset of `n` weighted atoms. Every
//! [`Element`] carries its [`AlgebraConfig`]; combining elements of different
//! configurations is a usage error.

mod finite;
mod interval;

use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub use finite::{FiniteSubset, MAX_ATOMS};
pub use interval::{canonicalize, Interval, IntervalSet};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum AlgebraConfig {
    /// Interval sets on `[0, 1)` with μ = length.
    IntervalUnit,
    /// Powerset of `weights.len()` atoms; μ(S) sums the weights in S.
    FiniteWeighted(Arc<[Rational]>),
}

impl AlgebraConfig {
    pub fn interval_unit() -> Self {
        AlgebraConfig::IntervalUnit
    }

    /// Weights must be strictly positive so that `d` is a metric on masks.
    pub fn finite_weighted(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() || weights.len() > MAX_ATOMS as usize {
            return Err(Error::Usage(format!(
                "finite algebra needs 1..={MAX_ATOMS} atoms, got {}",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::Usage(format!("atom weight {w} is not positive")));
        }
        Ok(AlgebraConfig::FiniteWeighted(weights.into()))
    }

    /// μ(X).
    pub fn total_mass(&self) -> Rational {
        match self {
            AlgebraConfig::IntervalUnit => Rational::one(),
            AlgebraConfig::FiniteWeighted(w) => w.iter().sum(),
        }
    }

    pub fn atom_count(&self) -> Option<u32> {
        match self {
            AlgebraConfig::IntervalUnit => None,
            AlgebraConfig::FiniteWeighted(w) => Some(w.len() as u32),
        }
    }

    fn same(&self, other: &Self) -> bool {
        match (self, other) {
            (AlgebraConfig::IntervalUnit, AlgebraConfig::IntervalUnit) => true,
            (AlgebraConfig::FiniteWeighted(a), AlgebraConfig::FiniteWeighted(b)) => {
                Arc::ptr_eq(a, b) || a == b
            }
            _ => false,
        }
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::mixed_configs())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Body {
    Intervals(IntervalSet),
    Atoms(FiniteSubset),
}

/// A member of Ω, always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Element {
    config: AlgebraConfig,
    body: Body,
}

impl Element {
    pub fn empty(config: &AlgebraConfig) -> Self {
        let body = match config {
            AlgebraConfig::IntervalUnit => Body::Intervals(IntervalSet::empty()),
            AlgebraConfig::FiniteWeighted(w) => Body::Atoms(FiniteSubset::new(0, w.len() as u32)),
        };
        Element { config: config.clone(), body }
    }

    pub fn universe(config: &AlgebraConfig) -> Self {
        Element::empty(config).complement()
    }

    pub fn from_intervals(set: IntervalSet) -> Self {
        Element { config: AlgebraConfig::IntervalUnit, body: Body::Intervals(set) }
    }

    /// Canonicalizes raw `(lo, hi)` pairs into an interval-algebra element.
    pub fn from_raw_intervals(raw: &[(Rational, Rational)]) -> Result<Self> {
        canonicalize(raw).map(Element::from_intervals)
    }

    pub fn from_mask(config: &AlgebraConfig, mask: u64) -> Result<Self> {
        let AlgebraConfig::FiniteWeighted(w) = config else {
            return Err(Error::Usage("atom sets need a finite algebra".into()));
        };
        let n = w.len() as u32;
        if mask & !finite::full_mask(n) != 0 {
            return Err(Error::Usage(format!("mask {mask:#x} names atoms beyond a{}", n - 1)));
        }
        Ok(Element { config: config.clone(), body: Body::Atoms(FiniteSubset::new(mask, n)) })
    }

    pub fn from_atoms(config: &AlgebraConfig, atoms: &[u32]) -> Result<Self> {
        let n = config.atom_count().unwrap_or(0);
        let mut mask = 0u64;
        for &a in atoms {
            if a >= n {
                return Err(Error::Usage(format!("atom a{a} out of range for {n} atoms")));
            }
            mask |= 1 << a;
        }
        Element::from_mask(config, mask)
    }

    pub fn config(&self) -> &AlgebraConfig {
        &self.config
    }

    pub fn as_intervals(&self) -> Option<&IntervalSet> {
        match &self.body {
            Body::Intervals(s) => Some(s),
            Body::Atoms(_) => None,
        }
    }

    pub fn as_atoms(&self) -> Option<FiniteSubset> {
        match &self.body {
            Body::Atoms(s) => Some(*s),
            Body::Intervals(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.body {
            Body::Intervals(s) => s.is_empty(),
            Body::Atoms(s) => s.mask() == 0,
        }
    }

    /// μ(self), exact.
    pub fn measure(&self) -> Rational {
        match (&self.body, &self.config) {
            (Body::Intervals(s), _) => s.measure(),
            (Body::Atoms(s), AlgebraConfig::FiniteWeighted(w)) => {
                s.members().map(|a| &w[a as usize]).sum()
            }
            (Body::Atoms(_), AlgebraConfig::IntervalUnit) => unreachable!("atoms without weights"),
        }
    }

    pub fn complement(&self) -> Element {
        let body = match &self.body {
            Body::Intervals(s) => Body::Intervals(s.complement()),
            Body::Atoms(s) => Body::Atoms(s.complement()),
        };
        Element { config: self.config.clone(), body }
    }

    fn binary(
        &self,
        other: &Element,
        on_sets: impl Fn(&IntervalSet, &IntervalSet) -> IntervalSet,
        on_masks: impl Fn(u64, u64) -> u64,
    ) -> Result<Element> {
        self.config.check_same(&other.config)?;
        let body = match (&self.body, &other.body) {
            (Body::Intervals(a), Body::Intervals(b)) => Body::Intervals(on_sets(a, b)),
            (Body::Atoms(a), Body::Atoms(b)) => {
                Body::Atoms(FiniteSubset::new(on_masks(a.mask(), b.mask()), a.atom_count()))
            }
            _ => return Err(Error::mixed_configs()),
        };
        Ok(Element { config: self.config.clone(), body })
    }

    pub fn union(&self, other: &Element) -> Result<Element> {
        self.binary(other, IntervalSet::union, |a, b| a | b)
    }

    pub fn intersect(&self, other: &Element) -> Result<Element> {
        self.binary(other, IntervalSet::intersect, |a, b| a & b)
    }

    pub fn difference(&self, other: &Element) -> Result<Element> {
        self.binary(other, IntervalSet::difference, |a, b| a & !b)
    }

    pub fn symm_diff(&self, other: &Element) -> Result<Element> {
        self.binary(other, IntervalSet::symm_diff, |a, b| a ^ b)
    }

    /// `d(self, other) = μ(self △ other)`, exact.
    pub fn distance(&self, other: &Element) -> Result<Rational> {
        self.config.check_same(&other.config)?;
        match (&self.body, &other.body) {
            (Body::Intervals(a), Body::Intervals(b)) => Ok(a.distance(b)),
            _ => Ok(self.symm_diff(other)?.measure()),
        }
    }

    pub fn is_subset(&self, other: &Element) -> Result<bool> {
        self.config.check_same(&other.config)?;
        Ok(match (&self.body, &other.body) {
            (Body::Intervals(a), Body::Intervals(b)) => a.is_subset(b),
            (Body::Atoms(a), Body::Atoms(b)) => a.mask() & !b.mask() == 0,
            _ => return Err(Error::mixed_configs()),
        })
    }

    /// Union of any number of elements of `config`.
    pub fn union_all<'a>(
        config: &AlgebraConfig,
        elements: impl IntoIterator<Item = &'a Element>,
    ) -> Result<Element> {
        let elements: Vec<&Element> = elements.into_iter().collect();
        for e in &elements {
            config.check_same(&e.config)?;
        }
        match config {
            AlgebraConfig::IntervalUnit => Ok(Element::from_intervals(IntervalSet::union_all(
                elements.iter().filter_map(|e| e.as_intervals()),
            ))),
            AlgebraConfig::FiniteWeighted(_) => {
                let mask = elements.iter().filter_map(|e| e.as_atoms()).fold(0, |m, s| m | s.mask());
                Element::from_mask(config, mask)
            }
        }
    }
}

/// Interval elements serialize as `[["lo", "hi"], ...]`, atom sets as
/// `{"atoms": [i, ...]}`.
impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.body {
            Body::Intervals(s) => s.serialize(serializer),
            Body::Atoms(s) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("atoms", &s.members().collect::<Vec<_>>())?;
                map.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(pairs: &[(&str, &str)]) -> Element {
        let raw: Vec<_> = pairs.iter().map(|(a, b)| (q(a), q(b))).collect();
        Element::from_raw_intervals(&raw).unwrap()
    }

    fn weighted(ws: &[&str]) -> AlgebraConfig {
        AlgebraConfig::finite_weighted(ws.iter().map(|w| q(w)).collect()).unwrap()
    }

    #[test]
    fn symm_diff_example() {
        let a = iv(&[("0", "1/2")]);
        let b = iv(&[("1/4", "3/4")]);
        assert_eq!(a.symm_diff(&b).unwrap(), iv(&[("0", "1/4"), ("1/2", "3/4")]));
        assert_eq!(a.distance(&b).unwrap(), q("1/2"));
        assert!(a.symm_diff(&a).unwrap().is_empty());
        assert_eq!(a.distance(&a).unwrap(), q("0"));
    }

    #[test]
    fn complement_and_distance_to_it() {
        let a = iv(&[("0", "1/3"), ("1/2", "1")]);
        assert_eq!(a.complement(), iv(&[("1/3", "1/2")]));
        assert_eq!(a.distance(&a.complement()).unwrap(), q("1"));
    }

    #[test]
    fn measures() {
        assert_eq!(iv(&[("0", "3/8"), ("5/8", "1")]).measure(), q("3/4"));
        assert_eq!(Element::empty(&AlgebraConfig::IntervalUnit).measure(), q("0"));
        assert_eq!(Element::universe(&AlgebraConfig::IntervalUnit).measure(), q("1"));
    }

    #[test]
    fn finite_weighted_measure_and_ops() {
        let cfg = weighted(&["1/2", "1/4", "1/4"]);
        let a = Element::from_atoms(&cfg, &[0]).unwrap();
        let b = Element::from_atoms(&cfg, &[0, 2]).unwrap();
        assert_eq!(a.measure(), q("1/2"));
        assert_eq!(b.measure(), q("3/4"));
        assert_eq!(a.distance(&b).unwrap(), q("1/4"));
        assert_eq!(b.complement(), Element::from_atoms(&cfg, &[1]).unwrap());
        assert_eq!(Element::universe(&cfg).measure(), q("1"));
        assert!(a.is_subset(&b).unwrap());
        assert!(!b.is_subset(&a).unwrap());
    }

    #[test]
    fn mixed_configs_are_usage_errors() {
        let cfg = weighted(&["1", "1"]);
        let other = weighted(&["1", "2"]);
        let a = Element::from_atoms(&cfg, &[0]).unwrap();
        let b = Element::from_atoms(&other, &[0]).unwrap();
        let c = iv(&[("0", "1/2")]);
        assert!(matches!(a.union(&b), Err(Error::Usage(_))));
        assert!(matches!(a.distance(&c), Err(Error::Usage(_))));
        assert!(matches!(c.intersect(&a), Err(Error::Usage(_))));
    }

    #[test]
    fn bad_finite_configs() {
        assert!(AlgebraConfig::finite_weighted(vec![]).is_err());
        assert!(AlgebraConfig::finite_weighted(vec![q("0")]).is_err());
        assert!(AlgebraConfig::finite_weighted(vec![q("-1")]).is_err());
        let cfg = weighted(&["1", "1"]);
        assert!(Element::from_atoms(&cfg, &[2]).is_err());
    }

    #[test]
    fn union_all_matches_pairwise() {
        let parts = [iv(&[("0", "1/4")]), iv(&[("1/8", "1/2")]), iv(&[("3/4", "1")])];
        let all = Element::union_all(&AlgebraConfig::IntervalUnit, &parts).unwrap();
        let pairwise = parts[0].union(&parts[1]).unwrap().union(&parts[2]).unwrap();
        assert_eq!(all, pairwise);
        let none = Element::union_all(&AlgebraConfig::IntervalUnit, []).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn serialization() {
        let cfg = weighted(&["1/2", "1/4", "1/4"]);
        let a = Element::from_atoms(&cfg, &[0, 2]).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"atoms":[0,2]}"#);
        let b = iv(&[("0", "1/2"), ("1/4", "3/4")]);
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"[["0/1","3/4"]]"#);
    }
}
