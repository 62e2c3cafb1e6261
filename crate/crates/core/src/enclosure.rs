use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// A closed rational interval `[lo, hi]` certified to contain some limit value.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure [{lo}, {hi}] is reversed");
        Enclosure { lo, hi }
    }

    pub fn exact(value: Rational) -> Self {
        Enclosure { lo: value.clone(), hi: value }
    }

    /// `[max(0, center − radius), center + radius]`, for non-negative quantities.
    pub fn around(center: Rational, radius: Rational) -> Self {
        let lo = &center - &radius;
        let lo = if lo.is_negative() { Rational::zero() } else { lo };
        Enclosure { lo, hi: center + radius }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn center(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Distance between the two intervals; zero when they intersect.
    pub fn gap(&self, other: &Enclosure) -> Rational {
        if other.lo > self.hi {
            &other.lo - &self.hi
        } else if self.lo > other.hi {
            &self.lo - &other.hi
        } else {
            Rational::zero()
        }
    }

    pub fn widen(&self, by: &Rational) -> Enclosure {
        Enclosure { lo: &self.lo - by, hi: &self.hi + by }
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Enclosure { lo: -&self.hi, hi: -&self.lo }
        } else {
            Enclosure { lo: Rational::zero(), hi: (-&self.lo).max(self.hi.clone()) }
        }
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
