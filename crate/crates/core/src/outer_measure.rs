//! Cover-based outer measure on algebra elements.
//!
//! μ* of a set is the infimum of `Σ μ(A_i)` over covers by algebra elements.
//! On Ω itself the infimum is attained by the one-piece cover, so
//! [`outer_measure_element`] returns μ; the lower-bound property
//! `cover_cost(c) ≥ μ(e)` for every cover `c` of `e` is what the restriction
//! suite checks.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set_algebra::{AlgebraConfig, Element};

/// A non-empty finite sequence of same-config elements. Overlaps are allowed
/// and are counted with multiplicity in [`cover_cost`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pieces: Vec<Element>,
}

impl Cover {
    pub fn new(pieces: Vec<Element>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::Usage("a cover needs at least one piece".into()));
        };
        for p in &pieces[1..] {
            first.config().check_same(p.config())?;
        }
        Ok(Cover { pieces })
    }

    pub fn singleton(e: Element) -> Self {
        Cover { pieces: vec![e] }
    }

    pub fn pieces(&self) -> &[Element] {
        &self.pieces
    }

    pub fn config(&self) -> &AlgebraConfig {
        self.pieces[0].config()
    }
}

/// True iff `e ⊆ ∪ pieces`.
pub fn is_cover(e: &Element, c: &Cover) -> Result<bool> {
    e.config().check_same(c.config())?;
    let union = Element::union_all(c.config(), &c.pieces)?;
    e.is_subset(&union)
}

pub fn cover_cost(c: &Cover) -> Rational {
    c.pieces.iter().map(Element::measure).sum()
}

pub fn outer_measure_element(e: &Element) -> Rational {
    e.measure()
}

impl Serialize for Cover {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.pieces)
    }
}
