//! The metric completion of a set algebra under `d(A, B) = μ*(A △ B)`, with
//! exact rational arithmetic.
//!
//! Two algebras are supported: finite unions of half-open intervals in
//! `[0, 1)` with Lebesgue measure, and the powerset of up to 64 weighted
//! atoms. Points of the completion are Cauchy sequences of elements carrying
//! an explicit modulus, and every limiting quantity comes back as an
//! [`enclosure::Enclosure`] with exact rational endpoints.
//!
//! ```
//! use caratheodory::completion::measure_completion;
//! use caratheodory::families::fat_cantor;
//! use caratheodory::rational::Rational;
//!
//! let m = measure_completion(&fat_cantor(), 12);
//! assert!(m.contains(&Rational::new(1, 2)));
//! ```
//!
//! [`limit_map::apply_F`] sends a point to a representative of its limit set
//! (the limsup of a fast subsequence), and the `verify_*` functions there
//! check that this map is an isometry and preserves unions, intersections,
//! complements and countable unions.

pub mod rational;
pub mod enclosure;
pub mod error;

pub mod set_algebra;
pub mod outer_measure;
pub mod completion;
pub mod families;
pub mod sigma_ops;
pub mod limit_map;

pub mod dsl;
pub mod generators;
pub mod suites;
