//! Canonical interval sets, the measure μ and the pseudometric d(A, B) = μ(A △ B).

use caratheodory::error::Result;
use caratheodory::rational::Rational;
use caratheodory::set_algebra::{AlgebraConfig, Element};

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

pub fn run_example() -> Result<()> {
    // Overlapping and touching parts merge into one canonical part.
    let a = Element::from_raw_intervals(&[(q("0"), q("1/4")), (q("1/4"), q("1/2")), (q("1/8"), q("3/8"))])?;
    let b = Element::from_raw_intervals(&[(q("1/4"), q("3/4"))])?;
    println!("A = {}", serde_json::to_string(&a).unwrap());
    println!("A ∪ B = {}", serde_json::to_string(&a.union(&b)?).unwrap());
    println!("A \\ B = {}", serde_json::to_string(&a.difference(&b)?).unwrap());
    println!("μ(A △ B) = {}", a.distance(&b)?);
    assert_eq!(a.distance(&b)?, q("1/2"));

    // The same operations on a weighted powerset.
    let cfg = AlgebraConfig::finite_weighted(vec![q("1/2"), q("1/4"), q("1/4")])?;
    let s = Element::from_atoms(&cfg, &[0, 2])?;
    println!("μ({{a0,a2}}) = {}, complement = {}", s.measure(), serde_json::to_string(&s.complement()).unwrap());

    // Mixing the two algebras is rejected.
    assert!(a.union(&s).is_err());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
