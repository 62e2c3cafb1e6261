//! Points of the completion: sequences with a modulus, their fast
//! subsequences, and distances between limits.

use caratheodory::completion::{constant_point, dist_completion, equivalent_within, extract_fast, zero_point};
use caratheodory::error::Result;
use caratheodory::families::{fat_cantor, increasing, perturb};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::{AlgebraConfig, Element};

pub fn run_example() -> Result<()> {
    let inc = increasing();
    let fast = extract_fast(&inc);
    for n in 0..4 {
        println!("fast index f({n}) = {}, tail bound {}", fast.index(n), fast.tail_bound(n));
    }

    // Constant points are exact; limits come with a width of about 2^-depth.
    let half = constant_point(Element::from_raw_intervals(&[(Rational::zero(), Rational::new(1, 2))])?);
    let zero = zero_point(&AlgebraConfig::IntervalUnit);
    println!("d̄(half, ∅) = {:?}", dist_completion(&half, &zero, 8)?);
    println!("d̄(fatcantor, ∅) ∈ {:?}", dist_completion(&fat_cantor(), &zero, 12)?);
    println!("d̄(perturb(3), perturb(4)) ∈ {:?}", dist_completion(&perturb(3), &perturb(4), 12)?);

    // A tail of a sequence is the same point.
    let fc = fat_cantor();
    for depth in [4, 8, 12] {
        let e = equivalent_within(&fc, &fc.shift(2), depth)?;
        println!("depth {depth:>2}: d̄(fc, shift(fc, 2)) ∈ {e:?}");
        assert!(e.contains_zero());
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
