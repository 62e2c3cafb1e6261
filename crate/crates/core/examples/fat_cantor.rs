//! The fat Cantor set as a Cauchy sequence: its measure 1/2 is only reached
//! in the limit, and comes back as a certified enclosure.

use caratheodory::completion::{check_modulus, measure_completion};
use caratheodory::error::Result;
use caratheodory::families::{fat_cantor, fat_cantor_stage};
use caratheodory::rational::Rational;

pub fn run_example() -> Result<()> {
    for n in [1, 2, 5, 10] {
        let stage = fat_cantor_stage(n);
        println!("stage {n:>2}: {:>4} parts, measure {}", stage.len(), stage.measure());
    }
    let fc = fat_cantor();
    assert!(check_modulus(&fc, 10));
    let e = measure_completion(&fc, 20);
    println!("μ̄(fatcantor) ∈ [{}, {}]", e.lo(), e.hi());
    assert!(e.contains(&Rational::new(1, 2)));
    assert!(e.width() <= Rational::pow2(-18));
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
