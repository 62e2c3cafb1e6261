//! Finite covers and the outer measure restricted to the algebra.

use caratheodory::error::Result;
use caratheodory::families::fat_cantor_stage;
use caratheodory::outer_measure::{cover_cost, is_cover, outer_measure_element, Cover};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::Element;

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

pub fn run_example() -> Result<()> {
    let e = Element::from_intervals(fat_cantor_stage(2));
    println!("stage 2 of the fat Cantor set has measure {}", e.measure());

    // Overlapping pieces are paid for twice, so a cover never costs less than μ.
    let cover = Cover::new(vec![
        Element::from_raw_intervals(&[(q("0"), q("1/2"))])?,
        Element::from_raw_intervals(&[(q("3/8"), q("1"))])?,
    ])?;
    assert!(is_cover(&e, &cover)?);
    println!("two-piece cover costs {}", cover_cost(&cover));
    assert!(cover_cost(&cover) >= e.measure());

    let tight = Cover::singleton(e.clone());
    println!("singleton cover costs {}", cover_cost(&tight));
    assert_eq!(cover_cost(&tight), outer_measure_element(&e));
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
