//! Unions, complements, disjointness and additivity on the completion.

use caratheodory::completion::{constant_point, measure_completion};
use caratheodory::error::Result;
use caratheodory::families::fat_cantor;
use caratheodory::rational::Rational;
use caratheodory::set_algebra::Element;
use caratheodory::sigma_ops::{additivity_defect, complement_pt, disjoint_within, intersect_pt, union_pt};

fn half(lo: i64, hi: i64) -> Result<Element> {
    Element::from_raw_intervals(&[(Rational::new(lo, 2), Rational::new(hi, 2))])
}

pub fn run_example() -> Result<()> {
    let fc = fat_cantor();
    let left = constant_point(half(0, 1)?);
    let right = constant_point(half(1, 2)?);

    let u = union_pt(&fc, &left)?;
    println!("μ̄(fatcantor ∪ [0,1/2)) ∈ {:?}", measure_completion(&u, 16));
    println!("μ̄(fatcantorᶜ) ∈ {:?}", measure_completion(&complement_pt(&fc), 16));

    let l = intersect_pt(&fc, &left)?;
    let r = intersect_pt(&fc, &right)?;
    println!("μ̄(left ∩ right) ∈ {:?}", disjoint_within(&l, &r, 14)?);
    let defect = additivity_defect(&l, &r, 14)?;
    println!("|μ̄(l ∪ r) − μ̄(l) − μ̄(r)| ∈ {defect:?}");
    assert!(defect.contains_zero());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
