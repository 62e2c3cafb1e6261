//! On a finite weighted powerset the completion is the algebra itself, so
//! every check is exact. Handy as a brute-force oracle.

use caratheodory::completion::{constant_point, dist_completion};
use caratheodory::enclosure::Enclosure;
use caratheodory::error::Result;
use caratheodory::limit_map::{verify_intersect_hom, verify_union_hom};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::{AlgebraConfig, Element};

pub fn run_example() -> Result<()> {
    let cfg = AlgebraConfig::finite_weighted((1..=4).map(|k| Rational::new(k, 10)).collect())?;
    let points: Vec<_> = (0..16u64).map(|m| constant_point(Element::from_mask(&cfg, m).unwrap())).collect();
    let exact_zero = Enclosure::exact(Rational::zero());
    let mut checked = 0;
    for (a, x) in points.iter().enumerate() {
        for (b, y) in points.iter().enumerate() {
            let d = Element::from_mask(&cfg, a as u64)?.distance(&Element::from_mask(&cfg, b as u64)?)?;
            assert_eq!(dist_completion(x, y, 4)?, Enclosure::exact(d));
            assert_eq!(verify_union_hom(x, y, 4)?.enclosure("defect"), Some(&exact_zero));
            assert_eq!(verify_intersect_hom(x, y, 4)?.enclosure("defect"), Some(&exact_zero));
            checked += 1;
        }
    }
    println!("{checked} pairs on 4 atoms, all defects exactly zero");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
