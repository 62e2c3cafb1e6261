//! The map F to limsup representatives, checked as an isometry and a
//! σ-homomorphism.

use caratheodory::completion::zero_point;
use caratheodory::error::Result;
use caratheodory::families::{dyadic_block_element, fat_cantor, perturb};
use caratheodory::limit_map::{
    apply_F, handle_ae_equal, member_at_depth, verify_countable_union_hom, verify_de_morgan, verify_isometry,
    verify_union_hom, verify_well_defined,
};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::AlgebraConfig;
use caratheodory::sigma_ops::{Family, TailCertificate};

pub fn run_example() -> Result<()> {
    let fc = fat_cantor();
    let p = perturb(5);
    let h = apply_F(&fc);
    println!("F(fatcantor) approximant 3 has {:?} parts, bound {}", h.approximant(3).as_intervals().map(|s| s.len()), h.bound(3));

    let probe = member_at_depth(&h, &Rational::new(1, 2), 1..8)?;
    println!("is 1/2 in the limsup? {:?}", probe.answer);

    let zero = zero_point(&AlgebraConfig::IntervalUnit);
    for report in [
        verify_isometry(&fc, &zero, 14)?,
        verify_isometry(&fc, &p, 14)?,
        verify_well_defined(&fc.shift(1), &fc.shift(3), 14)?,
        verify_union_hom(&fc, &p, 14)?,
        verify_de_morgan(&fc, &p, 14)?,
    ] {
        println!("{}", serde_json::to_string(&report).unwrap());
        assert!(report.passed());
    }

    let blocks = Family::constants(AlgebraConfig::IntervalUnit, "dyadicblocks", |i| dyadic_block_element(i as u64 + 1));
    let cert = TailCertificate::summable(|n| Rational::pow2(-(n as i64) - 1));
    let r = verify_countable_union_hom(&blocks, cert, 12, 16)?;
    println!("{}", serde_json::to_string(&r).unwrap());

    let tol = Rational::pow2(-8);
    println!("F(fc) = F(shift(fc, 2)) a.e.? {:?}", handle_ae_equal(&h, &apply_F(&fc.shift(2)), &tol, 12)?);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
