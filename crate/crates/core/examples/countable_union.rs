//! Countable unions with explicit tail certificates.

use caratheodory::completion::{measure_completion, Certification};
use caratheodory::error::Result;
use caratheodory::families::{dyadic_block_element, prefix_element};
use caratheodory::rational::Rational;
use caratheodory::set_algebra::AlgebraConfig;
use caratheodory::sigma_ops::{countable_union, Family, TailCertificate};

pub fn run_example() -> Result<()> {
    let unit = AlgebraConfig::IntervalUnit;

    // [0, 1 − 1/(i+2)) is nested increasing, with union [0, 1).
    let prefixes = Family::constants(unit.clone(), "prefix", |i| prefix_element(i as u64));
    let e = countable_union(&prefixes, TailCertificate::Increasing)?;
    for stage in [1, 4, 16, 64] {
        let plan = e.stage(stage).expect("increasing families always certify");
        let r = e.remainder(stage, 12)?;
        println!("stage {stage:>2}: {} members, remainder ≤ {}", plan.members, r.hi());
    }
    println!("μ̄ ∈ {:?}", measure_completion(e.point(), 12));

    // Disjoint blocks of mass 2^-(i+2), with a summable tail bound.
    let blocks = Family::constants(unit, "dyadicblocks", |i| dyadic_block_element(i as u64 + 1));
    let tail = TailCertificate::summable(|n| Rational::pow2(-(n as i64) - 1));
    let b = countable_union(&blocks, tail)?;
    println!("μ̄(∪ blocks) ∈ {:?}", measure_completion(b.point(), 12));

    // A capped search says how far it got instead of failing silently.
    let capped = countable_union(&prefixes, TailCertificate::SearchCap(20))?;
    match capped.certify(8) {
        Certification::Partial { stage, precision } => {
            println!("capped search certified stage {stage}, precision {precision}")
        }
        Certification::Full => println!("capped search certified everything"),
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
