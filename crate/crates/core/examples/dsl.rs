//! The expression language: parse, print, evaluate.

use caratheodory::completion::measure_completion;
use caratheodory::dsl::{eval_element, eval_point, parse};
use caratheodory::error::{Error, Result};
use caratheodory::set_algebra::AlgebraConfig;

pub fn run_example() -> Result<()> {
    let unit = AlgebraConfig::IntervalUnit;
    for text in ["[0,1/2) | [1/4,3/4)", "!([0,1/3) & [1/4,1))", "[0,1/3) \\ [1/4,1)"] {
        let e = parse(text)?;
        println!("{text:<24} parses as {e:<28} = {}", serde_json::to_string(&eval_element(&e, &unit)?).unwrap());
    }

    for text in ["fatcantor | [0,1/2)", "cup(prefix(i), increasing)", "cup(dyadicblocks(i+1), summable:2^(-N-1))"] {
        let p = eval_point(&parse(text)?, &unit)?;
        println!("μ̄({text}) ∈ {:?}", measure_completion(&p, 12));
    }

    match parse("[0, 1/2) |") {
        Err(Error::Parse { line, column, message }) => println!("{line}:{column}: {message}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
