//! Running the verification suites from code, at reduced scale.

use caratheodory::error::Result;
use caratheodory::suites::{run, RunConfig, Suite};

pub fn run_example() -> Result<()> {
    let cfg = RunConfig { depth: 10, trials: Some(10), covers: 10, atoms: 4, seed: 42, ..RunConfig::default() };
    for suite in Suite::ALL {
        let report = run(suite, &cfg)?;
        println!("{:<16} {:<7} {:>6} checks", report.suite, report.verdict.to_string(), report.checks);
        assert!(report.passed());
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
