//! Acceptance report: one PASS/FAIL line per criterion, then a check that an
//! injected branch-cut fault is caught. Runs without the libtest harness so
//! the lines show up in plain `cargo test` output.

use std::process::ExitCode;

use evanescent::verify::{self, Fault, Options};

fn main() -> ExitCode {
    let outcomes = verify::run_all(&Options::default());
    for o in &outcomes {
        println!("{o}");
    }
    let faulty = verify::tir_unitarity(&Options {
        fault: Some(Fault::BranchCut),
    });
    let fault_caught = !faulty.passed;
    println!(
        "{} fault injection (branch cut) detected by criterion 3: {}",
        if fault_caught { "PASS" } else { "FAIL" },
        faulty.detail
    );
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() && fault_caught {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
