//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;

use fiberscope::selftest::{run_criterion, SelftestOptions, CRITERIA};

fn main() -> ExitCode {
    let options = SelftestOptions::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id, &options);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", CRITERIA.len(), CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
