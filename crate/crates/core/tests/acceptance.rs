//! One line per acceptance criterion, with its runtime budget. Criteria run one at a time
//! so the timings are not skewed by each other. Runs without the libtest harness so the
//! lines are always shown.

use std::process::ExitCode;

use circlerig::suite::{criteria, run_criterion, DEFAULT_SEED};

fn main() -> ExitCode {
    // `--list` is answered without running the battery
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut failed = Vec::new();
    for c in criteria() {
        let r = run_criterion(&c, DEFAULT_SEED);
        println!("{}", r.line());
        if !r.pass {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria().len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
