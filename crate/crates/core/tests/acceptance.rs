//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use dessin_core::report::Status;
use dessin_core::suites::{run_suite, suite_passed, RunOptions, Suite};

fn main() -> ExitCode {
    let opts = RunOptions::default();
    let mut failed = 0;
    for suite in Suite::ALL {
        let start = Instant::now();
        let reports = run_suite(suite, &opts);
        let ok = suite_passed(&reports) && reports.iter().all(|r| r.status == Status::Pass);
        let checked: u64 = reports.iter().map(|r| r.checked_count).sum();
        println!(
            "criterion {:>2} {:<20} {} checked={} {:.2?}",
            suite.criterion(),
            suite.name(),
            if ok { "PASS" } else { "FAIL" },
            checked,
            start.elapsed()
        );
        if !ok {
            failed += 1;
            for r in reports.iter().filter(|r| r.status != Status::Pass) {
                println!("    {}", r.summary_line());
            }
        }
    }
    println!("acceptance: {} passed, {} failed", Suite::ALL.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
