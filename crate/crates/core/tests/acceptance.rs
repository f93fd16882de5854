//! The acceptance criteria, one line each. Runs without the test harness so
//! the lines are always printed.

use std::process::ExitCode;

use sdkit::suite::{criteria, Config};

fn main() -> ExitCode {
    let cfg = Config::default();
    let mut failed = Vec::new();
    for check in criteria() {
        let o = check.run(&cfg);
        println!(
            "criterion {:>2}: {} | {} | {} cases",
            o.id,
            if o.passed { "PASS" } else { "FAIL" },
            o.title,
            o.cases
        );
        for f in &o.failures {
            println!("    {f}");
        }
        if !o.passed {
            failed.push(o.id);
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
