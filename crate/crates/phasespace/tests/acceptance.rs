use std::process::ExitCode;

use phasespace::validate::{run_criterion, Suite};

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=10 {
        let r = run_criterion(id, Suite::Full, 0);
        println!("{}", r.summary());
        if !r.passed() {
            failed += 1;
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
