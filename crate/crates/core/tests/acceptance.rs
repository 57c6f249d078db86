use std::process::ExitCode;

use momentkit::acceptance::{run, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let r = run(id, DEFAULT_SEED);
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
