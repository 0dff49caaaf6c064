//! Criteria 1 to 9, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;

use zeckauto_cli::acceptance::{run_all, Context};
use zeckauto_cli::base_registry;

fn main() -> ExitCode {
    let base = match base_registry(None) {
        Ok(b) => b,
        Err(e) => {
            println!("base relations failed to certify: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut ctx = Context::new(base);
    let verdicts = run_all(&mut ctx, |v| println!("{v}"));
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
