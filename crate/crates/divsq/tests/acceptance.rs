//! Criteria 1 to 10, one line each. Runs without the libtest harness so the
//! lines are always printed.

use std::process::{Command, ExitCode};
use std::time::Instant;

use divsq::selftest::{run_criterion, SelftestConfig};

fn selftest_command() -> (bool, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_divsq"))
        .arg("selftest")
        .output()
        .expect("the divsq binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let passes = stdout.lines().filter(|l| l.contains(" PASS ")).count();
    let ok = out.status.code() == Some(0) && passes == 9;
    (
        ok,
        format!("exit {:?}, {passes}/9 PASS lines ({:.2?})", out.status.code(), start.elapsed()),
    )
}

fn main() -> ExitCode {
    let cfg = SelftestConfig::default();
    let mut failed = Vec::new();
    for id in 1..=9 {
        let r = run_criterion(id, &cfg);
        println!("{r}");
        if !r.passed {
            failed.push(id);
        }
    }
    let (ok, detail) = selftest_command();
    println!(
        "criterion 10 {:<28} {} {detail}",
        "selftest command",
        if ok { "PASS" } else { "FAIL" }
    );
    if !ok {
        failed.push(10);
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
