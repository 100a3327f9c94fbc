//! One test per acceptance criterion. Each prints a single PASS/FAIL line.

use std::process::Command;
use std::time::Instant;

use diffeolin::verify::{criterion, CheckResult};
use diffeolin::Exec;

fn run(number: usize) {
    let result: CheckResult = criterion(number).expect("known criterion")(Exec::default());
    println!("criterion {number:>2}: {}", result.line());
    assert!(result.passed, "criterion {number} failed: {}", result.detail);
}

#[test]
fn criterion_01_dual_dimensions() {
    run(1);
}

#[test]
fn criterion_02_bilinear_vanishing() {
    run(2);
}

#[test]
fn criterion_03_curry_correspondence() {
    run(3);
}

#[test]
fn criterion_04_dual_map_smoothness() {
    run(4);
}

#[test]
fn criterion_05_tensor_dual_multiplicativity() {
    run(5);
}

#[test]
fn criterion_06_non_isomorphism() {
    run(6);
}

#[test]
fn criterion_07_distributivity() {
    run(7);
}

#[test]
fn criterion_08_oracle_agreement() {
    run(8);
}

#[test]
fn criterion_09_hat_dual_wellposed() {
    run(9);
}

#[test]
fn criterion_10_verify_command() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_diffeolin")).arg("verify").output().expect("binary runs");
    let secs = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let code = out.status.code();
    let passed = code == Some(0) && secs < 60.0;
    let status = if passed { "PASS" } else { "FAIL" };
    println!("criterion 10: {status} c10-verify-exit-status exit {code:?} in {secs:.1} s (limit 60 s)");
    if !passed {
        for line in stdout.lines().filter(|l| l.starts_with("FAIL")) {
            println!("    {line}");
        }
    }
    assert!(passed, "verify exited with {code:?} after {secs:.1} s");
}
