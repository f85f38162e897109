use std::process::{Command, Output};

fn valdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valdist")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    valdist(args).status.code().expect("exited")
}

#[test]
fn success_is_zero() {
    assert_eq!(code(&["sieve", "100"]), 0);
}

#[test]
fn usage_errors_are_two() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["sieve"]), 2);
    assert_eq!(code(&["sieve", "ten"]), 2);
    let out = valdist(&["selberg", "no_such_entry", "--x", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_entry"));
}

#[test]
fn zero_value_of_zeta_is_three() {
    assert_eq!(code(&["construct", "zeta", "--m", "0", "--z", "0", "--p-max", "1000", "--n-max", "100"]), 3);
}

#[test]
fn unreachable_annulus_is_three() {
    assert_eq!(code(&["annulus", "--radii", "1,0.5", "--z", "2"]), 3);
}

#[test]
fn missing_shift_is_four() {
    assert_eq!(code(&["kronecker", "--primes", "2,3,5,7", "--phases", "3,1,2,0.5", "--eps1", "0.01", "--t-max", "5"]), 4);
}

#[test]
fn missing_margin_is_five() {
    // 2/zeta(1.2) is below the tail of the shift bound
    assert_eq!(code(&["almostperiod", "zeta", "--delta", "0.2", "--eps", "1.9", "--p-max", "1e4", "--n-max", "1e4"]), 5);
}

#[test]
fn unreadable_file_is_one() {
    let out = valdist(&["plot", "/nonexistent/scan.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/scan.csv"));
}
