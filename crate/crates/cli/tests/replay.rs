use std::process::Command;

use valdist_cli::record::RunRecord;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_valdist")).args(args).output().unwrap()
}

#[test]
fn construct_record_replays_and_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("run.toml");
    let out = run(&[
        "construct", "zeta", "--m", "0", "--z", "2", "--delta", "1", "--p-max", "20000", "--n-max", "2000",
        "--out", rec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let record = RunRecord::load(&rec).unwrap();
    assert_eq!(record.command, "construct");
    assert_eq!(record.certificates.len(), 1);
    assert_eq!(RunRecord::parse(&record.to_text()).unwrap(), record);

    let check = run(&["certify", rec.to_str().unwrap(), "--replay"]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));
    assert!(String::from_utf8_lossy(&check.stdout).contains("replay identical = true"));

    // a certificate claiming the wrong count is rejected
    let mut bad = record.clone();
    bad.certificates[0].winding = 2;
    let tampered = dir.path().join("bad.toml");
    std::fs::write(&tampered, bad.to_text()).unwrap();
    assert_eq!(run(&["certify", tampered.to_str().unwrap()]).status.code(), Some(5));

    // a record whose outputs differ from a fresh run fails the replay
    let mut drift = record;
    drift.summary.push("extra".into());
    let drifted = dir.path().join("drift.toml");
    std::fs::write(&drifted, drift.to_text()).unwrap();
    assert_eq!(run(&["certify", drifted.to_str().unwrap(), "--replay"]).status.code(), Some(5));
}

#[test]
fn density_is_seeded() {
    let a = run(&["kronecker", "--primes", "2,3,5,7", "--method", "density", "--seed", "7"]);
    let b = run(&["kronecker", "--primes", "2,3,5,7", "--method", "density", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}
