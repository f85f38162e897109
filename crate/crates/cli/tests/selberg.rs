use std::process::Command;

fn table(args: &[&str]) -> Vec<Vec<f64>> {
    let out = Command::new(env!("CARGO_BIN_EXE_valdist")).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn zeta_is_exactly_one_at_every_checkpoint() {
    let rows = table(&["selberg", "zeta", "--x", "1e6", "--p-max", "1000", "--n-max", "100"]);
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r[2] == 1.0));
    assert_eq!(rows.last().unwrap()[1], 78498.0);
}

#[test]
fn chi4_difference_is_two() {
    let rows = table(&["selberg", "chi4diff", "--x", "1e6"]);
    let k = rows.last().unwrap()[2];
    assert!((1.95..=2.05).contains(&k), "{k}");
}

#[test]
fn pair_decomposition_adds_up() {
    let rows = table(&["selberg", "zeta", "chi4", "--x", "1e4", "--p-max", "1e4", "--n-max", "100"]);
    let r = rows.last().unwrap();
    let (pi, k, s1, s2, cross) = (r[1], r[2], r[3], r[4], r[5]);
    assert!((k * pi - (s1 + s2 - 2.0 * cross)).abs() < 1e-6 * pi);
    assert!((k - 2.0).abs() < 0.05);
}
