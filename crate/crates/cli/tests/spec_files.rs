use num_complex::Complex64;
use valdist::catalog::{delta_norm, eval_entry, zeta, zeta_over_zeta2s, CatalogConfig, LFunctionEntry};
use valdist_cli::spec::LFunctionSpecFile;

fn small() -> CatalogConfig {
    CatalogConfig { p_max: 400, n_max: 300, tau_cache: None }
}

fn same_entry(a: &LFunctionEntry, b: &LFunctionEntry) {
    assert_eq!(a.name, b.name);
    assert_eq!(a.backend, b.backend);
    assert_eq!(a.expected_kappa, b.expected_kappa);
    assert_eq!(a.abscissa_abs, b.abscissa_abs);
    assert_eq!(a.source.primes(), b.source.primes());
    for i in 0..a.source.primes().len() {
        assert_eq!(a.source.row(i), b.source.row(i));
    }
    assert_eq!(a.coeffs.values(), b.coeffs.values());
    assert_eq!(a.source.growth(), b.source.growth());
    assert_eq!(a.source.large_prime_floor(), b.source.large_prime_floor());
}

#[test]
fn load_serialize_load_is_identity() {
    for entry in [zeta(&small()).unwrap(), zeta_over_zeta2s(&small()).unwrap(), delta_norm(&small()).unwrap()] {
        let spec = LFunctionSpecFile::from_entry(&entry);
        let text = spec.to_text();
        let back = LFunctionSpecFile::parse(&text).unwrap();
        assert_eq!(back, spec);
        let first = back.to_entry().unwrap();
        let again = LFunctionSpecFile::parse(&LFunctionSpecFile::from_entry(&first).to_text()).unwrap().to_entry().unwrap();
        same_entry(&first, &again);
        for i in 0..entry.source.primes().len() {
            assert_eq!(entry.source.row(i), first.source.row(i));
        }
    }
}

#[test]
fn hand_written_spec_evaluates() {
    let mut text = String::from("name = \"zeta_97\"\np_max = 97\nn_max = 97\nbackend = \"em\"\n");
    text.push_str("em_factors = [[\"zeta\", 1.0, 0.0, 1]]\ngrowth = [1.0, 0.0, 1.0, 0.0]\ncoefficients = [\n");
    for p in valdist::primes::simple_sieve(97) {
        let mut k = 1;
        while p.pow(k) <= 97 {
            text.push_str(&format!("  [{p}, {k}, {}, 0.0],\n", 1.0 / k as f64));
            k += 1;
        }
    }
    text.push_str("]\n");
    let e = LFunctionSpecFile::parse(&text).unwrap().to_entry().unwrap();
    let v = eval_entry(&e, Complex64::new(2.0, 0.0), 1e-12).unwrap();
    assert!((v.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
    assert!(e.coeffs.values().iter().all(|a| (a.re - 1.0).abs() < 1e-12));
}

#[test]
fn invariants_are_enforced_at_load() {
    let base = "name = \"x\"\np_max = 10\nn_max = 10\nbackend = \"raw\"\ngrowth = [1.0, 0.0, 1.0, 0.0]\n";
    assert!(LFunctionSpecFile::parse(&format!("{base}coefficients = [[2, 1, 3.0, 0.0]]\n")).unwrap().to_entry().is_err());
    assert!(LFunctionSpecFile::parse(&format!("{base}coefficients = [[4, 1, 0.5, 0.0]]\n")).unwrap().to_entry().is_err());
    assert!(LFunctionSpecFile::parse(&format!("{base}coefficients = [[2, 4, 0.5, 0.0]]\n")).unwrap().to_entry().is_err());
    assert!(LFunctionSpecFile::parse(&format!("{base}coefficients = []\nbogus = 1\n")).is_err());
    let em = "name = \"x\"\np_max = 10\nn_max = 10\nbackend = \"em\"\ngrowth = [1.0, 0.0, 1.0, 0.0]\ncoefficients = []\n";
    assert!(LFunctionSpecFile::parse(em).unwrap().to_entry().is_err());
}

#[test]
fn spec_files_drive_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.toml");
    std::fs::write(&path, LFunctionSpecFile::from_entry(&zeta(&small()).unwrap()).to_text()).unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_valdist"))
        .args(["selberg", path.to_str().unwrap(), "--x", "400"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).lines().last().unwrap().ends_with(",1"));
}
