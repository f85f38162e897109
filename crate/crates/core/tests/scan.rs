use valdist::catalog::{euler_zagier_diag, zeta, Builtin, CatalogConfig, ComboEntry, ComboPart};
use valdist::zerolab::construct::ConstructConfig;
use valdist::zerolab::scan::{combo_zero_search, cvalue_scan, linear_growth_probe, raster_scan, Strategy};
use valdist::zerolab::{rouche::revalidate, ComboValue, EntryValue, Rectangle};
use valdist::zeta_em::eval_zeta_em;
use valdist::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> CatalogConfig {
    CatalogConfig { p_max: 20_000, n_max: 2_000, tau_cache: None }
}

/// zeta(sigma) = 2 by bisection on the real axis.
fn bisect_zeta_two() -> f64 {
    let (mut lo, mut hi) = (1.5, 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if eval_zeta_em(c(mid, 0.0), 1e-14).unwrap().value.re > 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn zeta_two_on_the_real_axis() {
    let e = zeta(&cfg()).unwrap();
    let f = EntryValue { entry: &e, shift: c(0.0, 0.0), minus: c(2.0, 0.0), tol: 1e-12 };
    let rep = raster_scan(&f, Rectangle::new(1.5, 2.0, -0.5, 0.5).unwrap(), 0.1, 0.4, 3).unwrap();
    assert_eq!(rep.hits.len(), 1, "{rep:?}");
    let root = bisect_zeta_two();
    assert!((root - 1.7286).abs() < 1e-4);
    let Rectangle { sigma_min, sigma_max, t_min, t_max } = rep.hits[0].region.bbox();
    assert!(sigma_min < root && root < sigma_max && t_min < 0.0 && t_max > 0.0);
    assert!(revalidate(&f, &rep.hits[0]).unwrap());
}

#[test]
fn zeta_has_no_zeros_right_of_one() {
    let e = Builtin::Entry(zeta(&cfg()).unwrap());
    let rep = cvalue_scan(&e, 0, c(0.0, 0.0), 1.0, 10.0, &Strategy::raster(), 1e-10).unwrap();
    assert!(rep.hits.is_empty() && rep.exhaustive() && rep.zero_free > 0);
    assert!(rep.certified_strip.unwrap().sigma_min > 1.0);
}

#[test]
fn euler_zagier_raster_finds_a_zero() {
    let ez = euler_zagier_diag(&cfg()).unwrap();
    let rep = cvalue_scan(&Builtin::Combo(ez.clone()), 0, c(0.0, 0.0), 0.5, 30.0, &Strategy::raster(), 1e-10).unwrap();
    assert!(!rep.hits.is_empty(), "{} undecided", rep.indeterminate.len());
    assert!(rep.pairwise_disjoint());
    // located independently: 1.107786 + 23.797087 i
    let hit = rep.hits.iter().find(|h| h.region.bbox().contains(c(1.107786, 23.797087))).expect("known zero");
    let f = ComboValue { combo: &ez, shift: c(0.0, 0.0), minus: c(0.0, 0.0), tol: 1e-10 };
    assert!(revalidate(&f, hit).unwrap());
}

#[test]
fn identical_parts_fail_positivity() {
    let e = zeta(&cfg()).unwrap();
    let combo = ComboEntry {
        name: "zero".into(),
        parts: vec![
            ComboPart { coefficient: c(1.0, 0.0), entry: e.clone(), shift: c(0.0, 0.0) },
            ComboPart { coefficient: c(-1.0, 0.0), entry: e, shift: c(0.0, 0.0) },
        ],
    };
    assert!(matches!(combo_zero_search(&combo, 0.5, 10.0, &Strategy::raster(), 1e-10), Err(Error::Invalid(_))));
}

#[test]
fn zeta_minus_shifted_zeta() {
    let e = zeta(&cfg()).unwrap();
    let combo = ComboEntry {
        name: "zeta_minus_zeta1".into(),
        parts: vec![
            ComboPart { coefficient: c(1.0, 0.0), entry: e.clone(), shift: c(0.0, 0.0) },
            ComboPart { coefficient: c(-1.0, 0.0), entry: e, shift: c(1.0, 0.0) },
        ],
    };
    let f = ComboValue { combo: &combo, shift: c(0.0, 0.0), minus: c(0.0, 0.0), tol: 1e-10 };
    let rep = raster_scan(&f, Rectangle::new(1.3, 1.5, 160.5, 161.5).unwrap(), 0.05, 0.25, 3).unwrap();
    assert_eq!(rep.hits.len(), 1, "{rep:?}");
    // findroot from a coarse modulus scan
    let root = c(1.404_221_933, 161.001_347_4);
    assert!(rep.hits[0].region.bbox().contains(root));
    assert!(revalidate(&f, &rep.hits[0]).unwrap());
}

#[test]
fn zeta_minus_shifted_zeta_constructive_is_a_clean_negative() {
    let e = zeta(&cfg()).unwrap();
    let combo = ComboEntry {
        name: "zeta_minus_zeta1".into(),
        parts: vec![
            ComboPart { coefficient: c(1.0, 0.0), entry: e.clone(), shift: c(0.0, 0.0) },
            ComboPart { coefficient: c(-1.0, 0.0), entry: e, shift: c(1.0, 0.0) },
        ],
    };
    let mut k = ConstructConfig::new(0, c(1.0, 0.0), 1.0);
    k.candidates = 10;
    match combo_zero_search(&combo, 1.0, 2e5, &Strategy::Constructive(Box::new(k), 1), 1e-10) {
        Err(Error::NoCertificate(_) | Error::SigmaInfeasible(_)) => {}
        Ok(rep) => {
            let f = ComboValue { combo: &combo, shift: c(0.0, 0.0), minus: c(0.0, 0.0), tol: 1e-10 };
            assert!(rep.hits.iter().all(|h| revalidate(&f, h).unwrap()));
        }
        Err(other) => panic!("unexpected failure {other:?}"),
    }
}

#[test]
fn growth_probe_below_first_hit() {
    let e = zeta(&cfg()).unwrap();
    let k = ConstructConfig::new(0, c(2.0, 0.0), 1.0);
    let rows = linear_growth_probe(&e, &k, &[10.0, 2e5], 3).unwrap();
    assert_eq!(rows[0].1, 0);
    assert!(rows[1].1 >= 1);
}
