use qboson_core::scalar::rat;
use qboson_core::verify::{run_suite, SuiteConfig};

#[test]
fn default_suite_passes() {
    let checks = run_suite(&SuiteConfig::default());
    for c in &checks {
        println!("{c}");
    }
    assert!(checks.iter().all(|c| c.passed()));
    assert!(checks
        .iter()
        .filter(|c| c.cases == 0)
        .all(|c| c.name.contains("|i-j|")));
}

#[test]
fn two_sites_three_colors_negative_alpha() {
    let cfg = SuiteConfig {
        k: 2,
        n_colors: 3,
        alpha: rat(-3, 4),
        ..SuiteConfig::default()
    };
    let failed: Vec<_> = run_suite(&cfg)
        .into_iter()
        .filter(|c| !c.passed())
        .collect();
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn corrupted_rates_fail_only_the_generator_identity() {
    let cfg = SuiteConfig {
        k: 2,
        corrupt_rates: true,
        ..SuiteConfig::default()
    };
    let failed: Vec<String> = run_suite(&cfg)
        .into_iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    assert_eq!(failed.len(), 1, "{failed:?}");
    assert!(failed[0].starts_with("qboson: generator"));
}
