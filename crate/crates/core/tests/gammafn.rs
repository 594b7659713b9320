use proptest::prelude::*;
use retrans::gammafn::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn complete_gamma_values() {
    assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
    assert!(rel(gamma(3.0).unwrap(), 2.0) < 1e-14);
    assert!(rel(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-14);
    assert!(rel(gamma(11.0).unwrap(), 3_628_800.0) < 1e-13);
    assert!(matches!(gamma(171.0), Err(GammaError::Overflow(_))));
}

#[test]
fn upper_incomplete_reference_values() {
    assert!(rel(upper_incomplete_gamma(0.0, 3.0).unwrap(), 2.0) < 1e-14);
    assert!(rel(upper_incomplete_gamma(1.0, 1.0).unwrap(), (-1.0f64).exp()) < 1e-14);
    // ∫₂^∞ e^−z z^−½ dz = √π erfc(√2)
    assert!(rel(upper_incomplete_gamma(2.0, 0.5).unwrap(), 0.08064711796031769) < 1e-12);
}

#[test]
fn underflow_is_graceful() {
    let e = upper_gamma_eval(750.0, 2.0).unwrap();
    assert_eq!(e.value, 0.0);
    assert_eq!(e.est_rel_err, 1.0);
    assert!(rel(e.ln_value, -750.0 + 751f64.ln()) < 1e-14);
}

#[test]
fn method_follows_switch_point() {
    assert_eq!(upper_gamma_eval(2.9, 2.0).unwrap().method, GammaMethod::Series);
    assert_eq!(upper_gamma_eval(3.1, 2.0).unwrap().method, GammaMethod::ContinuedFraction);
    assert_eq!(asymptotic_eval(30.0, 2.0, 3).method, GammaMethod::AsymptoticExpansion);
}

#[test]
fn value_bounded_by_complete_gamma() {
    for alpha in [0.5, 1.0, 2.5, 7.0] {
        let full = gamma(alpha).unwrap();
        for i in 0..50 {
            let v = upper_incomplete_gamma(i as f64 * 0.4, alpha).unwrap();
            assert!((0.0..=full * (1.0 + 1e-14)).contains(&v));
        }
    }
}

#[test]
fn strictly_decreasing_in_x() {
    for alpha in [0.5, 1.0, 2.0, 4.0] {
        let vals: Vec<f64> = (0..100)
            .map(|i| upper_incomplete_gamma(0.01 + i as f64 * 0.3, alpha).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "alpha = {alpha}");
    }
}

#[test]
fn closed_forms_on_grid() {
    for i in 0..200 {
        let x = 0.01 + i as f64 * 0.25;
        assert!(rel(upper_incomplete_gamma(x, 1.0).unwrap(), (-x).exp()) < 1e-12, "x = {x}");
        assert!(rel(upper_incomplete_gamma(x, 2.0).unwrap(), (1.0 + x) * (-x).exp()) < 1e-12);
    }
}

#[test]
fn recurrence_on_grid() {
    for alpha in [0.5, 1.0, 2.5] {
        for i in 0..100 {
            let x = 0.01 + i as f64 * 0.5;
            let lhs = upper_incomplete_gamma(x, alpha + 1.0).unwrap();
            let rhs = alpha * upper_incomplete_gamma(x, alpha).unwrap() + x.powf(alpha) * (-x).exp();
            assert!(rel(lhs, rhs) < 1e-9, "x = {x}, alpha = {alpha}");
        }
    }
}

#[test]
fn asymptotic_examples() {
    assert!(rel(incomplete_gamma_asymptotic(50.0, 2.0, 2), 51.0 * (-50.0f64).exp()) < 1e-14);
    assert!(rel(incomplete_gamma_asymptotic(5.0, 1.0, 1), (-5.0f64).exp()) < 1e-14);
    let exact = upper_incomplete_gamma(20.0, 4.0).unwrap();
    assert!(rel(incomplete_gamma_asymptotic(20.0, 4.0, 4), exact) < 1e-3);
}

#[test]
fn asymptotic_error_decreases_in_x() {
    for alpha in [0.5, 2.5, 3.7] {
        let errs: Vec<f64> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&x| rel(incomplete_gamma_asymptotic(x, alpha, 3), upper_incomplete_gamma(x, alpha).unwrap()))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "alpha = {alpha}: {errs:?}");
    }
}

#[test]
fn terms_capped_at_floor() {
    assert_eq!(capped_terms(3.7, 10), 3);
    assert_eq!(capped_terms(0.2, 10), 1);
    assert_eq!(capped_terms(100.0, 5), 5);
}

proptest! {
    #[test]
    fn recurrence_holds(x in 0.01f64..60.0, alpha in 0.1f64..20.0) {
        let lhs = upper_incomplete_gamma(x, alpha + 1.0).unwrap();
        let rhs = alpha * upper_incomplete_gamma(x, alpha).unwrap() + (alpha * x.ln() - x).exp();
        prop_assert!(rel(lhs, rhs) < 1e-9);
    }

    #[test]
    fn regularized_parts_sum_to_one(x in 0.0f64..100.0, alpha in 0.1f64..50.0) {
        let p = regularized_lower_gamma(x, alpha).unwrap();
        let q = regularized_upper_gamma(x, alpha).unwrap();
        prop_assert!((p + q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_variant_matches(x in 0.0f64..600.0, alpha in 0.1f64..30.0) {
        let v = upper_incomplete_gamma(x, alpha).unwrap();
        let l = ln_upper_incomplete_gamma(x, alpha).unwrap();
        prop_assert!(rel(l.exp(), v) < 1e-12);
    }
}
