use proptest::prelude::*;
use retrans::dists::*;
use retrans::gammafn::regularized_upper_gamma;
use retrans::quad::integrate;
use retrans::rng::RandomStream;
use retrans::stats::{ks_band_one, ks_one_sample};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const FAMILIES: [DistSpec; 3] = [
    DistSpec::Exponential { rate: 2.0 },
    DistSpec::Weibull { shape: 0.5, scale: 16.0 },
    DistSpec::Gamma { rate: 2.0, shape: 2.0 },
];

#[test]
fn ccdf_examples() {
    let e = DistSpec::exponential(2.0).unwrap();
    assert_eq!(e.ccdf(0.0), 1.0);
    assert!(rel(e.ccdf(1.0), (-2.0f64).exp()) < 1e-15);
    let w = DistSpec::weibull(0.5, 16.0).unwrap();
    assert!(rel(w.ccdf(8.0), 0.4930686913952398) < 1e-14);
    // cross-check against the density
    let tail = integrate(|v: f64| w.density(8.0 + v / (1.0 - v)) / ((1.0 - v) * (1.0 - v)), &[0.0, 0.5, 1.0], 1e-12, 0.0, 100_000)
        .unwrap();
    assert!(rel(tail.value, w.ccdf(8.0)) < 1e-9);
}

#[test]
fn quantile_examples() {
    let e = DistSpec::exponential(2.0).unwrap();
    assert!((e.quantile_ccdf((-2.0f64).exp()).unwrap() - 1.0).abs() < 1e-15);
    for d in FAMILIES {
        assert_eq!(d.quantile_ccdf(1.0).unwrap(), 0.0);
    }
    let g = DistSpec::gamma(2.0, 2.0).unwrap();
    let x = g.quantile_ccdf(0.5).unwrap();
    assert!(rel(x, 0.8391734950083303) < 1e-12);
    assert!((regularized_upper_gamma(2.0 * x, 2.0).unwrap() - 0.5).abs() < 1e-12);
    let mass = integrate(|t| g.density(t), &[0.0, x], 1e-13, 0.0, 10_000).unwrap();
    assert!((mass.value - 0.5).abs() < 1e-10);
}

#[test]
fn sampling_is_deterministic() {
    let d = DistSpec::exponential(1.0).unwrap();
    let a = d.sample(&mut RandomStream::new(42, 0));
    let b = d.sample(&mut RandomStream::new(42, 0));
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn exponential_sample_mean() {
    let d = DistSpec::exponential(2.0).unwrap();
    let mut rng = RandomStream::new(11, 0);
    let n = 1_000_000;
    let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.002, "{mean}");
}

#[test]
fn weibull_sample_ks() {
    let d = DistSpec::weibull(2.0, 2.0).unwrap();
    let mut rng = RandomStream::new(12, 0);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
    assert!(ks_one_sample(&mut xs, |x| d.cdf(x)) < ks_band_one(n));
}

#[test]
fn probability_integral_transform_is_uniform() {
    let n = 1_000_000;
    for (i, d) in FAMILIES.into_iter().enumerate() {
        let mut rng = RandomStream::new(13, i as u64);
        let mut us: Vec<f64> = (0..n).map(|_| d.cdf(d.sample(&mut rng))).collect();
        let stat = ks_one_sample(&mut us, |u| u.clamp(0.0, 1.0));
        assert!(stat < ks_band_one(n), "{}: {stat}", d.family_name());
    }
}

#[test]
fn bounded_sampling() {
    let d = DistSpec::exponential(2.0).unwrap();
    let doc = BoundedDoc::new(d, Bound::Finite(1.0)).unwrap();
    let mut rng = RandomStream::new(14, 0);
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| doc.sample(&mut rng)).collect();
    assert!(xs.iter().all(|&x| (0.0..=1.0).contains(&x)));
    let p = ((-1.0f64).exp() - (-2.0f64).exp()) / (1.0 - (-2.0f64).exp());
    assert!((p - 0.2689414213699951).abs() < 1e-15);
    let emp = xs.iter().filter(|&&x| x > 0.5).count() as f64 / n as f64;
    assert!((emp - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt(), "{emp}");
}

#[test]
fn unbounded_sampling_matches_base_law() {
    let d = DistSpec::exponential(1.0).unwrap();
    let doc = BoundedDoc::new(d, Bound::Unbounded).unwrap();
    let mut rng = RandomStream::new(15, 0);
    let n = 200_000;
    let mut xs: Vec<f64> = (0..n).map(|_| doc.sample(&mut rng)).collect();
    assert!(ks_one_sample(&mut xs, |x| d.cdf(x)) < ks_band_one(n));
}

#[test]
fn degenerate_truncation() {
    let d = DistSpec::weibull(4.0, 1.0).unwrap();
    assert!(matches!(
        BoundedDoc::new(d, Bound::Finite(1e-80)),
        Err(DistError::DegenerateTruncation { .. })
    ));
}

#[test]
fn derived_examples() {
    let ch = DistSpec::exponential(1.0).unwrap();
    let m = derive_doc_law(ch, 2.0, SlowVarySpec::One, Bound::Finite(4.0)).unwrap();
    for i in 0..=40 {
        let x = i as f64 * 0.1;
        assert!((m.doc().law().ccdf(x) - (-2.0 * x).exp()).abs() < 1e-15);
    }
    let m = derive_doc_law(ch, 1.0, SlowVarySpec::One, Bound::Unbounded).unwrap();
    for x in [0.01, 0.5, 3.0, 30.0] {
        assert!((m.doc().law().ccdf(x) - ch.ccdf(x)).abs() <= 1e-12 * ch.ccdf(x));
        assert!(rel(m.doc().law().quantile_ccdf(ch.ccdf(x)).unwrap(), x) < 1e-12);
    }
    // Gamma(2, 2) document over an Exponential(2) channel
    let ell = SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 };
    let m = derive_doc_law(DistSpec::exponential(2.0).unwrap(), 1.0, ell, Bound::Finite(3.0)).unwrap();
    let g = DistSpec::gamma(2.0, 2.0).unwrap();
    for i in 0..=20 {
        let x = 1.0 + i as f64 * 0.1;
        assert!(rel(m.doc().law().ccdf(x), g.ccdf(x)) < 0.05);
    }
    assert_eq!(m.mode(), CouplingMode::Derived);
}

#[test]
fn derived_density_is_numerical_derivative() {
    let ch = DistSpec::exponential(1.0).unwrap();
    let m = derive_doc_law(ch, 2.0, SlowVarySpec::One, Bound::Finite(4.0)).unwrap();
    for x in [0.2, 1.0, 3.0] {
        assert!(rel(m.doc().law().density(x), 2.0 * (-2.0 * x).exp()) < 1e-6);
    }
}

#[test]
fn coupling_residuals() {
    let ex1a = CoupledModel::parametric(
        DistSpec::exponential(1.0).unwrap(),
        DistSpec::exponential(2.0).unwrap(),
        Bound::Finite(4.0),
        2.0,
        SlowVarySpec::One,
    )
    .unwrap();
    assert!(ex1a.validate_coupling().max_residual < 1e-14);

    let ex3 = CoupledModel::parametric(
        DistSpec::weibull(2.0, 2.0).unwrap(),
        DistSpec::weibull(2.0, 1.0).unwrap(),
        Bound::Finite(8.0),
        4.0,
        SlowVarySpec::One,
    )
    .unwrap();
    assert!(ex3.validate_coupling().max_residual < 1e-12);

    let ex4 = CoupledModel::parametric(
        DistSpec::exponential(2.0).unwrap(),
        DistSpec::gamma(2.0, 2.0).unwrap(),
        Bound::Finite(4.0),
        1.0,
        SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 },
    )
    .unwrap();
    let r = ex4.validate_coupling();
    assert!(r.within(COUPLING_TOLERANCE), "{}", r.max_residual);
    assert_eq!(r.grid.len(), RESIDUAL_GRID_POINTS);
    assert!(r.grid.iter().all(|&(x, _)| ex4.gbar(x) <= RESIDUAL_GBAR_START + 1e-15));
}

fn geometric_grid() -> Vec<f64> {
    (0..=40).map(|i| 10f64.powf(2.0 + i as f64 * 0.25)).collect()
}

fn slow_kinds() -> Vec<SlowVarySpec> {
    vec![
        SlowVarySpec::One,
        SlowVarySpec::log_power(1.0, -1.0).unwrap(),
        SlowVarySpec::log_power(3.0, -0.5).unwrap(),
        SlowVarySpec::log_power(0.5, 0.5).unwrap(),
        SlowVarySpec::log_power(1.0, 1.0).unwrap(),
        SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 },
        SlowVarySpec::GammaDocExact { rate: 1.0, shape: 1.5, channel_rate: 2.0 },
    ]
}

#[test]
fn slow_variation_profiles_shrink_monotonically() {
    for ell in slow_kinds() {
        for lambda in [2.0, 10.0] {
            let prof = ell.variation_profile(lambda, &geometric_grid());
            assert!(prof.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{ell:?}, {lambda}");
        }
        let last = *ell.variation_profile(2.0, &geometric_grid()).last().unwrap();
        assert!(last < 0.05, "{ell:?}: {last}");
    }
}

#[test]
fn slow_variation_ten_fold_below_tolerance_for_mild_kinds() {
    // a tenfold step moves ln x by ln 10, which stays above 5% of ln 10¹² for |β| ≥ 1
    for ell in [SlowVarySpec::One, SlowVarySpec::log_power(3.0, -0.5).unwrap(), SlowVarySpec::log_power(0.5, 0.5).unwrap()] {
        let last = *ell.variation_profile(10.0, &geometric_grid()).last().unwrap();
        assert!(last < 0.05, "{ell:?}: {last}");
    }
}

#[test]
fn slow_vary_serde() {
    let s: SlowVarySpec = toml::from_str("kind = \"log_power\"\ncoeff = 2.0\nexponent = -1.0").unwrap();
    assert_eq!(s, SlowVarySpec::LogPower { coeff: 2.0, exponent: -1.0, x_min: std::f64::consts::E });
}

proptest! {
    #[test]
    fn quantile_round_trip(u in 1e-12f64..(1.0 - 1e-12), which in 0usize..3) {
        let d = FAMILIES[which];
        let x = d.quantile_ccdf(u).unwrap();
        prop_assert!((d.ccdf(x) - u).abs() <= 1e-9);
    }

    #[test]
    fn quantile_round_trip_random_params(u in 1e-12f64..(1.0 - 1e-12), rate in 0.05f64..20.0, shape in 0.2f64..20.0) {
        for d in [DistSpec::Weibull { shape, scale: rate }, DistSpec::Gamma { rate, shape }] {
            let x = d.quantile_ccdf(u).unwrap();
            prop_assert!((d.ccdf(x) - u).abs() <= 1e-9, "{:?}", d);
        }
    }

    #[test]
    fn truncation_consistency(frac in 0.0f64..=1.0, b in 0.05f64..20.0, which in 0usize..3) {
        let d = FAMILIES[which];
        let doc = BoundedDoc::new(d, Bound::Finite(b)).unwrap();
        let x = frac * b;
        prop_assert!((doc.cdf(x) * doc.mass() - d.cdf(x)).abs() <= 1e-12);
        prop_assert!((doc.ccdf(x) + doc.cdf(x) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bounded_quantile_in_support(v in 0.0f64..=1.0, b in 0.05f64..20.0, which in 0usize..3) {
        let doc = BoundedDoc::new(FAMILIES[which], Bound::Finite(b)).unwrap();
        let x = doc.quantile_ccdf(v).unwrap();
        prop_assert!((0.0..=b).contains(&x));
    }

    #[test]
    fn derived_identity_round_trip(x in 0.0f64..50.0, rate in 0.1f64..5.0) {
        let ch = DistSpec::Exponential { rate };
        let m = derive_doc_law(ch, 1.0, SlowVarySpec::One, Bound::Unbounded).unwrap();
        prop_assert!((m.doc().law().ccdf(x) - ch.ccdf(x)).abs() <= 1e-12);
    }

    #[test]
    fn ccdf_nonincreasing(a in 0.0f64..100.0, step in 0.0f64..10.0, which in 0usize..3) {
        let d = FAMILIES[which];
        prop_assert!(d.ccdf(a + step) <= d.ccdf(a));
        prop_assert!(d.ccdf(a) > 0.0 || a > 30.0);
    }
}
