use meanslab::constants::constant;
use meanslab::precise::Precise;
use meanslab::ratio::{
    ch_kernel, h_eval, identity_residuals, monotonicity_scan, p0_residual, solve_p0, substitution_theta,
    THETA_STAR,
};
use meanslab::series::truncated_series_eval;
use meanslab::{Error, HFunction, PositivePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(a: f64, b: f64) -> PositivePair {
    PositivePair::new(a, b).unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

#[test]
fn endpoint_values_are_the_sharp_constants() {
    let h = |f: HFunction| h_eval(f, THETA_STAR).unwrap();
    assert!((h(HFunction::H1) - 0.5 - constant("ch-ratio.lower").unwrap().value).abs() < 1e-12);
    assert!((h(HFunction::H2) - constant("centroidal-qm.upper").unwrap().value).abs() < 1e-12);
    assert!((h(HFunction::H3) - constant("root-square-cm.lower").unwrap().value).abs() < 1e-12);
}

#[test]
fn endpoint_values_against_the_oracle() {
    let mut hp = Precise::new();
    // sinh(theta*) = 1, so h1(theta*) = (1 - theta*) / (2 theta*)
    let l = hp.ln_one_plus_sqrt2();
    let h1 = hp.div(&hp.sub(&hp.int(1), &l), &hp.mul(&hp.int(2), &l));
    assert!(hp.to_digits(&h1, 12).starts_with("0.067296"));
    for f in HFunction::ALL {
        let exact = f.endpoint_value(&mut hp);
        let exact = hp.to_f64(&exact);
        assert!(rel(h_eval(f, THETA_STAR).unwrap(), exact) < 1e-14, "{f}");
    }
    let h3 = HFunction::H3.endpoint_value(&mut hp);
    assert!(hp.to_digits(&h3, 12).starts_with("0.3231090047"));
    let h2 = HFunction::H2.endpoint_value(&mut hp);
    assert!(hp.to_digits(&h2, 12).starts_with("0.7107504213"));
}

#[test]
fn limits_at_zero() {
    for (f, limit) in [(HFunction::H1, 1.0 / 12.0), (HFunction::H2, 0.5), (HFunction::H3, 0.4)] {
        assert!((h_eval(f, 1e-8).unwrap() - limit).abs() < 1e-8, "{f}");
        assert_eq!(h_eval(f, 0.0).unwrap(), limit);
    }
    assert!(matches!(h_eval(HFunction::H1, -1e-3), Err(Error::Argument(_))));
}

#[test]
fn stable_form_matches_series_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut hp = Precise::new();
    for _ in 0..50 {
        let theta: f64 = rng.gen_range(0.0..THETA_STAR);
        for f in HFunction::ALL {
            let closed = h_eval(f, theta).unwrap();
            let series = truncated_series_eval(f.series(), theta, 40).unwrap();
            assert!(rel(closed, series) < 1e-13, "{f} theta={theta}: {closed} vs {series}");
            let x = hp.from_f64(theta);
            let exact = f.precise(&mut hp, &x);
            assert!(rel(closed, hp.to_f64(&exact)) < 1e-14, "{f} theta={theta}");
        }
    }
}

#[test]
fn stable_form_is_accurate_across_the_switch() {
    let mut hp = Precise::new();
    for theta in [1e-7, 5e-4, 0.999e-3, 1.001e-3, 2e-3, 0.05, 0.999, 1.001, 3.0, 9.5] {
        for f in HFunction::ALL {
            let x = hp.from_f64(theta);
            let exact = f.precise(&mut hp, &x);
            let got = h_eval(f, theta).unwrap();
            assert!(rel(got, hp.to_f64(&exact)) < 1e-14, "{f} theta={theta}");
        }
    }
}

#[test]
fn scans_are_strictly_monotone() {
    for f in HFunction::ALL {
        let verdict = monotonicity_scan(f, 100_000).unwrap();
        assert!(verdict.strict(), "{f}: {verdict:?}");
    }
    let two = monotonicity_scan(HFunction::H3, 2).unwrap();
    assert!(two.strict());
    assert!(h_eval(HFunction::H3, THETA_STAR / 2.0).unwrap() > h_eval(HFunction::H3, THETA_STAR).unwrap());
    assert!(monotonicity_scan(HFunction::H1, 1).is_err());
}

#[test]
fn kernel_decreases_to_its_endpoint() {
    let n = 100_000;
    let mut prev = f64::INFINITY;
    for i in 1..n {
        let v = ch_kernel(i as f64 / n as f64);
        assert!(v < prev, "t={}", i as f64 / n as f64);
        prev = v;
    }
    let endpoint = constant("m-over-ch.lower").unwrap().value;
    assert!((ch_kernel(1.0 - 1e-12) - endpoint).abs() < 1e-11);
    assert!(format!("{endpoint}").starts_with("0.567296"));
}

#[test]
fn substitution_examples() {
    let mut hp = Precise::new();
    let half = hp.ratio(1, 2);
    let oracle = hp.asinh(&half);
    let theta = substitution_theta(pair(3.0, 1.0)).unwrap();
    assert!(rel(theta, hp.to_f64(&oracle)) < 1e-15);
    assert!(format!("{theta}").starts_with("0.481211"));
    for lambda in [0.125, 1024.0] {
        assert_eq!(substitution_theta(pair(3.0 * lambda, lambda)).unwrap(), theta);
    }
    for lambda in [1e-6, 1e6] {
        assert!(rel(substitution_theta(pair(3.0 * lambda, lambda)).unwrap(), theta) < 1e-15);
    }
    assert_eq!(substitution_theta(pair(1.0, 3.0)).unwrap(), theta);
    assert!(THETA_STAR - substitution_theta(pair(1e12, 1.0)).unwrap() < 1e-11);
    assert!(matches!(substitution_theta(pair(2.0, 2.0)), Err(Error::Degenerate { .. })));
}

#[test]
fn identity_residual_examples() {
    let r = identity_residuals(pair(3.0, 1.0)).unwrap();
    assert!(r.max_residual() < 1e-12, "{r:?}");
    assert!((r.ratios[0] - (-0.421913)).abs() < 1e-6);
    let near = identity_residuals(pair(1.0 + 1e-6, 1.0)).unwrap();
    assert!(near.max_residual() < 1e-10, "{near:?}");
    let scaled = identity_residuals(pair(3e6, 1e6)).unwrap();
    for i in 0..4 {
        assert!(rel(scaled.ratios[i], r.ratios[i]) < 1e-15);
    }
}

#[test]
fn identity_residuals_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20_000 {
        let ratio = (rng.gen::<f64>() * 1e8f64.ln()).exp();
        if ratio == 1.0 {
            continue;
        }
        let r = identity_residuals(pair(ratio, 1.0)).unwrap();
        worst = worst.max(r.max_residual());
    }
    assert!(worst < 1e-12, "worst residual {worst:e}");
}

#[test]
fn p0_root() {
    let p0 = solve_p0().unwrap();
    assert!(format!("{p0}").starts_with("1.843"));
    assert!(p0_residual(p0).abs() < 1e-11);
    let c = constant("lp-bracket.lower").unwrap();
    assert!((c.value - p0).abs() < 1e-11);
    assert!(c.digits.starts_with("1.843"));

    let mut hp = Precise::new();
    let p = hp.from_f64(p0);
    let base = hp.add(&p, &hp.int(1));
    let power = hp.pow(&base, &hp.div(&hp.int(1), &p));
    let l = hp.ln_one_plus_sqrt2();
    let target = hp.mul(&hp.int(2), &l);
    assert!(hp.to_digits(&target, 8).starts_with("1.7627472"));
    assert!(hp.to_f64(&hp.sub(&power, &target)).abs() < 1e-11);
}
