use meanslab::series::{
    coefficient_ratio, difference_sign_check, truncated_series_eval, LemmaSeries, Monotonicity, DEFAULT_DEPTH,
};
use meanslab::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const TERMS: usize = 2 * DEFAULT_DEPTH + 8;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Taylor coefficients of `sinh x`, `cosh x`, indexed by power.
fn sinh_cosh() -> (Vec<BigRational>, Vec<BigRational>) {
    let mut sinh = vec![BigRational::zero(); TERMS];
    let mut cosh = vec![BigRational::zero(); TERMS];
    let mut fact = BigInt::one();
    for k in 0..TERMS {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let c = BigRational::new(BigInt::one(), fact.clone());
        if k % 2 == 0 {
            cosh[k] = c;
        } else {
            sinh[k] = c;
        }
    }
    (sinh, cosh)
}

fn product(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); TERMS];
    for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, yj) in y.iter().enumerate().take(TERMS - i) {
            if !yj.is_zero() {
                out[i + j] += xi * yj;
            }
        }
    }
    out
}

/// Numerator and denominator series of `h`, built by series arithmetic and
/// shifted so both start at power zero; returns `(a_n, b_n)` for `n < count`.
fn reference_coefficients(series: LemmaSeries, count: usize) -> Vec<(BigRational, BigRational)> {
    let (sinh, cosh) = sinh_cosh();
    let sinh2 = product(&sinh, &sinh);
    // sinh(x)/x
    let sinc: Vec<BigRational> = (0..TERMS)
        .map(|k| sinh.get(k + 1).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    let one = |k: usize| if k == 0 { BigRational::one() } else { BigRational::zero() };
    let x = |k: usize| if k == 1 { BigRational::one() } else { BigRational::zero() };
    let (num, den, shift): (Vec<BigRational>, Vec<BigRational>, usize) = match series {
        LemmaSeries::H1 => (
            (0..TERMS).map(|k| &sinh[k] - x(k)).collect(),
            (0..TERMS)
                .map(|k| if k == 0 { BigRational::zero() } else { &sinh2[k - 1] * r(2, 1) })
                .collect(),
            3,
        ),
        LemmaSeries::H2 => (
            (0..TERMS).map(|k| one(k) - &sinc[k] + &sinh2[k] / r(3, 1)).collect(),
            (0..TERMS).map(|k| &cosh[k] - &sinc[k]).collect(),
            2,
        ),
        LemmaSeries::H3 => (
            (0..TERMS).map(|k| &cosh[k] - &sinc[k]).collect(),
            (0..TERMS).map(|k| one(k) + &sinh2[k] - &sinc[k]).collect(),
            2,
        ),
    };
    for k in 0..shift {
        assert!(num[k].is_zero() && den[k].is_zero(), "{series}: power {k} does not vanish");
    }
    for k in (shift..TERMS).filter(|k| (k - shift) % 2 == 1) {
        assert!(num[k].is_zero() && den[k].is_zero(), "{series}: odd power {k}");
    }
    (0..count)
        .map(|n| (num[2 * n + shift].clone(), den[2 * n + shift].clone()))
        .collect()
}

#[test]
fn coefficients_match_series_arithmetic() {
    for series in LemmaSeries::ALL {
        for (n, (a, b)) in reference_coefficients(series, DEFAULT_DEPTH + 1).into_iter().enumerate() {
            assert_eq!(series.numerator_coeff(n), a, "{series} a_{n}");
            assert_eq!(series.denominator_coeff(n), b, "{series} b_{n}");
            assert!(b.is_positive(), "{series} b_{n}");
        }
    }
}

#[test]
fn ratio_closed_form_agrees_to_depth() {
    for series in LemmaSeries::ALL {
        for n in 0..=DEFAULT_DEPTH {
            let c = coefficient_ratio(series, n);
            assert!(c.agrees(), "{series} n={n}");
        }
    }
}

#[test]
fn ratio_examples() {
    assert_eq!(coefficient_ratio(LemmaSeries::H1, 0).value(), &r(1, 12));
    assert_eq!(coefficient_ratio(LemmaSeries::H2, 0).value(), &r(1, 2));
    assert_eq!(coefficient_ratio(LemmaSeries::H3, 0).value(), &r(2, 5));
    assert_eq!(coefficient_ratio(LemmaSeries::H1, 1).value(), &r(1, 80));
}

#[test]
fn sign_check_passes_at_default_depth() {
    for series in LemmaSeries::ALL {
        let report = difference_sign_check(series, DEFAULT_DEPTH).unwrap();
        assert!(report.passed(), "{series}: {:?}", report.first_failure);
        assert_eq!(report.checked, DEFAULT_DEPTH);
    }
    assert_eq!(LemmaSeries::H1.expected_monotonicity(), Monotonicity::Decreasing);
    assert_eq!(LemmaSeries::H2.expected_monotonicity(), Monotonicity::Increasing);
    assert_eq!(LemmaSeries::H3.expected_monotonicity(), Monotonicity::Decreasing);
}

#[test]
fn first_differences() {
    let first = |s| difference_sign_check(s, 1).unwrap().first_difference;
    assert_eq!(first(LemmaSeries::H1), r(-17, 240));
    assert_eq!(first(LemmaSeries::H2), r(31, 12));
    assert_eq!(first(LemmaSeries::H3), r(-58, 195));
    // the closed form at n = 0: -17 / (3 * 5 * 2^4)
    assert_eq!(LemmaSeries::H1.closed_form_difference(0), r(-17, 3 * 5 * 16));
}

#[test]
fn sign_check_rejects_zero_depth() {
    assert!(matches!(difference_sign_check(LemmaSeries::H1, 0), Err(Error::Parameter(_))));
}

#[test]
fn truncated_eval_examples() {
    for depth in [2, 7, 64, 200] {
        assert_eq!(truncated_series_eval(LemmaSeries::H1, 0.0, depth).unwrap(), 1.0 / 12.0);
        assert_eq!(truncated_series_eval(LemmaSeries::H2, 0.0, depth).unwrap(), 0.5);
    }
    let x: f64 = 0.5;
    let closed = (x.sinh() - x) / (2.0 * x * x.sinh().powi(2));
    let series = truncated_series_eval(LemmaSeries::H1, x, 30).unwrap();
    assert!((series - closed).abs() < 1e-14);
    assert!(matches!(truncated_series_eval(LemmaSeries::H1, 0.5, 1), Err(Error::Parameter(_))));
    assert!(truncated_series_eval(LemmaSeries::H1, 1.0, 10).is_err());
}

#[test]
fn truncation_tail_bound() {
    for series in LemmaSeries::ALL {
        for depth in 2..40 {
            for i in 1..=50 {
                let x = 0.5 * i as f64 / 50.0;
                let d = truncated_series_eval(series, x, depth).unwrap();
                let d5 = truncated_series_eval(series, x, depth + 5).unwrap();
                let bound = x.powi(2 * depth as i32);
                // below one ulp of the value the bound is met by rounding alone
                assert!(
                    (d - d5).abs() < bound.max(2.0 * f64::EPSILON * d.abs()),
                    "{series} depth={depth} x={x}"
                );
            }
        }
    }
}

#[test]
fn truncation_tail_bound_exact() {
    let eval = |series: LemmaSeries, x: &BigRational, depth: usize| {
        let s = x * x;
        let mut power = BigRational::one();
        let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
        for n in 0..depth {
            num += series.numerator_coeff(n) * &power;
            den += series.denominator_coeff(n) * &power;
            power *= &s;
        }
        num / den
    };
    for series in LemmaSeries::ALL {
        for x in [r(1, 2), r(1, 4), r(1, 10), r(3, 7)] {
            for depth in 2..40 {
                let gap = (eval(series, &x, depth) - eval(series, &x, depth + 5)).abs();
                let mut bound = BigRational::one();
                for _ in 0..2 * depth {
                    bound *= &x;
                }
                assert!(gap < bound, "{series} depth={depth} x={x}");
            }
        }
    }
}
