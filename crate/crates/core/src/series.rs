//! Exact power-series coefficients behind `h1`, `h2`, `h3`.
//!
//! Each `h` is a quotient `sum a_n x^(2n) / sum b_n x^(2n)` (after cancelling
//! the common `x^2` for `h2` and `h3`). If `b_n > 0` and `c_n = a_n / b_n` is
//! monotone, the quotient is monotone in the same direction. We check that
//! criterion exactly with big rationals, to a finite depth, and also check that
//! `c_n` and `c_(n+1) - c_n` agree with their simplified closed forms.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_DEPTH: usize = 200;

/// Number of cached `f64` coefficient pairs per series.
const F64_CACHE_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
        })
    }
}

/// The three coefficient sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaSeries {
    /// `(sinh x - x) / (2x sinh^2 x)`
    H1,
    /// `(1 - sinh x/x + sinh^2 x/3) / (cosh x - sinh x/x)`
    H2,
    /// `(cosh x - sinh x/x) / (1 + sinh^2 x - sinh x/x)`
    H3,
}

impl fmt::Display for LemmaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaSeries::H1 => "h1",
            LemmaSeries::H2 => "h2",
            LemmaSeries::H3 => "h3",
        })
    }
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

fn rat(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

impl LemmaSeries {
    pub const ALL: [LemmaSeries; 3] = [LemmaSeries::H1, LemmaSeries::H2, LemmaSeries::H3];

    /// `a_n`.
    pub fn numerator_coeff(self, n: usize) -> BigRational {
        let n_i = n as i64;
        match self {
            LemmaSeries::H1 => rat(BigInt::one(), factorial(2 * n + 3)),
            LemmaSeries::H2 => rat(
                int(2 * n_i + 3) * pow2(2 * n + 2) - int(6),
                int(6) * factorial(2 * n + 3),
            ),
            LemmaSeries::H3 => rat(int(2 * n_i + 2), factorial(2 * n + 3)),
        }
    }

    /// `b_n`.
    pub fn denominator_coeff(self, n: usize) -> BigRational {
        let n_i = n as i64;
        match self {
            LemmaSeries::H1 => rat(pow2(2 * n + 2), factorial(2 * n + 2)),
            LemmaSeries::H2 => rat(int(2 * n_i + 2), factorial(2 * n + 3)),
            LemmaSeries::H3 => rat(
                int(2 * n_i + 3) * pow2(2 * n + 1) - int(1),
                factorial(2 * n + 3),
            ),
        }
    }

    /// Simplified closed form of `c_n = a_n / b_n`.
    pub fn closed_form_ratio(self, n: usize) -> BigRational {
        let n_i = n as i64;
        match self {
            LemmaSeries::H1 => rat(BigInt::one(), int(2 * n_i + 3) * pow2(2 * n + 2)),
            LemmaSeries::H2 => rat(
                int(2 * n_i + 3) * pow2(2 * n + 1) - int(3),
                int(6 * (n_i + 1)),
            ),
            LemmaSeries::H3 => rat(
                int(2 * n_i + 2),
                int(2 * n_i + 3) * pow2(2 * n + 1) - int(1),
            ),
        }
    }

    /// Closed form of `c_(n+1) - c_n`.
    pub fn closed_form_difference(self, n: usize) -> BigRational {
        let n_i = n as i64;
        match self {
            LemmaSeries::H1 => rat(
                -int(6 * n_i + 17),
                int(2 * n_i + 3) * int(2 * n_i + 5) * pow2(2 * n + 4),
            ),
            LemmaSeries::H2 => rat(
                int(3) + int(7) * pow2(2 * n + 2)
                    + int(21 * n_i) * pow2(2 * n + 1)
                    + int(3 * n_i * n_i) * pow2(2 * n + 2),
                int(6 * (n_i + 1) * (n_i + 2)),
            ),
            LemmaSeries::H3 => {
                let num = int(1) + int(7) * pow2(2 * n + 2)
                    + int(21 * n_i) * pow2(2 * n + 1)
                    + int(3 * n_i * n_i) * pow2(2 * n + 2);
                let first = int(3) * pow2(2 * n + 1) + int(n_i) * pow2(2 * n + 2) - int(1);
                let second = int(5) * pow2(2 * n + 3) + int(n_i) * pow2(2 * n + 4) - int(1);
                rat(-(int(2) * num), first * second)
            }
        }
    }

    pub fn expected_monotonicity(self) -> Monotonicity {
        match self {
            LemmaSeries::H2 => Monotonicity::Increasing,
            LemmaSeries::H1 | LemmaSeries::H3 => Monotonicity::Decreasing,
        }
    }

    /// `lim_(x -> 0+) h(x) = a_0 / b_0`.
    pub fn limit_at_zero(self) -> BigRational {
        match self {
            LemmaSeries::H1 => rat(int(1), int(12)),
            LemmaSeries::H2 => rat(int(1), int(2)),
            LemmaSeries::H3 => rat(int(2), int(5)),
        }
    }

    /// `(a_n / b_0, b_n / b_0)` rounded once, so the value at zero is exact.
    fn normalized_f64_pair(self, n: usize) -> (f64, f64) {
        let b0 = self.denominator_coeff(0);
        (
            to_f64(&(self.numerator_coeff(n) / &b0)),
            to_f64(&(self.denominator_coeff(n) / &b0)),
        )
    }

    fn f64_coefficients(self) -> &'static [(f64, f64)] {
        static CACHE: OnceLock<[Vec<(f64, f64)>; 3]> = OnceLock::new();
        let cache = CACHE.get_or_init(|| {
            LemmaSeries::ALL.map(|s| {
                (0..F64_CACHE_DEPTH).map(|n| s.normalized_f64_pair(n)).collect()
            })
        });
        &cache[self as usize]
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// `n!`, extended incrementally and shared between threads.
pub fn factorial(n: usize) -> BigInt {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    if let Some(v) = table.read().expect("factorial cache poisoned").get(n) {
        return v.clone();
    }
    let mut guard = table.write().expect("factorial cache poisoned");
    while guard.len() <= n {
        let k = guard.len();
        let next = &guard[k - 1] * BigInt::from(k);
        guard.push(next);
    }
    guard[n].clone()
}

/// `c_n` from both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRatio {
    pub n: usize,
    /// `a_n / b_n` from the coefficient formulas.
    pub from_coefficients: BigRational,
    /// The simplified closed form.
    pub closed_form: BigRational,
}

impl CoefficientRatio {
    pub fn value(&self) -> &BigRational {
        &self.from_coefficients
    }

    pub fn agrees(&self) -> bool {
        self.from_coefficients == self.closed_form
    }
}

pub fn coefficient_ratio(series: LemmaSeries, n: usize) -> CoefficientRatio {
    CoefficientRatio {
        n,
        from_coefficients: series.numerator_coeff(n) / series.denominator_coeff(n),
        closed_form: series.closed_form_ratio(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignFailureKind {
    /// `b_n <= 0`.
    NonPositiveDenominator,
    /// `a_n / b_n` differs from the simplified `c_n`.
    RatioMismatch,
    /// `c_(n+1) - c_n` has the wrong sign.
    WrongSign,
    /// `c_(n+1) - c_n` differs from the closed-form difference.
    DifferenceMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignFailure {
    pub n: usize,
    pub kind: SignFailureKind,
}

/// Outcome of [`difference_sign_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignCheckReport {
    pub series: LemmaSeries,
    pub depth: usize,
    /// Differences verified before stopping.
    pub checked: usize,
    pub first_failure: Option<SignFailure>,
    /// `c_1 - c_0`.
    pub first_difference: BigRational,
}

impl SignCheckReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none() && self.checked == self.depth
    }
}

/// Checks `c_(n+1) - c_n` for `n` in `0..depth`: sign, closed form, the
/// ratio closed form, and positivity of `b_n`.
pub fn difference_sign_check(series: LemmaSeries, depth: usize) -> Result<SignCheckReport> {
    if depth == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    let expected = series.expected_monotonicity();
    let mut report = SignCheckReport {
        series,
        depth,
        checked: 0,
        first_failure: None,
        first_difference: BigRational::zero(),
    };
    let fail = |report: &mut SignCheckReport, n, kind| {
        report.first_failure = Some(SignFailure { n, kind });
    };

    let mut current = coefficient_ratio(series, 0);
    for n in 0..depth {
        if !series.denominator_coeff(n).is_positive() {
            fail(&mut report, n, SignFailureKind::NonPositiveDenominator);
            break;
        }
        if !current.agrees() {
            fail(&mut report, n, SignFailureKind::RatioMismatch);
            break;
        }
        let next = coefficient_ratio(series, n + 1);
        let diff = &next.from_coefficients - &current.from_coefficients;
        if n == 0 {
            report.first_difference = diff.clone();
        }
        let sign_ok = match expected {
            Monotonicity::Increasing => diff.is_positive(),
            Monotonicity::Decreasing => diff.is_negative(),
        };
        if !sign_ok {
            fail(&mut report, n, SignFailureKind::WrongSign);
            break;
        }
        if diff != series.closed_form_difference(n) {
            fail(&mut report, n, SignFailureKind::DifferenceMismatch);
            break;
        }
        report.checked += 1;
        current = next;
    }
    Ok(report)
}

/// Ratio of the truncated numerator and denominator sums at `x`, using
/// `depth` terms of each.
pub fn truncated_series_eval(series: LemmaSeries, x: f64, depth: usize) -> Result<f64> {
    if depth < 2 {
        return Err(Error::Parameter(format!("series depth {depth} is below 2")));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Argument(x));
    }
    let s = x * x;
    let horner = |coeffs: &mut dyn DoubleEndedIterator<Item = (f64, f64)>| {
        coeffs.rev().fold((0.0, 0.0), |(num, den), (a, b)| (num * s + a, den * s + b))
    };
    let (num, den) = if depth <= F64_CACHE_DEPTH {
        horner(&mut series.f64_coefficients()[..depth].iter().copied())
    } else {
        let coeffs: Vec<(f64, f64)> = (0..depth).map(|n| series.normalized_f64_pair(n)).collect();
        horner(&mut coeffs.into_iter())
    };
    Ok(num / den)
}
