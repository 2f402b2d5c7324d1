//! The functions `h1`, `h2`, `h3` and the substitution that reduces mean
//! ratios to them.
//!
//! For `a > b > 0` put `t = (a - b) / (a + b)` and `t = sinh(theta)`, so that
//! `theta` ranges over `(0, ln(1 + sqrt 2))`. Then
//!
//! ```text
//! (M - C) / CH       = h1(theta) - 1/2
//! (Cbar - M) / (Q - M) = h2(theta)
//! (Q - M) / (C - M)    = h3(theta)
//! M / CH             = 1 / (2 t asinh t)
//! ```
//!
//! and every sharp constant is an endpoint value of one of these functions.

use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::{self, MeanKind, PositivePair};
use crate::precise::Precise;
use crate::series::{self, LemmaSeries, Monotonicity};

/// `ln(1 + sqrt 2) = asinh(1)`, the right end of the substituted range.
pub const THETA_STAR: f64 = 0.881_373_587_019_543;

/// Below this `theta`, `h` is evaluated from the truncated coefficient series.
pub const SERIES_THETA: f64 = 1e-3;

const SMALL_THETA_DEPTH: usize = 8;

/// Right end of the second monotonicity scan range.
pub const SCAN_UPPER: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HFunction {
    series: LemmaSeries,
}

impl HFunction {
    pub const H1: HFunction = HFunction { series: LemmaSeries::H1 };
    pub const H2: HFunction = HFunction { series: LemmaSeries::H2 };
    pub const H3: HFunction = HFunction { series: LemmaSeries::H3 };
    pub const ALL: [HFunction; 3] = [Self::H1, Self::H2, Self::H3];

    /// `1`, `2` or `3`.
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::H1),
            2 => Some(Self::H2),
            3 => Some(Self::H3),
            _ => None,
        }
    }

    pub fn series(&self) -> LemmaSeries {
        self.series
    }

    pub fn direction(&self) -> Monotonicity {
        self.series.expected_monotonicity()
    }

    pub fn limit_zero(&self) -> BigRational {
        self.series.limit_at_zero()
    }

    pub fn limit_zero_f64(&self) -> f64 {
        self.limit_zero().to_f64().unwrap_or(f64::NAN)
    }

    /// The textbook closed form, evaluated naively. Inaccurate for small `theta`.
    pub fn closed_form(&self, theta: f64) -> f64 {
        let (sh, ch) = (theta.sinh(), theta.cosh());
        let r = sh / theta;
        match self.series {
            LemmaSeries::H1 => (sh - theta) / (2.0 * theta * sh * sh),
            LemmaSeries::H2 => (1.0 - r + sh * sh / 3.0) / (ch - r),
            LemmaSeries::H3 => (ch - r) / (1.0 + sh * sh - r),
        }
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        h_eval(*self, theta)
    }

    /// `h(theta)` at high precision, straight from the closed form.
    pub fn precise(&self, hp: &mut Precise, theta: &BigFloat) -> BigFloat {
        let sh = hp.sinh(theta);
        let ch = hp.cosh(theta);
        let one = hp.int(1);
        let r = hp.div(&sh, theta);
        let sh2 = hp.mul(&sh, &sh);
        match self.series {
            LemmaSeries::H1 => {
                let den = hp.mul(&hp.mul(&hp.int(2), theta), &sh2);
                hp.div(&hp.sub(&sh, theta), &den)
            }
            LemmaSeries::H2 => {
                let num = hp.add(&hp.sub(&one, &r), &hp.div(&sh2, &hp.int(3)));
                hp.div(&num, &hp.sub(&ch, &r))
            }
            LemmaSeries::H3 => {
                let den = hp.sub(&hp.add(&one, &sh2), &r);
                hp.div(&hp.sub(&ch, &r), &den)
            }
        }
    }

    /// `h(ln(1 + sqrt 2))` at high precision.
    pub fn endpoint_value(&self, hp: &mut Precise) -> BigFloat {
        let theta = hp.ln_one_plus_sqrt2();
        self.precise(hp, &theta)
    }
}

impl std::fmt::Display for HFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.series.fmt(f)
    }
}

/// `sinh(theta) - theta`, summed as a series below 1.
fn sinh_minus_identity(theta: f64) -> f64 {
    if theta >= 1.0 {
        return theta.sinh() - theta;
    }
    let s = theta * theta;
    let mut term = theta * s / 6.0;
    let mut sum = 0.0;
    let mut k = 3.0;
    while term > 1e-18 * sum || sum == 0.0 {
        sum += term;
        term *= s / ((k + 1.0) * (k + 2.0));
        k += 2.0;
        if term == 0.0 {
            break;
        }
    }
    sum
}

/// Evaluates `h(theta)` for `theta >= 0`; `theta = 0` gives the limit.
pub fn h_eval(which: HFunction, theta: f64) -> Result<f64> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::Argument(theta));
    }
    if theta == 0.0 {
        return Ok(which.limit_zero_f64());
    }
    if theta < SERIES_THETA {
        return series::truncated_series_eval(which.series, theta, SMALL_THETA_DEPTH);
    }
    let sh = theta.sinh();
    let sh2 = sh * sh;
    let half = (0.5 * theta).sinh();
    let cosh_m1 = 2.0 * half * half;
    let sinh_m = sinh_minus_identity(theta);
    // sinh(theta)/theta - 1
    let r1 = sinh_m / theta;
    let value = match which.series {
        LemmaSeries::H1 => sinh_m / (2.0 * theta * sh2),
        LemmaSeries::H2 => (sh2 / 3.0 - r1) / (cosh_m1 - r1),
        LemmaSeries::H3 => (cosh_m1 - r1) / (sh2 - r1),
    };
    Ok(value)
}

/// `theta = asinh(|a - b| / (a + b))`.
pub fn substitution_theta(pair: PositivePair) -> Result<f64> {
    if pair.is_degenerate() {
        return Err(Error::Degenerate {
            a: pair.a(),
            b: pair.b(),
        });
    }
    Ok(pair.asymmetry().asinh())
}

/// `1 / (2 t asinh t)`, the reduced form of `M / CH`.
pub fn ch_kernel(t: f64) -> f64 {
    1.0 / (2.0 * t * t.asinh())
}

/// The four mean ratios and their relative distance from the `h` side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub theta: f64,
    /// `(M - C) / CH`, `(Cbar - M) / (Q - M)`, `(Q - M) / (C - M)`, `M / CH`.
    pub ratios: [f64; 4],
    /// Relative residuals against `h1 - 1/2`, `h2`, `h3`, `1 / (2 t asinh t)`.
    pub residuals: [f64; 4],
}

impl IdentityResiduals {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Compares the mean-side ratios with their reduced forms.
///
/// The mean side uses [`means::difference`], so mean differences carry no
/// cancellation error. The `h` side only sees `theta`.
pub fn identity_residuals(pair: PositivePair) -> Result<IdentityResiduals> {
    use MeanKind::*;
    let theta = substitution_theta(pair)?;
    let ch = means::ch_difference(pair);
    let diff = |x, y| means::difference(x, y, pair);

    let ratios = [
        diff(NeumanSandor, ContraHarmonic) / ch,
        diff(Centroidal, NeumanSandor) / diff(RootSquare, NeumanSandor),
        diff(RootSquare, NeumanSandor) / diff(ContraHarmonic, NeumanSandor),
        means::neuman_sandor(pair) / ch,
    ];
    let reduced = [
        h_eval(HFunction::H1, theta)? - 0.5,
        h_eval(HFunction::H2, theta)?,
        h_eval(HFunction::H3, theta)?,
        ch_kernel(theta.sinh()),
    ];
    let mut residuals = [0.0; 4];
    for i in 0..4 {
        residuals[i] = ((ratios[i] - reduced[i]) / reduced[i]).abs();
    }
    Ok(IdentityResiduals {
        theta,
        ratios,
        residuals,
    })
}

/// Result of a grid monotonicity scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanVerdict {
    pub function: HFunction,
    pub grid: usize,
    /// Smallest step in the expected direction across both ranges.
    pub min_gap: f64,
    /// First `theta` at which the expected direction failed.
    pub violation: Option<f64>,
}

impl ScanVerdict {
    pub fn strict(&self) -> bool {
        self.violation.is_none() && self.min_gap > 0.0
    }
}

/// Scans `h` on `grid` uniform points over `[theta*/grid, theta*]` and over
/// `[theta*, SCAN_UPPER]`, requiring strict monotonicity between neighbours.
pub fn monotonicity_scan(which: HFunction, grid: usize) -> Result<ScanVerdict> {
    if grid < 2 {
        return Err(Error::Parameter(format!("scan grid {grid} is below 2")));
    }
    let sign = match which.direction() {
        Monotonicity::Increasing => 1.0,
        Monotonicity::Decreasing => -1.0,
    };
    let mut min_gap = f64::INFINITY;
    let mut violation = None;
    let ranges = [(THETA_STAR / grid as f64, THETA_STAR), (THETA_STAR, SCAN_UPPER)];
    for (lo, hi) in ranges {
        let step = (hi - lo) / (grid - 1) as f64;
        let mut prev = h_eval(which, lo)?;
        for i in 1..grid {
            let theta = if i == grid - 1 { hi } else { lo + step * i as f64 };
            let value = h_eval(which, theta)?;
            let gap = sign * (value - prev);
            min_gap = min_gap.min(gap);
            if gap <= 0.0 && violation.is_none() {
                violation = Some(theta);
            }
            prev = value;
        }
    }
    Ok(ScanVerdict {
        function: which,
        grid,
        min_gap,
        violation,
    })
}

/// `(theta, h(theta))` on `points` uniform points over `(from, to]`.
pub fn scan_points(which: HFunction, from: f64, to: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points == 0 || !(from >= 0.0 && to > from) {
        return Err(Error::Parameter(format!(
            "scan range ({from}, {to}] with {points} points"
        )));
    }
    let step = (to - from) / points as f64;
    (1..=points)
        .map(|i| {
            let theta = if i == points { to } else { from + step * i as f64 };
            h_eval(which, theta).map(|h| (theta, h))
        })
        .collect()
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `g(p) = (p + 1)^(1/p) - 2 ln(1 + sqrt 2)`.
pub fn p0_residual(p: f64) -> f64 {
    (p.ln_1p() / p).exp() - 2.0 * THETA_STAR
}

/// The unique root `p0` of [`p0_residual`] in `[1.5, 2.5]`.
pub fn solve_p0() -> Result<f64> {
    bisect(p0_residual, 1.5, 2.5, 1e-12)
}
