//! Sharp constants as exact expressions.
//!
//! Each constant is an expression over rationals, `sqrt 2`, `ln(1 + sqrt 2)`,
//! `e`, and the root `p0` of `(p + 1)^(1/p) = 2 ln(1 + sqrt 2)`. Values are
//! computed at 256 bits and cached.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::precise::Precise;
use crate::ratio;

/// Significant digits kept in [`SharpConstant::digits`].
pub const DISPLAY_DIGITS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Rational(i64, i64),
    Sqrt2,
    /// `ln(1 + sqrt 2)`
    LnOnePlusSqrt2,
    E,
    /// Root of `(p + 1)^(1/p) = 2 ln(1 + sqrt 2)` on `[1.5, 2.5]`.
    P0,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rational(n, 1)
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::Rational(n, d)
    }

    pub fn eval_f64(&self) -> f64 {
        match self {
            Expr::Rational(n, d) => *n as f64 / *d as f64,
            Expr::Sqrt2 => std::f64::consts::SQRT_2,
            Expr::LnOnePlusSqrt2 => ratio::THETA_STAR,
            Expr::E => std::f64::consts::E,
            Expr::P0 => ratio::solve_p0().unwrap_or(f64::NAN),
            Expr::Neg(x) => -x.eval_f64(),
            Expr::Add(x, y) => x.eval_f64() + y.eval_f64(),
            Expr::Sub(x, y) => x.eval_f64() - y.eval_f64(),
            Expr::Mul(x, y) => x.eval_f64() * y.eval_f64(),
            Expr::Div(x, y) => x.eval_f64() / y.eval_f64(),
        }
    }

    pub fn eval_precise(&self, hp: &mut Precise) -> BigFloat {
        match self {
            Expr::Rational(n, d) => hp.ratio(*n, *d),
            Expr::Sqrt2 => hp.sqrt2(),
            Expr::LnOnePlusSqrt2 => hp.ln_one_plus_sqrt2(),
            Expr::E => hp.e(),
            Expr::P0 => precise_p0(hp),
            Expr::Neg(x) => x.eval_precise(hp).neg(),
            Expr::Add(x, y) => {
                let (x, y) = (x.eval_precise(hp), y.eval_precise(hp));
                hp.add(&x, &y)
            }
            Expr::Sub(x, y) => {
                let (x, y) = (x.eval_precise(hp), y.eval_precise(hp));
                hp.sub(&x, &y)
            }
            Expr::Mul(x, y) => {
                let (x, y) = (x.eval_precise(hp), y.eval_precise(hp));
                hp.mul(&x, &y)
            }
            Expr::Div(x, y) => {
                let (x, y) = (x.eval_precise(hp), y.eval_precise(hp));
                hp.div(&x, &y)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Rational(_, d) if *d != 1 => 2,
            Expr::Rational(n, _) if *n < 0 => 3,
            _ => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Bisection for `p0` at the evaluator's precision.
fn precise_p0(hp: &mut Precise) -> BigFloat {
    let target = {
        let l = hp.ln_one_plus_sqrt2();
        hp.mul(&hp.int(2), &l)
    };
    let g = |hp: &mut Precise, p: &BigFloat| {
        let lp = hp.ln(&hp.add(&hp.int(1), p));
        let v = hp.exp(&hp.div(&lp, p));
        hp.sub(&v, &target)
    };
    let mut lo = hp.ratio(3, 2);
    let mut hi = hp.ratio(5, 2);
    let lo_positive = g(hp, &lo).is_positive();
    for _ in 0..hp.precision() {
        let mid = hp.div(&hp.add(&lo, &hi), &hp.int(2));
        if g(hp, &mid).is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hp.div(&hp.add(&lo, &hi), &hp.int(2))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(n, 1) => write!(f, "{n}"),
            Expr::Rational(n, d) => write!(f, "{n}/{d}"),
            Expr::Sqrt2 => f.write_str("sqrt(2)"),
            Expr::LnOnePlusSqrt2 => f.write_str("ln(1+sqrt(2))"),
            Expr::E => f.write_str("e"),
            Expr::P0 => f.write_str("p0"),
            Expr::Neg(x) => {
                f.write_str("-")?;
                x.fmt_operand(f, 3)
            }
            Expr::Add(x, y) => {
                x.fmt_operand(f, 1)?;
                f.write_str(" + ")?;
                y.fmt_operand(f, 2)
            }
            Expr::Sub(x, y) => {
                x.fmt_operand(f, 1)?;
                f.write_str(" - ")?;
                y.fmt_operand(f, 2)
            }
            Expr::Mul(x, y) => {
                x.fmt_operand(f, 2)?;
                f.write_str("*")?;
                y.fmt_operand(f, 3)
            }
            Expr::Div(x, y) => {
                x.fmt_operand(f, 2)?;
                f.write_str("/")?;
                y.fmt_operand(f, 3)
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Where the bounded quantity approaches a sharp constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// `a/b -> 1`, i.e. `t -> 0+`.
    NearEqual,
    /// `a/b -> infinity`, i.e. `t -> 1-`.
    Extreme,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::NearEqual => "near-equal",
            Endpoint::Extreme => "extreme",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpConstant {
    pub name: String,
    pub expr: Expr,
    pub attained: Endpoint,
    pub value: f64,
    /// The value to [`DISPLAY_DIGITS`] significant digits.
    pub digits: String,
}

fn theta() -> Expr {
    Expr::LnOnePlusSqrt2
}

fn build() -> Vec<SharpConstant> {
    use Endpoint::*;
    let one = || Expr::int(1);
    let inv_two_theta = || one() / (Expr::int(2) * theta());
    let sqrt2_theta = || Expr::Sqrt2 * theta();

    let defs: Vec<(&str, Expr, Endpoint)> = vec![
        ("ch-ratio.lower", inv_two_theta() - one(), Extreme),
        ("ch-ratio.upper", Expr::frac(-5, 12), NearEqual),
        ("c-additive-ch.lower", Expr::frac(5, 12), NearEqual),
        ("c-additive-ch.upper", one() - inv_two_theta(), Extreme),
        ("centroidal-additive-ch.lower", Expr::frac(1, 12), NearEqual),
        ("centroidal-additive-ch.upper", Expr::frac(2, 3) - inv_two_theta(), Extreme),
        ("m-over-ch.lower", inv_two_theta(), Extreme),
        ("centroidal-qm.lower", Expr::frac(1, 2), NearEqual),
        (
            "centroidal-qm.upper",
            (Expr::int(3) - Expr::int(4) * theta()) / (Expr::int(3) * (one() - sqrt2_theta())),
            Extreme,
        ),
        (
            "root-square-cm.lower",
            (sqrt2_theta() - one()) / (Expr::int(2) * theta() - one()),
            Extreme,
        ),
        ("root-square-cm.upper", Expr::frac(2, 5), NearEqual),
        (
            "neuman-qa.lower",
            (one() - theta()) / ((Expr::Sqrt2 - one()) * theta()),
            Extreme,
        ),
        ("neuman-qa.upper", Expr::frac(1, 3), NearEqual),
        ("neuman-ca.lower", (one() - theta()) / theta(), Extreme),
        ("neuman-ca.upper", Expr::frac(1, 6), NearEqual),
        ("zhao-hq.lower", one() - one() / sqrt2_theta(), Extreme),
        ("zhao-hq.upper", Expr::frac(2, 9), NearEqual),
        ("zhao-gq.lower", one() - one() / sqrt2_theta(), Extreme),
        ("zhao-gq.upper", Expr::frac(1, 3), NearEqual),
        ("zhao-hc.lower", Expr::frac(5, 12), NearEqual),
        ("zhao-hc.upper", one() - inv_two_theta(), Extreme),
        (
            "identric-iq.lower",
            Expr::E * (sqrt2_theta() - one())
                / ((Expr::Sqrt2 * Expr::E - Expr::int(2)) * theta()),
            Extreme,
        ),
        ("identric-iq.upper", Expr::frac(1, 2), NearEqual),
        ("lp-bracket.lower", Expr::P0, Extreme),
        ("lp-bracket.upper", Expr::int(2), NearEqual),
    ];

    let mut hp = Precise::new();
    defs.into_iter()
        .map(|(name, expr, attained)| {
            let v = expr.eval_precise(&mut hp);
            SharpConstant {
                name: name.to_string(),
                value: hp.to_f64(&v),
                digits: hp.to_digits(&v, DISPLAY_DIGITS),
                expr,
                attained,
            }
        })
        .collect()
}

/// Every sharp constant, computed once.
pub fn sharp_constants() -> &'static [SharpConstant] {
    static CONSTANTS: OnceLock<Vec<SharpConstant>> = OnceLock::new();
    CONSTANTS.get_or_init(build)
}

pub fn constant(name: &str) -> Result<&'static SharpConstant> {
    sharp_constants()
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::Parameter(format!("no sharp constant named `{name}`")))
}
