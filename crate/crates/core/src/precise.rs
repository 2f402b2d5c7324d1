//! High-precision evaluation backed by `astro-float`.
//!
//! Used for reference values: sharp constants to 30+ digits, and oracle
//! values for the `f64` code paths. Inputs arrive as `f64` and are converted
//! exactly; every operation then runs at [`PRECISION_BITS`].

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::means::MeanKind;

/// 256 bits, about 77 decimal digits.
pub const PRECISION_BITS: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

pub struct Precise {
    p: usize,
    cc: Consts,
}

impl Default for Precise {
    fn default() -> Self {
        Self::new()
    }
}

impl Precise {
    pub fn new() -> Self {
        Self::with_precision(PRECISION_BITS)
    }

    pub fn with_precision(bits: usize) -> Self {
        Self {
            p: bits,
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.div(&self.int(num), &self.int(den))
    }

    pub fn add(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.add(y, self.p, RM)
    }

    pub fn sub(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.sub(y, self.p, RM)
    }

    pub fn mul(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.mul(y, self.p, RM)
    }

    pub fn div(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.div(y, self.p, RM)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.p, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RM, &mut self.cc)
    }

    /// `x^y = exp(y ln x)` for `x > 0`.
    pub fn pow(&mut self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        // BigFloat::pow stalls for some bases just above 1
        let l = self.ln(x);
        self.exp(&self.mul(y, &l))
    }

    pub fn sinh(&mut self, x: &BigFloat) -> BigFloat {
        x.sinh(self.p, RM, &mut self.cc)
    }

    pub fn cosh(&mut self, x: &BigFloat) -> BigFloat {
        x.cosh(self.p, RM, &mut self.cc)
    }

    pub fn asinh(&mut self, x: &BigFloat) -> BigFloat {
        x.asinh(self.p, RM, &mut self.cc)
    }

    pub fn asin(&mut self, x: &BigFloat) -> BigFloat {
        x.asin(self.p, RM, &mut self.cc)
    }

    pub fn atan(&mut self, x: &BigFloat) -> BigFloat {
        x.atan(self.p, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn e(&mut self) -> BigFloat {
        self.cc.e(self.p, RM)
    }

    pub fn sqrt2(&self) -> BigFloat {
        self.sqrt(&self.int(2))
    }

    /// `ln(1 + sqrt 2) = asinh(1)`.
    pub fn ln_one_plus_sqrt2(&mut self) -> BigFloat {
        let x = self.add(&self.int(1), &self.sqrt2());
        self.ln(&x)
    }

    /// Nearest `f64`.
    pub fn to_f64(&self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        x.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Fixed-point decimal text with `digits` significant digits, rounded half up.
    pub fn to_digits(&self, x: &BigFloat, digits: usize) -> String {
        decimal_digits(&x.to_string(), digits)
    }

    /// [`Precise::mean`] rounded to the nearest `f64`.
    pub fn mean_f64(&mut self, kind: MeanKind, a: f64, b: f64) -> f64 {
        let m = self.mean(kind, a, b);
        self.to_f64(&m)
    }

    /// Mean evaluated straight from its defining formula.
    pub fn mean(&mut self, kind: MeanKind, a: f64, b: f64) -> BigFloat {
        let (x, y) = (self.from_f64(a), self.from_f64(b));
        if a == b {
            return x;
        }
        let sum = self.add(&x, &y);
        let diff = self.sub(&x, &y);
        let two = self.int(2);
        match kind {
            MeanKind::Arithmetic => self.div(&sum, &two),
            MeanKind::Geometric => self.sqrt(&self.mul(&x, &y)),
            MeanKind::Harmonic => self.div(&self.mul(&two, &self.mul(&x, &y)), &sum),
            MeanKind::Centroidal => {
                let q = self.add(&self.add(&self.mul(&x, &x), &self.mul(&x, &y)), &self.mul(&y, &y));
                self.div(&self.mul(&two, &q), &self.mul(&self.int(3), &sum))
            }
            MeanKind::ContraHarmonic => {
                self.div(&self.add(&self.mul(&x, &x), &self.mul(&y, &y)), &sum)
            }
            MeanKind::RootSquare => {
                let sq = self.add(&self.mul(&x, &x), &self.mul(&y, &y));
                self.sqrt(&self.div(&sq, &two))
            }
            MeanKind::FirstSeiffert => {
                // (a - b) / (4 atan(sqrt(a/b)) - pi)
                let r = self.sqrt(&self.div(&x, &y));
                let at = self.atan(&r);
                let pi = self.pi();
                let den = self.sub(&self.mul(&self.int(4), &at), &pi);
                self.div(&diff, &den)
            }
            MeanKind::SecondSeiffert => {
                let t = self.div(&diff, &sum);
                let at = self.atan(&t);
                self.div(&diff, &self.mul(&two, &at))
            }
            MeanKind::NeumanSandor => {
                let t = self.div(&diff, &sum);
                let ash = self.asinh(&t);
                self.div(&diff, &self.mul(&two, &ash))
            }
            MeanKind::GeneralizedLogarithmic(0.0) => {
                // (1/e) (b^b / a^a)^(1/(b-a))
                let lb = self.ln(&y);
                let la = self.ln(&x);
                let num = self.sub(&self.mul(&y, &lb), &self.mul(&x, &la));
                let expo = self.sub(&self.div(&num, &self.sub(&y, &x)), &self.int(1));
                self.exp(&expo)
            }
            MeanKind::GeneralizedLogarithmic(-1.0) => {
                let lb = self.ln(&y);
                let la = self.ln(&x);
                self.div(&self.sub(&y, &x), &self.sub(&lb, &la))
            }
            MeanKind::GeneralizedLogarithmic(p) => {
                let pp = self.from_f64(p);
                let q = self.add(&pp, &self.int(1));
                let yb = self.pow(&y, &q);
                let xa = self.pow(&x, &q);
                let num = self.sub(&yb, &xa);
                let den = self.mul(&q, &self.sub(&y, &x));
                let inv = self.div(&self.int(1), &pp);
                self.pow(&self.div(&num, &den), &inv)
            }
        }
    }
}

/// Turns astro-float's `d.ddd…e±x` rendering into fixed-point text with
/// `digits` significant digits.
fn decimal_digits(sci: &str, digits: usize) -> String {
    let (negative, body) = match sci.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, sci),
    };
    let (mantissa, exponent) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let mut raw: Vec<u8> = mantissa.bytes().filter(u8::is_ascii_digit).map(|d| d - b'0').collect();
    let mut exponent = exponent;
    while raw.first() == Some(&0) && raw.len() > 1 {
        raw.remove(0);
        exponent -= 1;
    }
    if raw.iter().all(|&d| d == 0) {
        return "0".into();
    }
    // round half up at `digits`
    let round_up = raw.get(digits).is_some_and(|&d| d >= 5);
    raw.truncate(digits);
    raw.resize(digits, 0);
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                raw.insert(0, 1);
                raw.pop();
                exponent += 1;
                break;
            }
            i -= 1;
            if raw[i] == 9 {
                raw[i] = 0;
            } else {
                raw[i] += 1;
                break;
            }
        }
    }
    let digits_str: String = raw.iter().map(|d| char::from(b'0' + d)).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exponent < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exponent - 1) as usize));
        out.push_str(&digits_str);
    } else {
        let int_len = exponent as usize + 1;
        if int_len >= digits_str.len() {
            out.push_str(&digits_str);
            out.extend(std::iter::repeat_n('0', int_len - digits_str.len()));
        } else {
            out.push_str(&digits_str[..int_len]);
            out.push('.');
            out.push_str(&digits_str[int_len..]);
        }
    }
    out
}
