//! Catalog of inequalities with sampled verification and sharpness probes.
//!
//! Margins are computed from the relative excesses of [`crate::means`], so a
//! margin's absolute error is a few ulp of the *operands* (the mean
//! differences involved), not of the means themselves. Margins smaller than
//! `INDETERMINATE_ULPS` ulp of that operand scale are reported as
//! indeterminate rather than as violations.

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{constant, Endpoint, SharpConstant};
use crate::error::{Error, Result};
use crate::means::{self, MeanKind, PositivePair};

pub const INDETERMINATE_ULPS: f64 = 100.0;

/// Largest sampled ratio `a/b`.
pub const MAX_RATIO: f64 = 1e8;

/// Geometric refinement steps toward each endpoint in a sharpness probe.
pub const PROBE_STEPS: usize = 64;

pub const DEFAULT_PROBE_EPSILON: f64 = 1e-6;

/// Ky Fan samples stay this far inside `(0, 1/2)`.
const KY_FAN_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    /// `(inner - base) / (outer - base)` lies between the bounds, i.e.
    /// `inner` sits between two convex combinations of `outer` and `base`.
    ConvexCombination {
        outer: MeanKind,
        base: MeanKind,
        inner: MeanKind,
    },
    /// `lower * CH + base < target < upper * CH + base`; no base means zero.
    AdditiveCh {
        target: MeanKind,
        base: Option<MeanKind>,
    },
    /// `(minuend - subtrahend) / CH` lies between the bounds.
    RatioBound {
        minuend: MeanKind,
        subtrahend: MeanKind,
    },
    /// Strictly increasing list of means.
    Chain(Vec<MeanKind>),
    /// `X(a,b) / X(1-a,1-b)` strictly increasing along the list, for `0 < a, b < 1/2`.
    KyFan(Vec<MeanKind>),
    /// `A T < M^2 < (A^2 + T^2) / 2`.
    ProductBound,
    /// `L_lower < inner < L_upper` with the bounds as exponents `p`.
    LogarithmicBracket { inner: MeanKind },
}

impl Form {
    fn name(&self) -> &'static str {
        match self {
            Form::ConvexCombination { .. } => "convex-combination",
            Form::AdditiveCh { .. } => "additive-ch",
            Form::RatioBound { .. } => "ratio-bound",
            Form::Chain(_) => "chain",
            Form::KyFan(_) => "ky-fan",
            Form::ProductBound => "product-bound",
            Form::LogarithmicBracket { .. } => "logarithmic-bracket",
        }
    }

    /// Homogeneity degree of the margins, `None` when not homogeneous.
    pub fn margin_degree(&self) -> Option<i32> {
        match self {
            Form::RatioBound { .. } => Some(0),
            Form::ProductBound => Some(2),
            Form::KyFan(_) => None,
            _ => Some(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    AllPositive,
    /// `0 < a, b < 1/2`.
    KyFan,
}

#[derive(Debug, Clone)]
pub struct InequalityRecord {
    pub id: &'static str,
    pub form: Form,
    pub lower: Option<&'static SharpConstant>,
    pub upper: Option<&'static SharpConstant>,
    pub strict: bool,
    pub domain: Domain,
    pub domain_note: &'static str,
    pub source: &'static str,
    pub statement: &'static str,
}

impl InequalityRecord {
    pub fn kind(&self) -> &'static str {
        self.form.name()
    }

    pub fn constants(&self) -> impl Iterator<Item = &'static SharpConstant> {
        self.lower.into_iter().chain(self.upper)
    }

    pub fn contains(&self, pair: PositivePair) -> bool {
        match self.domain {
            Domain::AllPositive => true,
            Domain::KyFan => pair.a() < 0.5 && pair.b() < 0.5,
        }
    }
}

impl fmt::Display for InequalityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.statement)
    }
}

fn record(
    id: &'static str,
    form: Form,
    sharp: bool,
    lower_only: bool,
    source: &'static str,
    statement: &'static str,
) -> InequalityRecord {
    let lookup = |side: &str| {
        constant(&format!("{id}.{side}")).unwrap_or_else(|_| panic!("missing constant for {id}"))
    };
    InequalityRecord {
        id,
        lower: sharp.then(|| lookup("lower")),
        upper: (sharp && !lower_only).then(|| lookup("upper")),
        form,
        strict: true,
        domain: Domain::AllPositive,
        domain_note: "a, b > 0, a != b",
        source,
        statement,
    }
}

fn build() -> Vec<InequalityRecord> {
    use MeanKind::*;
    let convex = |outer, base, inner| Form::ConvexCombination { outer, base, inner };
    let mut records = vec![
        record(
            "neuman-qa",
            convex(RootSquare, Arithmetic, NeumanSandor),
            true,
            false,
            "Neuman",
            "aQ + (1-a)A < M < bQ + (1-b)A",
        ),
        record(
            "neuman-ca",
            convex(ContraHarmonic, Arithmetic, NeumanSandor),
            true,
            false,
            "Neuman",
            "lC + (1-l)A < M < mC + (1-m)A",
        ),
        record(
            "zhao-hq",
            convex(Harmonic, RootSquare, NeumanSandor),
            true,
            false,
            "Zhao, Chu and Liu",
            "a1 H + (1-a1)Q < M < b1 H + (1-b1)Q",
        ),
        record(
            "zhao-gq",
            convex(Geometric, RootSquare, NeumanSandor),
            true,
            false,
            "Zhao, Chu and Liu",
            "a2 G + (1-a2)Q < M < b2 G + (1-b2)Q",
        ),
        record(
            "zhao-hc",
            convex(Harmonic, ContraHarmonic, NeumanSandor),
            true,
            false,
            "Zhao, Chu and Liu",
            "a3 H + (1-a3)C < M < b3 H + (1-b3)C",
        ),
        record(
            "identric-iq",
            convex(MeanKind::IDENTRIC, RootSquare, NeumanSandor),
            true,
            false,
            "Zhao and Chu",
            "aI + (1-a)Q < M < bI + (1-b)Q",
        ),
        record(
            "ch-ratio",
            Form::RatioBound {
                minuend: NeumanSandor,
                subtrahend: ContraHarmonic,
            },
            true,
            false,
            "CH reduction",
            "a < (M - C)/CH < b",
        ),
        record(
            "c-additive-ch",
            Form::AdditiveCh {
                target: ContraHarmonic,
                base: Some(NeumanSandor),
            },
            true,
            false,
            "CH reduction",
            "a CH + M < C < b CH + M",
        ),
        record(
            "centroidal-additive-ch",
            Form::AdditiveCh {
                target: Centroidal,
                base: Some(NeumanSandor),
            },
            true,
            false,
            "CH reduction",
            "a CH + M < Cbar < b CH + M",
        ),
        record(
            "m-over-ch",
            Form::AdditiveCh {
                target: NeumanSandor,
                base: None,
            },
            true,
            true,
            "new bound",
            "M > l CH",
        ),
        record(
            "centroidal-qm",
            convex(RootSquare, NeumanSandor, Centroidal),
            true,
            false,
            "new bound",
            "aQ + (1-a)M < Cbar < bQ + (1-b)M",
        ),
        record(
            "root-square-cm",
            convex(ContraHarmonic, NeumanSandor, RootSquare),
            true,
            false,
            "new bound",
            "aC + (1-a)M < Q < bC + (1-b)M",
        ),
        record(
            "chain",
            Form::Chain(vec![
                Geometric,
                MeanKind::LOGARITHMIC,
                FirstSeiffert,
                Arithmetic,
                NeumanSandor,
                SecondSeiffert,
                RootSquare,
            ]),
            false,
            false,
            "Neuman and Sandor",
            "G < L_-1 < P < A < M < T < Q",
        ),
        record(
            "lp-bracket",
            Form::LogarithmicBracket {
                inner: NeumanSandor,
            },
            true,
            false,
            "generalized logarithmic bracket",
            "L_p0 < M < L_2",
        ),
        record(
            "a-m-t",
            Form::Chain(vec![Arithmetic, NeumanSandor, SecondSeiffert]),
            false,
            false,
            "Neuman and Sandor",
            "A < M < T",
        ),
        record(
            "product",
            Form::ProductBound,
            false,
            false,
            "Neuman and Sandor",
            "A T < M^2 < (A^2 + T^2)/2",
        ),
    ];
    let mut ky_fan = record(
        "ky-fan",
        Form::KyFan(vec![
            Geometric,
            MeanKind::LOGARITHMIC,
            FirstSeiffert,
            Arithmetic,
            NeumanSandor,
            SecondSeiffert,
        ]),
        false,
        false,
        "Neuman and Sandor",
        "G/G' < L_-1/L_-1' < P/P' < A/A' < M/M' < T/T', X' = X(1-a, 1-b)",
    );
    ky_fan.domain = Domain::KyFan;
    ky_fan.domain_note = "0 < a, b < 1/2, a != b";
    records.push(ky_fan);
    records
}

/// All catalog records.
pub fn catalog() -> &'static [InequalityRecord] {
    static CATALOG: OnceLock<Vec<InequalityRecord>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

pub fn find(id: &str) -> Result<&'static InequalityRecord> {
    catalog()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownRecord(id.to_string()))
}

/// Classification of one margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MarginStatus {
    Positive,
    /// Within `INDETERMINATE_ULPS` ulp of the operand scale.
    Indeterminate,
    Violated,
}

/// The two sides of a record evaluated at one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    /// The bounded quantity (ratio, mean, or smallest gap).
    pub value: f64,
    /// `value - lower bound`, or the smallest gap for chains.
    pub lower: Option<f64>,
    /// `upper bound - value`.
    pub upper: Option<f64>,
    /// Magnitude of the operands the margins were computed from.
    pub scale: f64,
}

impl Margins {
    pub fn classify(&self, margin: f64) -> MarginStatus {
        let threshold = INDETERMINATE_ULPS * f64::EPSILON * self.scale;
        if margin > threshold {
            MarginStatus::Positive
        } else if margin >= -threshold {
            MarginStatus::Indeterminate
        } else {
            MarginStatus::Violated
        }
    }

    /// Worst status over both sides.
    pub fn status(&self) -> MarginStatus {
        let mut worst = MarginStatus::Positive;
        for m in self.lower.into_iter().chain(self.upper) {
            match self.classify(m) {
                MarginStatus::Violated => return MarginStatus::Violated,
                MarginStatus::Indeterminate => worst = MarginStatus::Indeterminate,
                MarginStatus::Positive => {}
            }
        }
        worst
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Margins of `record` at `pair` with the given bound values.
fn margins_with(record: &InequalityRecord, pair: PositivePair, lo: Option<f64>, hi: Option<f64>) -> Margins {
    let a = pair.arithmetic();
    let ex = |k| means::excess(k, pair);
    match &record.form {
        Form::ConvexCombination { outer, base, inner } => {
            let (dx, dy, di) = (ex(*outer), ex(*base), ex(*inner));
            let d = a * (dx - dy);
            let n = a * (di - dy);
            let sign = d.signum();
            Margins {
                value: n / d,
                lower: lo.map(|lo| sign * (n - lo * d)),
                upper: hi.map(|hi| sign * (hi * d - n)),
                scale: a * max_abs(&[dx, dy, di]),
            }
        }
        Form::AdditiveCh { target, base } => {
            let ch = means::ch_difference(pair);
            let (diff, scale) = match base {
                Some(base) => {
                    let (dt, db) = (ex(*target), ex(*base));
                    (a * (dt - db), a * max_abs(&[dt, db]))
                }
                None => {
                    let v = means::evaluate(*target, pair);
                    (v, v)
                }
            };
            Margins {
                value: diff / ch,
                lower: lo.map(|lo| diff - lo * ch),
                upper: hi.map(|hi| hi * ch - diff),
                scale: scale.max(ch),
            }
        }
        Form::RatioBound { minuend, subtrahend } => {
            let ch = means::ch_difference(pair);
            let (dm, ds) = (ex(*minuend), ex(*subtrahend));
            let r = a * (dm - ds) / ch;
            Margins {
                value: r,
                lower: lo.map(|lo| r - lo),
                upper: hi.map(|hi| hi - r),
                scale: a * max_abs(&[dm, ds]) / ch,
            }
        }
        Form::Chain(kinds) => {
            let excess: Vec<f64> = kinds.iter().map(|&k| ex(k)).collect();
            let gap = excess
                .windows(2)
                .map(|w| a * (w[1] - w[0]))
                .fold(f64::INFINITY, f64::min);
            Margins {
                value: gap,
                lower: Some(gap),
                upper: None,
                scale: a * max_abs(&excess),
            }
        }
        Form::KyFan(kinds) => {
            let complement = PositivePair::new(1.0 - pair.a(), 1.0 - pair.b())
                .expect("complement of a pair in (0, 1/2) is positive");
            let ratio_a = a / complement.arithmetic();
            let here: Vec<f64> = kinds.iter().map(|&k| ex(k)).collect();
            let there: Vec<f64> = kinds.iter().map(|&k| means::excess(k, complement)).collect();
            let mut gap = f64::INFINITY;
            for i in 0..kinds.len() - 1 {
                let (x, y, xc, yc) = (here[i], here[i + 1], there[i], there[i + 1]);
                let num = (y - x) + (xc - yc) + y * xc - x * yc;
                gap = gap.min(ratio_a * num / ((1.0 + xc) * (1.0 + yc)));
            }
            Margins {
                value: gap,
                lower: Some(gap),
                upper: None,
                scale: ratio_a * max_abs(&here).max(max_abs(&there)),
            }
        }
        Form::ProductBound => {
            let dm = ex(MeanKind::NeumanSandor);
            let dt = ex(MeanKind::SecondSeiffert);
            let a2 = a * a;
            let m = means::neuman_sandor(pair);
            Margins {
                value: m * m,
                lower: Some(a2 * (2.0 * dm + dm * dm - dt)),
                upper: Some(a2 * (dt + 0.5 * dt * dt - 2.0 * dm - dm * dm)),
                scale: a2 * max_abs(&[dm, dt]),
            }
        }
        Form::LogarithmicBracket { inner } => {
            let di = ex(*inner);
            let dlo = lo.map(|p| ex(MeanKind::GeneralizedLogarithmic(p)));
            let dhi = hi.map(|p| ex(MeanKind::GeneralizedLogarithmic(p)));
            let mut operands = vec![di];
            operands.extend(dlo);
            operands.extend(dhi);
            Margins {
                value: means::evaluate(*inner, pair),
                lower: dlo.map(|d| a * (di - d)),
                upper: dhi.map(|d| a * (d - di)),
                scale: a * max_abs(&operands),
            }
        }
    }
}

fn check_pair(record: &InequalityRecord, pair: PositivePair) -> Result<()> {
    if pair.is_degenerate() {
        return Err(Error::Degenerate {
            a: pair.a(),
            b: pair.b(),
        });
    }
    if !record.contains(pair) {
        return Err(Error::OutsideDomain(record.id.to_string()));
    }
    Ok(())
}

/// Evaluates `record` at `pair`. Both margins must be positive for the
/// inequality to hold there.
pub fn verify(record: &InequalityRecord, pair: PositivePair) -> Result<Margins> {
    check_pair(record, pair)?;
    Ok(margins_with(
        record,
        pair,
        record.lower.map(|c| c.value),
        record.upper.map(|c| c.value),
    ))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The `index`-th sampled pair for `record` under `seed`.
///
/// Pairs over all positives have `a/b` log-uniform in `(1, MAX_RATIO]`,
/// rescaled by a log-uniform factor in `[1e-6, 1e6)`. Ky Fan pairs are
/// uniform inside `(0, 1/2)`.
pub fn sample_pair(record: &InequalityRecord, seed: u64, index: u64) -> Result<PositivePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)));
    match record.domain {
        Domain::AllPositive => {
            let u: f64 = 1.0 - rng.gen::<f64>();
            let ratio = (u * MAX_RATIO.ln()).exp();
            let scale = 10f64.powf(rng.gen_range(-6.0..6.0));
            PositivePair::new(ratio * scale, scale)
        }
        Domain::KyFan => {
            let range = KY_FAN_GUARD..0.5 - KY_FAN_GUARD;
            let a = rng.gen_range(range.clone());
            let b = rng.gen_range(range);
            PositivePair::new(a, b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub samples: usize,
    /// Degenerate draws that were not evaluated.
    pub skipped: usize,
    pub indeterminate: usize,
    pub violations: usize,
    pub min_lower_margin: Option<f64>,
    pub lower_witness: Option<(f64, f64)>,
    pub min_upper_margin: Option<f64>,
    pub upper_witness: Option<(f64, f64)>,
    pub pass: bool,
}

#[derive(Clone, Copy)]
struct Extreme {
    margin: f64,
    index: u64,
    pair: (f64, f64),
}

impl Extreme {
    fn better(a: Option<Extreme>, b: Option<Extreme>) -> Option<Extreme> {
        match (a, b) {
            (Some(x), Some(y)) => {
                if (y.margin, y.index) < (x.margin, x.index) {
                    Some(y)
                } else {
                    Some(x)
                }
            }
            (x, None) => x,
            (None, y) => y,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    skipped: usize,
    indeterminate: usize,
    violations: usize,
    lower: Option<Extreme>,
    upper: Option<Extreme>,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            skipped: self.skipped + other.skipped,
            indeterminate: self.indeterminate + other.indeterminate,
            violations: self.violations + other.violations,
            lower: Extreme::better(self.lower, other.lower),
            upper: Extreme::better(self.upper, other.upper),
        }
    }
}

/// Samples `count` seeded pairs and aggregates margins. The result does not
/// depend on thread scheduling.
pub fn verify_random(record: &InequalityRecord, count: usize, seed: u64) -> Result<VerificationReport> {
    if count == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let tally = (0..count as u64)
        .into_par_iter()
        .map(|index| {
            let mut tally = Tally::default();
            let margins = sample_pair(record, seed, index).and_then(|pair| {
                verify(record, pair).map(|m| (pair, m))
            });
            let (pair, margins) = match margins {
                Ok(v) => v,
                Err(_) => {
                    tally.skipped = 1;
                    return tally;
                }
            };
            match margins.status() {
                MarginStatus::Violated => tally.violations = 1,
                MarginStatus::Indeterminate => tally.indeterminate = 1,
                MarginStatus::Positive => {}
            }
            let point = |margin| Extreme {
                margin,
                index,
                pair: (pair.a(), pair.b()),
            };
            tally.lower = margins.lower.map(point);
            tally.upper = margins.upper.map(point);
            tally
        })
        .reduce(Tally::default, Tally::merge);

    Ok(VerificationReport {
        id: record.id.to_string(),
        samples: count,
        skipped: tally.skipped,
        indeterminate: tally.indeterminate,
        violations: tally.violations,
        min_lower_margin: tally.lower.map(|e| e.margin),
        lower_witness: tally.lower.map(|e| e.pair),
        min_upper_margin: tally.upper.map(|e| e.margin),
        upper_witness: tally.upper.map(|e| e.pair),
        pass: tally.violations == 0 && tally.skipped < count,
    })
}

/// Runs [`verify_random`] over the whole catalog.
pub fn verify_all(count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    catalog().iter().map(|r| verify_random(r, count, seed)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeWitness {
    pub constant: String,
    pub side: Side,
    pub tightened: f64,
    /// First pair found violating the tightened inequality.
    pub witness: Option<(f64, f64)>,
    /// Margin of the tightened inequality at the witness.
    pub margin: Option<f64>,
    /// Refinement steps taken.
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub id: String,
    pub epsilon: f64,
    pub witnesses: Vec<ProbeWitness>,
}

impl ProbeReport {
    pub fn found(&self) -> bool {
        self.witnesses.iter().all(|w| w.witness.is_some())
    }
}

/// Pair `k` (1-based) of the geometric walk toward `end`.
fn probe_pair(end: Endpoint, k: usize) -> PositivePair {
    let exponent = 15.0 * k as f64 / PROBE_STEPS as f64;
    let pair = match end {
        Endpoint::NearEqual => PositivePair::new(1.0 + 10f64.powf(-exponent), 1.0),
        Endpoint::Extreme => PositivePair::new(10f64.powf(exponent), 1.0),
    };
    pair.expect("probe pairs are positive")
}

/// Tightens each sharp constant of `record` by `epsilon` and walks toward the
/// endpoint where it is attained until the tightened inequality fails.
pub fn sharpness_probe(record: &InequalityRecord, epsilon: f64) -> Result<ProbeReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!("probe epsilon {epsilon} must be positive")));
    }
    if record.lower.is_none() && record.upper.is_none() {
        return Err(Error::NotSharp(record.id.to_string()));
    }
    let mut witnesses = Vec::new();
    let sides = [(Side::Lower, record.lower), (Side::Upper, record.upper)];
    for (side, c) in sides {
        let Some(c) = c else { continue };
        let tightened = match side {
            Side::Lower => c.value + epsilon,
            Side::Upper => c.value - epsilon,
        };
        let mut found = ProbeWitness {
            constant: c.name.clone(),
            side,
            tightened,
            witness: None,
            margin: None,
            steps: 0,
        };
        for k in 1..=PROBE_STEPS {
            let pair = probe_pair(c.attained, k);
            if check_pair(record, pair).is_err() {
                continue;
            }
            found.steps = k;
            let m = match side {
                Side::Lower => margins_with(record, pair, Some(tightened), None),
                Side::Upper => margins_with(record, pair, None, Some(tightened)),
            };
            let margin = match side {
                Side::Lower => m.lower,
                Side::Upper => m.upper,
            }
            .expect("tightened side is present");
            if m.classify(margin) == MarginStatus::Violated {
                found.witness = Some((pair.a(), pair.b()));
                found.margin = Some(margin);
                break;
            }
        }
        witnesses.push(found);
    }
    Ok(ProbeReport {
        id: record.id.to_string(),
        epsilon,
        witnesses,
    })
}
