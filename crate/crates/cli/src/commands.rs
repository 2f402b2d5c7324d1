use meanslab::catalog::{self, MarginStatus, ProbeReport, Side, VerificationReport};
use meanslab::means::{self, PositivePair};
use meanslab::ratio::{self, THETA_STAR};
use meanslab::report::{number, ReportRow};
use meanslab::series::{difference_sign_check, LemmaSeries};
use meanslab::{sharp_constants, Error, HFunction, Result};

use crate::Report;

/// Residual bound for the `p0` root.
const P0_TOLERANCE: f64 = 1e-11;

pub struct Config {
    pub seed: u64,
    pub samples: usize,
    pub depth: usize,
}

/// Rows plus an optional plain rendering used by the human format.
pub struct Printed {
    pub rows: Vec<ReportRow>,
    pub human: Option<String>,
}

pub struct Outcome {
    pub printed: Printed,
    pub pass: bool,
}

impl Outcome {
    fn rows(rows: Vec<ReportRow>) -> Self {
        let pass = rows.iter().all(|r| r.pass != Some(false));
        Outcome {
            printed: Printed { rows, human: None },
            pass,
        }
    }

    fn with_human(mut self, text: String) -> Self {
        self.printed.human = Some(text);
        self
    }
}

pub fn run(report: &Report, config: &Config) -> Result<Outcome> {
    match report {
        Report::Eval { mean, a, b } => eval(*mean, *a, *b),
        Report::Constants => Ok(constants()),
        Report::VerifyAll => verify_all(config),
        Report::Verify { record, a, b } => verify(record, a.zip(*b), config),
        Report::SeriesCheck => series_check(config.depth),
        Report::Scan { h, points, from, to } => scan(*h, *points as usize, *from, to.unwrap_or(THETA_STAR)),
        Report::Sharpness { record, epsilon } => sharpness(record.as_deref(), *epsilon),
        Report::P0 => p0(),
    }
}

fn eval(kind: means::MeanKind, a: f64, b: f64) -> Result<Outcome> {
    let value = means::evaluate(kind, PositivePair::new(a, b)?);
    let row = ReportRow::new(kind.to_string(), "mean")
        .input("a", number(a))
        .input("b", number(b))
        .values([value]);
    Ok(Outcome::rows(vec![row]).with_human(format!("{}\n", number(value))))
}

fn constants() -> Outcome {
    let rows = sharp_constants()
        .iter()
        .map(|c| {
            ReportRow::new(c.name.as_str(), "constant")
                .input("expr", &c.expr)
                .input("attained", c.attained)
                .input("digits", &c.digits)
                .values([c.value])
        })
        .collect();
    let width = sharp_constants().iter().map(|c| c.name.len()).max().unwrap_or(0);
    let human = sharp_constants()
        .iter()
        .map(|c| format!("{:<width$}  {:<33}  {}\n", c.name, c.digits, c.expr))
        .collect();
    Outcome::rows(rows).with_human(human)
}

fn pair_text((a, b): (f64, f64)) -> String {
    format!("({}, {})", number(a), number(b))
}

fn verification_row(report: &VerificationReport, seed: u64) -> ReportRow {
    let mut row = ReportRow::new(report.id.as_str(), catalog::find(&report.id).map_or("", |r| r.kind()))
        .input("samples", report.samples)
        .input("seed", seed)
        .input("skipped", report.skipped)
        .input("indeterminate", report.indeterminate)
        .input("violations", report.violations);
    if let Some(w) = report.lower_witness {
        row = row.input("lower_at", pair_text(w));
    }
    if let Some(w) = report.upper_witness {
        row = row.input("upper_at", pair_text(w));
    }
    row.margins(report.min_lower_margin.into_iter().chain(report.min_upper_margin))
        .pass(report.pass)
}

fn verify_all(config: &Config) -> Result<Outcome> {
    let reports = catalog::verify_all(config.samples, config.seed)?;
    Ok(Outcome::rows(reports.iter().map(|r| verification_row(r, config.seed)).collect()))
}

fn verify(id: &str, at: Option<(f64, f64)>, config: &Config) -> Result<Outcome> {
    let record = catalog::find(id)?;
    let Some((a, b)) = at else {
        let report = catalog::verify_random(record, config.samples, config.seed)?;
        return Ok(Outcome::rows(vec![verification_row(&report, config.seed)]));
    };
    let m = catalog::verify(record, PositivePair::new(a, b)?)?;
    let status = m.status();
    let row = ReportRow::new(record.id, record.kind())
        .input("a", number(a))
        .input("b", number(b))
        .input("status", format!("{status:?}").to_lowercase())
        .values([m.value])
        .margins(m.lower.into_iter().chain(m.upper))
        .pass(status != MarginStatus::Violated);
    Ok(Outcome::rows(vec![row]))
}

fn series_check(depth: usize) -> Result<Outcome> {
    let mut rows = Vec::new();
    for series in LemmaSeries::ALL {
        let report = difference_sign_check(series, depth)?;
        let mut row = ReportRow::new(series.to_string(), "series-check")
            .input("depth", depth)
            .input("checked", report.checked)
            .input("direction", format!("{:?}", series.expected_monotonicity()).to_lowercase())
            .input("first_difference", &report.first_difference);
        if let Some(f) = &report.first_failure {
            row = row.input("failure", format!("{:?} at n={}", f.kind, f.n));
        }
        rows.push(row.pass(report.passed()));
    }
    Ok(Outcome::rows(rows))
}

fn scan(h: u8, points: usize, from: f64, to: f64) -> Result<Outcome> {
    let which = HFunction::from_index(h).ok_or_else(|| Error::Parameter(format!("no function h{h}")))?;
    let rows = ratio::scan_points(which, from, to, points)?
        .into_iter()
        .map(|(theta, value)| ReportRow::new(which.to_string(), "scan").values([theta, value]))
        .collect();
    Ok(Outcome::rows(rows))
}

fn probe_rows(report: &ProbeReport) -> impl Iterator<Item = ReportRow> + '_ {
    report.witnesses.iter().map(move |w| {
        let side = match w.side {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        let mut row = ReportRow::new(report.id.as_str(), "sharpness")
            .input("constant", &w.constant)
            .input("side", side)
            .input("epsilon", number(report.epsilon))
            .input("tightened", number(w.tightened))
            .input("steps", w.steps);
        if let Some(p) = w.witness {
            row = row.input("witness", pair_text(p));
        }
        row.margins(w.margin).pass(w.witness.is_some())
    })
}

fn sharpness(id: Option<&str>, epsilon: f64) -> Result<Outcome> {
    let records: Vec<_> = match id {
        Some(id) => vec![catalog::find(id)?],
        None => catalog::catalog()
            .iter()
            .filter(|r| r.lower.is_some() || r.upper.is_some())
            .collect(),
    };
    let mut rows = Vec::new();
    for record in records {
        rows.extend(probe_rows(&catalog::sharpness_probe(record, epsilon)?));
    }
    Ok(Outcome::rows(rows))
}

fn p0() -> Result<Outcome> {
    let root = ratio::solve_p0()?;
    let residual = ratio::p0_residual(root);
    let pass = residual.abs() < P0_TOLERANCE;
    let row = ReportRow::new("p0", "root").values([root, residual]).pass(pass);
    Ok(Outcome::rows(vec![row]).with_human(format!("{}\nresidual {}\n", number(root), number(residual))))
}
