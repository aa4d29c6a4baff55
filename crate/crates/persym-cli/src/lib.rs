//! Orchestration and machine-readable reporting over [`persym_core`].
//!
//! Each command runs one capability of the core crate (census, closed-form
//! evaluation, verification sweep, polynomial-system count, coefficient
//! derivation) and returns a [`RunReport`]: the command echo, every computed
//! value as an exact decimal string, and every executed check with its exact
//! left/right sides. Censuses are split across worker threads by contiguous
//! index ranges and merged in a fixed order, so reports are identical for
//! any worker count.

use std::thread;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use persym_core::census::{census_partial, check_feasible, RankHistogram};
use persym_core::moments::{self, MomentReport};
use persym_core::{derive, forms, polysys, Result};

/// One named exact value; integers are decimal strings, never floats.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

/// One executed check: an exact left/right comparison with its outcome.
/// `n` and `k` identify the shape the check ran against, when it has one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

/// Complete record of one command invocation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kmax: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<u32>,
    pub workers: usize,
    pub elapsed_ms: u64,
    /// Stated premises the command relies on, spelled out for the reader.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub results: Vec<NamedValue>,
    pub checks: Vec<CheckLine>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            n: None,
            k: None,
            kmax: None,
            q: None,
            i: None,
            workers: 1,
            elapsed_ms: 0,
            notes: Vec::new(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// True when every executed check passed (and trivially for none).
    #[must_use]
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn value(&mut self, name: impl Into<String>, value: impl ToString) {
        self.results.push(NamedValue { name: name.into(), value: value.to_string() });
    }

    /// Renders the report as CSV. Census reports become `rank,count` rows,
    /// verify reports become the `check,n,k,pass,lhs,rhs` matrix, and every
    /// other command becomes generic `name,value` rows with one trailing
    /// `check: ...` row per executed check.
    #[must_use]
    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        match self.command.as_str() {
            "census" => {
                out.push_str("rank,count\n");
                for r in &self.results {
                    if let Some(rank) = r.name.strip_prefix("gamma_") {
                        out.push_str(&format!("{},{}\n", csv_field(rank), csv_field(&r.value)));
                    }
                }
            }
            "verify" => {
                out.push_str("check,n,k,pass,lhs,rhs\n");
                for c in &self.checks {
                    let n = c.n.map(|v| v.to_string()).unwrap_or_default();
                    let k = c.k.map(|v| v.to_string()).unwrap_or_default();
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        csv_field(&c.name),
                        n,
                        k,
                        c.pass,
                        csv_field(&c.lhs),
                        csv_field(&c.rhs),
                    ));
                }
            }
            _ => {
                out.push_str("name,value\n");
                for r in &self.results {
                    out.push_str(&format!("{},{}\n", csv_field(&r.name), csv_field(&r.value)));
                }
                for c in &self.checks {
                    let status = if c.pass { "pass" } else { "fail" };
                    out.push_str(&format!("check: {},{status}\n", csv_field(&c.name)));
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.into()
    }
}

/// Exact rationals print as plain decimals when integral, `p/q` otherwise.
fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn moment_check(name: impl Into<String>, m: &MomentReport) -> CheckLine {
    CheckLine {
        name: name.into(),
        n: Some(m.n),
        k: Some(m.k),
        pass: m.pass,
        lhs: rat_str(&m.lhs),
        rhs: rat_str(&m.rhs),
    }
}

/// The closed-form evaluator responsible for rank i of the (n, k) family.
fn formula_for(n: u32, i: u32, k: u32) -> Result<forms::FormulaValue> {
    match n {
        5 => forms::gamma_n5(i, k),
        4 => forms::gamma_n4(i, k),
        _ => forms::gamma_general(n, i, k),
    }
}

/// Highest rank line the closed forms cover for block count n.
fn top_line(n: u32) -> u32 {
    match n {
        5 => 10,
        4 => 8,
        _ => 5,
    }
}

/// Runs the census split across `workers` threads over contiguous index
/// ranges, merging the partial histograms in range order. The result is
/// bit-identical to a single-threaded run for any worker count.
pub fn census_parallel(n: u32, k: u32, workers: usize, force: bool) -> Result<RankHistogram> {
    let shape = check_feasible(n, k, force)?;
    let total = shape.param_count()?;
    let workers = (workers.clamp(1, 256) as u64).min(total);
    let per = total.div_ceil(workers);
    let ranges: Vec<(u64, u64)> =
        (0..workers).map(|w| ((w * per).min(total), ((w + 1) * per).min(total))).collect();
    let parts = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || census_partial(n, k, lo, hi)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect::<Result<Vec<RankHistogram>>>()
    })?;
    let mut parts = parts.into_iter();
    let mut merged = parts.next().expect("at least one worker range");
    for part in parts {
        merged.merge(&part)?;
    }
    Ok(merged)
}

/// Every identity and closed-form comparison applicable to one census.
fn attach_census_checks(report: &mut RunReport, hist: &RankHistogram) -> Result<()> {
    let (n, k) = (hist.n(), hist.k());
    report.checks.push(moment_check("first-moment identity", &moments::check_q1(hist)));
    report.checks.push(moment_check("second-moment identity", &moments::check_q2(hist)));
    if n == 5 {
        for m in moments::check_n5_moments(hist)? {
            report.checks.push(moment_check(format!("integer-weight sum of order {}", m.q), &m));
        }
    }
    for i in 0..=top_line(n) {
        let formula = formula_for(n, i, k)?;
        if !formula.valid {
            continue;
        }
        let count = BigInt::from(hist.count(i as usize));
        report.checks.push(CheckLine {
            name: format!("gamma_{i} closed form"),
            n: Some(n),
            k: Some(k),
            pass: count == formula.value,
            lhs: count.to_string(),
            rhs: formula.value.to_string(),
        });
    }
    Ok(())
}

/// Census of the (n, k) family with all applicable checks attached.
pub fn cmd_census(n: u32, k: u32, workers: usize, force: bool) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("census");
    report.n = Some(n);
    report.k = Some(k);
    report.workers = workers.max(1);
    let hist = census_parallel(n, k, workers, force)?;
    for (i, count) in hist.counts().iter().enumerate() {
        report.value(format!("gamma_{i}"), count);
    }
    report.value("total", hist.total());
    attach_census_checks(&mut report, &hist)?;
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Closed-form count of rank-i members of the (n, k) family, cross-checked
/// against every other evaluator that covers the same line.
pub fn cmd_formula(n: u32, i: u32, k: u32) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("formula");
    report.n = Some(n);
    report.i = Some(i);
    report.k = Some(k);
    let primary = formula_for(n, i, k)?;
    report.value("value", &primary.value);
    report.value("valid", primary.valid);
    report.value("source", primary.source);

    let mut cross = |name: &str, other: forms::FormulaValue| {
        report.checks.push(CheckLine {
            name: name.into(),
            n: Some(n),
            k: Some(k),
            pass: primary.value == other.value,
            lhs: primary.value.to_string(),
            rhs: other.value.to_string(),
        });
    };
    if (n == 4 || n == 5) && i <= 5 {
        cross("general evaluator agrees", forms::gamma_general(n, i, k)?);
    }
    if n == 5 && i == 10 {
        cross("product form agrees", forms::gamma10_product(k)?);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Census sweep over k = 1..=kmax with the full check matrix, plus a
/// per-line comparison of each formula's stated threshold against the
/// smallest k from which it actually agrees with the census.
pub fn cmd_verify(n: u32, kmax: u32, workers: usize, force: bool) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("verify");
    report.n = Some(n);
    report.kmax = Some(kmax);
    report.workers = workers.max(1);
    let mut censuses = Vec::new();
    for k in 1..=kmax {
        let hist = census_parallel(n, k, workers, force)?;
        attach_census_checks(&mut report, &hist)?;
        censuses.push(hist);
    }
    for i in 0..=top_line(n) {
        let stated = (1..=64u32).find(|&k| formula_for(n, i, k).is_ok_and(|f| f.valid));
        let mut agrees_from = None;
        for k in (1..=kmax).rev() {
            let formula = formula_for(n, i, k)?;
            let count = BigInt::from(censuses[(k - 1) as usize].count(i as usize));
            if count == formula.value {
                agrees_from = Some(k);
            } else {
                break;
            }
        }
        let render = |v: Option<u32>| v.map_or_else(|| "none".into(), |k| k.to_string());
        report.value(format!("gamma_{i} stated valid from k"), render(stated));
        report.value(format!("gamma_{i} agrees with census from k"), render(agrees_from));
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Number of solutions of the q-fold bilinear system at shape (n, k), by
/// direct enumeration, against the count the census predicts.
pub fn cmd_polycount(n: u32, k: u32, q: u32) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("polycount");
    report.n = Some(n);
    report.k = Some(k);
    report.q = Some(q);
    let counted = polysys::count_solutions(n, k, q)?;
    let hist = census_parallel(n, k, 1, false)?;
    let predicted = moments::predict_count(&hist, q)?;
    report.value("solution_count", &counted);
    report.value("census_prediction", &predicted);
    report.checks.push(CheckLine {
        name: "enumerated count equals census prediction".into(),
        n: Some(n),
        k: Some(k),
        pass: counted == predicted,
        lhs: counted.to_string(),
        rhs: predicted.to_string(),
    });
    if q == 1 {
        let closed = (BigUint::from(1u8) << (2 * n)) + (BigUint::from(1u8) << k) - 1u8;
        report.checks.push(CheckLine {
            name: "first-order count closed form".into(),
            n: Some(n),
            k: Some(k),
            pass: counted == closed,
            lhs: counted.to_string(),
            rhs: closed.to_string(),
        });
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Re-derives the eighteen unknown five-block coefficients and reports the
/// solved table together with the full audit trail.
pub fn cmd_derive() -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("derive");
    report.notes = derive::ASSUMPTIONS.iter().map(|s| (*s).into()).collect();
    let derivation = derive::derive_coefficients()?;
    let lines = derive::assemble_lines(&derivation.table)?;
    for (name, value) in derivation.table.entries() {
        report.value(name, value);
    }
    for check in &derivation.checks {
        report.checks.push(CheckLine {
            name: check.name.clone(),
            n: None,
            k: None,
            pass: check.pass,
            lhs: check.lhs.clone(),
            rhs: check.rhs.clone(),
        });
    }
    report.checks.push(CheckLine {
        name: "assembled lines equal the closed-form tables".into(),
        n: None,
        k: None,
        pass: true,
        lhs: lines.len().to_string(),
        rhs: "11".into(),
    });
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
