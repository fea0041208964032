//! Runs benchmark instances under a symmetry-breaking configuration and
//! compares the counts with the embedded expectations.

use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{CanonAxis, ClassCounter, DEFAULT_ROW_LIMIT};
use crate::error::{Error, Result};
use crate::problems::ProblemSpec;
use crate::search::{solve_all, Limits, SearchConfig, VarOrder};
use crate::symbreak::SymBreakConfig;

const EXPECTED: &str = include_str!("../data/expected.csv");

/// Default per-row limits: ten minutes and ten million solutions.
pub const DEFAULT_LIMITS: Limits = Limits { max_solutions: Some(10_000_000), time_budget: Some(Duration::from_secs(600)) };

/// One line of results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub problem: String,
    pub params: String,
    pub sb: String,
    pub solutions: u64,
    pub classes: Option<u64>,
    pub failures: u64,
    pub elapsed_ms: u64,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Count symmetry classes among the solutions found.
    pub classify: bool,
    pub limits: Limits,
    /// Overrides the configuration's own branching order.
    pub var_order: Option<VarOrder>,
    pub row_limit: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { classify: false, limits: DEFAULT_LIMITS, var_order: None, row_limit: DEFAULT_ROW_LIMIT }
    }
}

/// Builds `problem`, posts `sb`, enumerates and optionally classifies.
pub fn run_experiment(problem: &ProblemSpec, sb: &SymBreakConfig, opts: &RunOptions) -> Result<ExperimentRow> {
    let mut model = problem.build()?;
    sb.apply(&mut model)?;
    let config = SearchConfig::new(opts.var_order.unwrap_or(sb.var_order())).with_limits(opts.limits);
    let mut counter = opts.classify.then(|| ClassCounter::new(CanonAxis::Auto, opts.row_limit));
    let mut class_error = None;
    let stats = solve_all(&model, &config, |m| {
        if let Some(c) = counter.as_mut() {
            if let Err(e) = c.push(m.clone()) {
                class_error.get_or_insert(e);
            }
        }
    });
    if let Some(e) = class_error {
        return Err(e);
    }
    let classes = counter.map(ClassCounter::finish).transpose()?.map(|(_, c)| c as u64);
    Ok(ExperimentRow {
        problem: problem.name().to_string(),
        params: problem.params(),
        sb: sb.to_string(),
        solutions: stats.n_solutions,
        classes,
        failures: stats.n_failures,
        elapsed_ms: stats.elapsed.as_millis() as u64,
        complete: stats.complete,
    })
}

/// An expected count.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct Expectation {
    pub table: u8,
    pub problem: String,
    pub sb: String,
    pub solutions: Option<u64>,
    pub classes: Option<u64>,
    /// 1: seconds, 2: minutes, 3: long.
    pub scale: u8,
}

pub fn expectations() -> Result<Vec<Expectation>> {
    csv::Reader::from_reader(EXPECTED.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<Expectation>, _>>()
        .map_err(|e| Error::parse(format!("expected-count table: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Limits fired before the search finished.
    Incomplete,
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Incomplete => "INCOMPLETE",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteRow {
    pub expected: Expectation,
    pub row: Option<ExperimentRow>,
    pub error: Option<String>,
    pub verdict: Verdict,
}

fn judge(exp: &Expectation, row: &ExperimentRow) -> Verdict {
    if !row.complete {
        return Verdict::Incomplete;
    }
    let sols_ok = exp.solutions.is_none_or(|s| s == row.solutions);
    let classes_ok = exp.classes.is_none_or(|c| row.classes == Some(c));
    if sols_ok && classes_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn run_expectation(exp: &Expectation, opts: &RunOptions) -> SuiteRow {
    let run = || -> Result<ExperimentRow> {
        let problem: ProblemSpec = exp.problem.parse()?;
        let sb: SymBreakConfig = exp.sb.parse()?;
        run_experiment(&problem, &sb, &RunOptions { classify: exp.classes.is_some(), ..*opts })
    };
    match run() {
        Ok(row) => SuiteRow { verdict: judge(exp, &row), expected: exp.clone(), row: Some(row), error: None },
        Err(e) => SuiteRow { expected: exp.clone(), row: None, error: Some(e.to_string()), verdict: Verdict::Error },
    }
}

/// Runs the rows of `table` whose scale is at most `max_scale`, in
/// parallel, returning them in fixture order.
pub fn run_suite(table: u8, max_scale: u8, opts: &RunOptions) -> Result<Vec<SuiteRow>> {
    if !(1..=4).contains(&table) {
        return Err(Error::invalid(format!("unknown table {table}; expected 1, 2, 3 or 4")));
    }
    let rows: Vec<Expectation> = expectations()?.into_iter().filter(|e| e.table == table && e.scale <= max_scale).collect();
    Ok(rows.par_iter().map(|e| run_expectation(e, opts)).collect())
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with header `problem,params,sb,solutions,classes,failures,elapsed_ms,complete`.
pub fn rows_to_csv<'a>(rows: impl IntoIterator<Item = &'a ExperimentRow>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::invalid(format!("writing CSV: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(format!("writing CSV: {e}")))?;
    let mut text = String::from_utf8(bytes).expect("CSV output is UTF-8");
    if text.is_empty() {
        text = "problem,params,sb,solutions,classes,failures,elapsed_ms,complete\n".into();
    }
    Ok(text)
}

/// Markdown table of suite results, with the expected counts alongside.
pub fn suite_markdown(rows: &[SuiteRow]) -> String {
    let mut out = String::from("| problem | params | sb | solutions | expected | classes | expected | failures | ms | verdict |\n");
    out.push_str("|---|---|---|---:|---:|---:|---:|---:|---:|---|\n");
    for s in rows {
        let (problem, params) = s.expected.problem.split_once(':').unwrap_or((&s.expected.problem, ""));
        let (sols, classes, failures, ms) = match &s.row {
            Some(r) => (r.solutions.to_string(), opt(r.classes), r.failures.to_string(), r.elapsed_ms.to_string()),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "| {problem} | {params} | {} | {sols} | {} | {classes} | {} | {failures} | {ms} | {} |",
            s.expected.sb,
            opt(s.expected.solutions),
            opt(s.expected.classes),
            s.verdict.as_str()
        );
    }
    out
}
