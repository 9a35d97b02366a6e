//! Command-line front end: `betti`, `graphs` and `verify`.
//!
//! [`run`] writes to the given streams and returns the process exit code:
//! 0 on success, 1 when two routes disagree or a check fails, 2 on bad input.

mod args;
mod cache;

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use args::{BettiArgs, Cell, CellArgs, Cli, Command, Format, GraphsArgs, Method, Span, VerifyArgs};

use crate::closedform::closed_form;
use crate::error::{Error, Result};
use crate::fixedgraphs::{enumerate_fixed_graphs, minimal_stratum, DecoratedTree};
use crate::localization::{fixed_point_reports, poincare_localization, FixedPointReport};
use crate::qpoly::QPolynomial;
use crate::verify::{run_suite, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit code for an error: 2 for user errors, 1 for mathematical ones.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::UnsupportedDegree(_) | Error::UnknownFamily(_) => EXIT_USAGE,
        Error::NotDivisible { .. } | Error::TheoremViolation { .. } | Error::Consistency(_) => EXIT_FAILURE,
    }
}

/// One computed Betti row; this is also the cache file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BettiRecord {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub method: String,
    pub dim: i64,
    pub poincare: QPolynomial,
    pub betti: Vec<u128>,
    #[serde(skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub reports: Option<Vec<FixedPointReport>>,
}

impl BettiRecord {
    fn new(cell: Cell, method: Method, poincare: QPolynomial) -> Result<Self> {
        let dim = (cell.k * (cell.n - cell.k) + cell.d * cell.n) as i64 - 3;
        let betti = (0..=dim)
            .map(|i| {
                poincare
                    .coeff(i)
                    .to_u128()
                    .ok_or_else(|| Error::Consistency(format!("coefficient of q^{i} in {poincare} is not a count")))
            })
            .collect::<Result<_>>()?;
        Ok(BettiRecord { k: cell.k, n: cell.n, d: cell.d, method: method.label().into(), dim, poincare, betti, reports: None })
    }

    fn matches(&self, cell: Cell, method: Method) -> bool {
        (self.k, self.n, self.d) == (cell.k, cell.n, cell.d) && self.method == method.label()
    }
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn main_with_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(jobs);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_FAILURE;
        }
    };
    let (text, errors, failed) = pool.install(|| match &cli.command {
        Command::Betti(a) => cmd_betti(a),
        Command::Graphs(a) => cmd_graphs(a),
        Command::Verify(a) => cmd_verify(a),
    });
    let _ = out.write_all(text.as_bytes());
    let mut code = if failed { EXIT_FAILURE } else { EXIT_OK };
    for e in &errors {
        let _ = writeln!(err, "error: {e}");
        code = code.max(exit_code(e));
    }
    code
}

/// Rendered output, errors to report, and whether a check failed.
type Outcome = (String, Vec<Error>, bool);

fn usage(e: Error) -> Outcome {
    (String::new(), vec![e], false)
}

fn compute_betti(cell: Cell, args: &BettiArgs) -> Result<BettiRecord> {
    let Cell { k, n, d } = cell;
    if !args.reports {
        if let Some(dir) = &args.cache_dir {
            if let Some(hit) = cache::load(dir, cell, args.method) {
                return Ok(hit);
            }
        }
    }
    let mut reports = None;
    let poincare = match args.method {
        Method::Closed => closed_form(k, n, d)?.poincare,
        Method::Loc | Method::Both => {
            let p = if args.reports {
                let r = fixed_point_reports(k, n, d)?;
                let p = QPolynomial::from_terms(r.iter().map(|x| (x.positives, 1)));
                reports = Some(r);
                p
            } else {
                poincare_localization(k, n, d)?
            };
            if args.method == Method::Both {
                let c = closed_form(k, n, d)?.poincare;
                if c != p {
                    return Err(Error::Consistency(format!("{cell}: localization gives {p}, closed form gives {c}")));
                }
            }
            p
        }
    };
    let mut record = BettiRecord::new(cell, args.method, poincare)?;
    if let Some(dir) = args.cache_dir.as_ref().filter(|_| !args.reports) {
        cache::store(dir, &record);
    }
    record.reports = reports;
    Ok(record)
}

fn cmd_betti(args: &BettiArgs) -> Outcome {
    let cells = match args.cells.cells() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if args.reports && (args.method == Method::Closed || args.format == Format::Csv) {
        return usage(Error::domain("--reports needs --method loc or both and text or json output"));
    }
    let results: Vec<Result<BettiRecord>> = cells.par_iter().map(|&c| compute_betti(c, args)).collect();
    let (records, errors): (Vec<_>, Vec<_>) = results.into_iter().partition(|r| r.is_ok());
    let records: Vec<BettiRecord> = records.into_iter().map(|r| r.unwrap()).collect();
    let errors = errors.into_iter().map(|r| r.unwrap_err()).collect();
    let single = cells.len() == 1;
    let mut text = String::new();
    match args.format {
        Format::Json if records.is_empty() => {}
        Format::Json => {
            let json = if single {
                serde_json::to_string(&records[0])
            } else {
                serde_json::to_string(&records)
            };
            text = json.expect("records serialize") + "\n";
        }
        Format::Csv => {
            for r in &records {
                let row = r.betti.iter().map(u128::to_string).collect::<Vec<_>>().join(",");
                if single {
                    text += &format!("{row}\n");
                } else {
                    text += &format!("{},{},{},{row}\n", r.k, r.n, r.d);
                }
            }
        }
        Format::Text => {
            for r in &records {
                text += &format!("G({},{}) d={} [{}] dim {}\n", r.k, r.n, r.d, r.method, r.dim);
                text += &format!("P(q) = {}\n", r.poincare);
                text += &format!("betti {}\n", r.betti.iter().map(u128::to_string).collect::<Vec<_>>().join(","));
                for rep in r.reports.iter().flatten() {
                    text += &format!("  +{} -{} {}\n", rep.positives, rep.negatives, serde_json::to_string(rep).expect("report serializes"));
                }
            }
        }
    }
    (text, errors, false)
}

#[derive(Debug, Serialize)]
struct StratumCount {
    k: usize,
    n: usize,
    count: usize,
}

#[derive(Debug, Serialize)]
struct Census {
    k: usize,
    n: usize,
    d: usize,
    total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    shapes: Option<BTreeMap<&'static str, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strata: Option<Vec<StratumCount>>,
}

fn census(cell: Cell, trees: &[DecoratedTree], totals_only: bool) -> Census {
    let mut census = Census { k: cell.k, n: cell.n, d: cell.d, total: trees.len(), shapes: None, strata: None };
    if !totals_only {
        let mut shapes = BTreeMap::new();
        let mut strata = BTreeMap::new();
        for t in trees {
            *shapes.entry(t.shape()).or_insert(0) += 1;
            *strata.entry(minimal_stratum(t)).or_insert(0) += 1;
        }
        census.shapes = Some(shapes.into_iter().map(|(s, c)| (s.name(), c)).collect());
        census.strata = Some(strata.into_iter().map(|((k, n), count)| StratumCount { k, n, count }).collect());
    }
    census
}

fn cmd_graphs(args: &GraphsArgs) -> Outcome {
    let cells = match args.cells.cells() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let mut all = Vec::new();
    for &c in &cells {
        match enumerate_fixed_graphs(c.k, c.n, c.d) {
            Ok(trees) => all.push((c, trees)),
            Err(e) => return usage(e),
        }
    }
    let mut text = String::new();
    if args.trees {
        let trees: Vec<&DecoratedTree> = all.iter().flat_map(|(_, t)| t).collect();
        if args.format == Format::Json {
            text = serde_json::to_string(&trees).expect("trees serialize") + "\n";
        } else {
            for t in trees {
                text += &(serde_json::to_string(t).expect("tree serializes") + "\n");
            }
        }
        return (text, Vec::new(), false);
    }
    let censuses: Vec<Census> = all.iter().map(|(c, t)| census(*c, t, args.count)).collect();
    match args.format {
        Format::Json => {
            let json = if censuses.len() == 1 {
                serde_json::to_string(&censuses[0])
            } else {
                serde_json::to_string(&censuses)
            };
            text = json.expect("census serializes") + "\n";
        }
        Format::Csv => {
            text += "k,n,d,total\n";
            for c in &censuses {
                text += &format!("{},{},{},{}\n", c.k, c.n, c.d, c.total);
            }
        }
        Format::Text => {
            for c in &censuses {
                if censuses.len() > 1 || !args.count {
                    text += &format!("G({},{}) d={}\n", c.k, c.n, c.d);
                }
                text += &format!("total {}\n", c.total);
                for (name, count) in c.shapes.iter().flatten() {
                    text += &format!("  shape {name}: {count}\n");
                }
                for s in c.strata.iter().flatten() {
                    text += &format!("  stratum G({},{}): {}\n", s.k, s.n, s.count);
                }
            }
        }
    }
    (text, Vec::new(), false)
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let suites = match args.suite {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for s in suites {
        match run_suite(s, args.max_n) {
            Ok(r) => reports.push(r),
            Err(e) => return (String::new(), vec![e], false),
        }
    }
    let failed = reports.iter().any(|r| !r.passed());
    let mut text = String::new();
    match args.format {
        Format::Json => text = serde_json::to_string(&reports).expect("reports serialize") + "\n",
        Format::Csv => {
            text += "suite,case,status\n";
            for r in &reports {
                for row in &r.rows {
                    text += &format!("{},\"{}\",{}\n", r.suite, row.case, status(row));
                }
            }
        }
        Format::Text => {
            for r in &reports {
                let checked = r.rows.iter().filter(|x| !x.informational).count();
                let passed = r.rows.iter().filter(|x| !x.informational && x.passed).count();
                text += &format!("[{}]\n", r.suite);
                for row in &r.rows {
                    text += &format!("{} {}", status(row), row.case);
                    if let Some(d) = &row.detail {
                        text += &format!(": {d}");
                    }
                    text += "\n";
                }
                text += &format!("{}: {passed}/{checked} passed\n", r.suite);
            }
        }
    }
    (text, Vec::new(), failed)
}

fn status(row: &crate::verify::CheckRow) -> &'static str {
    match (row.informational, row.passed) {
        (true, true) => "INFO-MATCH",
        (true, false) => "INFO-DIFF",
        (false, true) => "PASS",
        (false, false) => "FAIL",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_user_errors_from_math() {
        assert_eq!(exit_code(&Error::domain("k")), EXIT_USAGE);
        assert_eq!(exit_code(&Error::UnsupportedDegree(4)), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Consistency("routes".into())), EXIT_FAILURE);
        let remainder = QPolynomial::one();
        assert_eq!(exit_code(&Error::TheoremViolation { k: 1, n: 2, d: 2, remainder }), EXIT_FAILURE);
    }

    #[test]
    fn in_process_run_matches_binary_contract() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(["grassmap", "betti", "-k", "1", "-n", "2", "-d", "2", "--format", "csv"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert_eq!(String::from_utf8(out).unwrap(), "1,1,1\n");
        assert!(err.is_empty());
    }
}
