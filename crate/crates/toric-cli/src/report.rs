//! Report records and their text / CSV / JSON rendering.
//!
//! Every check in every suite produces one record: a name, the computed
//! value, the reference it is held against, a residual, the tolerance the
//! residual must meet, the verdict, and a note naming the identity or oracle
//! behind the reference.

use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Failure, Flags, Format};

#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: String,
}

impl ReportRecord {
    /// The one rule every record follows: pass iff the residual is finite
    /// and within tolerance.
    pub fn new(
        name: impl Into<String>,
        computed: f64,
        reference: f64,
        residual: f64,
        tol: f64,
        note: impl Into<String>,
    ) -> ReportRecord {
        ReportRecord {
            name: name.into(),
            computed,
            reference,
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
            note: note.into(),
        }
    }

    /// Absolute comparison: residual = |computed - reference|.
    pub fn abs(
        name: impl Into<String>,
        computed: f64,
        reference: f64,
        tol: f64,
        note: impl Into<String>,
    ) -> ReportRecord {
        ReportRecord::new(name, computed, reference, (computed - reference).abs(), tol, note)
    }

    /// Relative comparison against a nonzero reference.
    pub fn rel(
        name: impl Into<String>,
        computed: f64,
        reference: f64,
        tol: f64,
        note: impl Into<String>,
    ) -> ReportRecord {
        let residual = (computed - reference).abs() / reference.abs();
        ReportRecord::new(name, computed, reference, residual, tol, note)
    }

    /// One-sided bound: pass iff computed <= limit; residual is the
    /// overshoot.
    pub fn at_most(
        name: impl Into<String>,
        computed: f64,
        limit: f64,
        note: impl Into<String>,
    ) -> ReportRecord {
        let residual = if computed <= limit {
            0.0
        } else {
            computed - limit
        };
        ReportRecord::new(name, computed, limit, residual, 0.0, note)
    }

    /// Boolean verdict carrying the numbers it was decided on.
    pub fn condition(
        name: impl Into<String>,
        ok: bool,
        computed: f64,
        reference: f64,
        note: impl Into<String>,
    ) -> ReportRecord {
        ReportRecord::new(name, computed, reference, if ok { 0.0 } else { 1.0 }, 0.0, note)
    }

    /// A check that could not be evaluated at all.
    pub fn broken(name: impl Into<String>, note: impl Into<String>) -> ReportRecord {
        ReportRecord::new(name, f64::NAN, f64::NAN, f64::INFINITY, 0.0, note)
    }
}

/// Render the records in the requested format and write them to --out or
/// stdout. Returns whether every record passed.
pub fn deliver(suite: &str, records: &[ReportRecord], flags: &Flags) -> Result<bool, Failure> {
    let text = match flags.format {
        None => render_text(suite, records),
        Some(Format::Json) => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        Some(Format::Csv) => render_csv(records),
    };
    write_output(&text, flags.out.as_deref())?;
    Ok(records.iter().all(|r| r.pass))
}

pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_text(suite: &str, records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "[{status}] {}", r.name);
        let _ = writeln!(
            out,
            "       computed {:+.10e}   reference {:+.10e}   residual {:.3e}   tol {:.3e}",
            r.computed, r.reference, r.residual, r.tol
        );
        let _ = writeln!(out, "       {}", r.note);
    }
    let passed = records.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{suite}: {passed}/{} checks passed", records.len());
    out
}

fn render_csv(records: &[ReportRecord]) -> String {
    let mut out = String::from("name,computed,reference,residual,tol,pass,note\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            csv_quote(&r.name),
            r.computed,
            r.reference,
            r.residual,
            r.tol,
            r.pass,
            csv_quote(&r.note)
        );
    }
    out
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}
