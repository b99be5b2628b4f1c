//! Per-iteration log rows and their CSV form.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64` bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const TRACE_HEADER: &str = "iter,f,grad_inf_norm,step_norm,ls_trials,updates_skipped,elapsed_s";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub f: f64,
    pub grad_inf_norm: f64,
    pub step_norm: f64,
    pub ls_trials: usize,
    pub updates_skipped: usize,
    pub elapsed_s: f64,
}

impl TraceRecord {
    /// Field-wise equality that treats NaN as equal to NaN with the same bits.
    pub fn bitwise_eq(&self, other: &TraceRecord) -> bool {
        self.iter == other.iter
            && self.f.to_bits() == other.f.to_bits()
            && self.grad_inf_norm.to_bits() == other.grad_inf_norm.to_bits()
            && self.step_norm.to_bits() == other.step_norm.to_bits()
            && self.ls_trials == other.ls_trials
            && self.updates_skipped == other.updates_skipped
            && self.elapsed_s.to_bits() == other.elapsed_s.to_bits()
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_to_csv(records: &[TraceRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("trace has no records".into()));
    }
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.iter,
            format_float(r.f),
            format_float(r.grad_inf_norm),
            format_float(r.step_norm),
            r.ls_trials,
            r.updates_skipped,
            format_float(r.elapsed_s)
        );
    }
    Ok(out)
}

pub fn write_trace_csv(records: &[TraceRecord], path: &Path) -> Result<()> {
    let text = trace_to_csv(records)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.split('\n');
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        _ => return Err(Error::TraceFormat { line: 1, message: format!("expected header `{TRACE_HEADER}`") }),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::TraceFormat { line: lineno, message: format!("expected 7 fields, found {}", fields.len()) });
        }
        let bad = |e: &dyn std::fmt::Display| Error::TraceFormat { line: lineno, message: e.to_string() };
        let int = |s: &str| s.parse::<usize>().map_err(|e| bad(&e));
        let float = |s: &str| s.parse::<f64>().map_err(|e| bad(&e));
        out.push(TraceRecord {
            iter: int(fields[0])?,
            f: float(fields[1])?,
            grad_inf_norm: float(fields[2])?,
            step_norm: float(fields[3])?,
            ls_trials: int(fields[4])?,
            updates_skipped: int(fields[5])?,
            elapsed_s: float(fields[6])?,
        });
    }
    Ok(out)
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRecord>> {
    parse_trace_csv(&std::fs::read_to_string(path)?)
}
