//! Checking files by extension.

use std::path::{Path, PathBuf};
use std::time::Instant;

use predicheck_core::dtt::{check_dtt_observed, parse_dtt};
use predicheck_core::logic::theory::check_theory_observed;
use predicheck_core::report::{Record, Status};
use predicheck_core::sexp::read_all;
use predicheck_core::syntax::aca::parse_aca_decl;
use predicheck_core::syntax::hao::{item_header, parse_theory};
use rayon::prelude::*;

use crate::error::CliError;
use crate::options::Options;
use crate::report::{record_out, FileOutcome, FileTiming, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Theory,
    Dtt,
    Aca,
}

impl SourceKind {
    pub fn from_path(path: &Path) -> Option<SourceKind> {
        match path.extension()?.to_str()? {
            "hao" => Some(SourceKind::Theory),
            "dtt" => Some(SourceKind::Dtt),
            "aca" => Some(SourceKind::Aca),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            SourceKind::Theory => "hao",
            SourceKind::Dtt => "dtt",
            SourceKind::Aca => "aca",
        }
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// Records for `text`, with the time spent on each.
pub fn check_text(kind: SourceKind, name: &str, text: &str, opts: &Options) -> (Vec<Record>, Vec<f64>) {
    let forms = match read_all(text) {
        Ok(f) => f,
        Err(e) => {
            let r = Record {
                name: name.to_string(),
                kind: String::from("file"),
                span: e.span,
                status: Status::Failed,
                message: Some(e.to_string()),
            };
            return (vec![r], vec![0.0]);
        }
    };
    let mut times = Vec::new();
    let mut last = Instant::now();
    let mut observe = |_: &Record| {
        times.push(ms(last));
        last = Instant::now();
    };
    let records = match kind {
        SourceKind::Theory => check_theory_observed(&parse_theory(&forms), &opts.overrides, opts.fuel, &mut observe),
        SourceKind::Dtt => check_dtt_observed(&parse_dtt(&forms), opts.mode, opts.fuel, &mut observe),
        SourceKind::Aca => forms
            .iter()
            .map(|form| {
                let (name, kind) = item_header(form);
                let (status, message) = match parse_aca_decl(form) {
                    Ok(_) => (Status::Ok, None),
                    Err(e) => (Status::Failed, Some(e.to_string())),
                };
                let r = Record { name, kind, span: form.span, status, message };
                observe(&r);
                r
            })
            .collect(),
    };
    (records, times)
}

/// Resolved records of one input.
pub fn outcome(path: &str, text: &str, records: &[Record], times: Vec<f64>, elapsed_ms: f64) -> FileOutcome {
    FileOutcome {
        path: path.to_string(),
        records: records.iter().map(|r| record_out(text, r)).collect(),
        timing: FileTiming { path: path.to_string(), elapsed_ms, records_ms: times },
    }
}

pub fn check_file(path: &Path, shown: &str, opts: &Options) -> Result<FileOutcome, CliError> {
    let kind = SourceKind::from_path(path).ok_or_else(|| {
        CliError::Usage(format!("{}: unknown extension (expected .hao, .dtt or .aca)", path.display()))
    })?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let start = Instant::now();
    let (records, times) = check_text(kind, shown, &text, opts);
    Ok(outcome(shown, &text, &records, times, ms(start)))
}

/// Checks every file concurrently; the report keeps the given order.
pub fn cmd_check(paths: &[PathBuf], opts: &Options) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let outcomes: Vec<FileOutcome> =
        paths.par_iter().map(|p| check_file(p, &p.display().to_string(), opts)).collect::<Result<_, _>>()?;
    Ok(RunReport::new(outcomes, ms(start)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_broken_text() {
        let (r, t) = check_text(SourceKind::Theory, "e.hao", "", &Options::default());
        assert!(r.is_empty() && t.is_empty());
        let (r, _) = check_text(SourceKind::Dtt, "b.dtt", "(check", &Options::default());
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, Status::Failed);
    }

    #[test]
    fn aca_is_parse_only() {
        let text = "(formula t (forall (n N) (= n n))) (comprehension c n (= n 0)) (bogus)";
        let (r, t) = check_text(SourceKind::Aca, "a.aca", text, &Options::default());
        let st: Vec<Status> = r.iter().map(|r| r.status).collect();
        assert_eq!(st, [Status::Ok, Status::Ok, Status::Failed]);
        assert_eq!(t.len(), 3);
    }
}
