//! Running the corpus and comparing against its golden outputs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use predicheck_core::report::{Record, Status};
use predicheck_core::Span;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{check_file, outcome, SourceKind};
use crate::error::CliError;
use crate::options::Options;
use crate::report::{FileOutcome, RunReport};
use crate::translate::{ensure_source, translate_outcomes, Target};

pub const MANIFEST: &str = "manifest.json";
pub const GOLDEN_DIR: &str = "golden";
pub const GOLDEN_REPORT: &str = "report.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationJob {
    pub input: String,
    pub target: Target,
}

/// Which translations the corpus exercises.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub translations: Vec<TranslationJob>,
}

#[derive(Clone, Debug)]
pub struct CorpusRun {
    pub report: RunReport,
    /// Golden file name and translated text, per translation job.
    pub texts: Vec<(String, String)>,
}

pub fn golden_name(job: &TranslationJob) -> String {
    format!("{}.{}.{}", job.input, job.target.as_str(), job.target.output_extension())
}

/// Source files directly under `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for e in entries {
        let p = e.map_err(|e| CliError::io(dir, e))?.path();
        if p.is_file() && SourceKind::from_path(&p).is_some() {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join(MANIFEST);
    if !path.exists() {
        return Ok(Manifest::default());
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Checks every file, then runs and checks every translation.
pub fn run_corpus(dir: &Path, opts: &Options) -> Result<CorpusRun, CliError> {
    let start = Instant::now();
    let manifest = read_manifest(dir)?;
    let files = corpus_files(dir)?;
    let mut outcomes: Vec<FileOutcome> =
        files.par_iter().map(|p| check_file(p, &file_name(p), opts)).collect::<Result<_, _>>()?;
    let jobs: Vec<_> = manifest
        .translations
        .par_iter()
        .map(|job| {
            let input = dir.join(&job.input);
            ensure_source(&input, job.target)?;
            let text = std::fs::read_to_string(&input).map_err(|e| CliError::io(&input, e))?;
            let shown = format!("{} ({})", job.input, job.target.as_str());
            let (t, outs) = translate_outcomes(&text, job.target, &shown, &golden_name(job), true, opts);
            Ok(((golden_name(job), t.text), outs))
        })
        .collect::<Result<_, CliError>>()?;
    let mut texts = Vec::new();
    for (text, outs) in jobs {
        texts.push(text);
        outcomes.extend(outs);
    }
    let report = RunReport::new(outcomes, start.elapsed().as_secs_f64() * 1000.0);
    Ok(CorpusRun { report, texts })
}

/// Names of golden files that differ from the run.
pub fn golden_mismatches(dir: &Path, run: &CorpusRun) -> Vec<String> {
    let golden = dir.join(GOLDEN_DIR);
    let expected =
        std::iter::once((GOLDEN_REPORT.to_string(), run.report.stable_json())).chain(run.texts.iter().cloned());
    expected
        .filter(|(name, text)| std::fs::read_to_string(golden.join(name)).ok().as_deref() != Some(text.as_str()))
        .map(|(name, _)| name)
        .collect()
}

pub fn bless(dir: &Path, run: &CorpusRun) -> Result<(), CliError> {
    let golden = dir.join(GOLDEN_DIR);
    std::fs::create_dir_all(&golden).map_err(|e| CliError::io(&golden, e))?;
    let all = std::iter::once((GOLDEN_REPORT.to_string(), run.report.stable_json())).chain(run.texts.iter().cloned());
    for (name, text) in all {
        let p = golden.join(name);
        std::fs::write(&p, text).map_err(|e| CliError::io(&p, e))?;
    }
    Ok(())
}

/// Runs the corpus. Golden differences are appended as failed records
/// unless `bless` rewrites the goldens instead.
pub fn cmd_corpus(dir: &Path, do_bless: bool, opts: &Options) -> Result<RunReport, CliError> {
    let run = run_corpus(dir, opts)?;
    if do_bless {
        bless(dir, &run)?;
        return Ok(run.report);
    }
    let mismatches = golden_mismatches(dir, &run);
    if mismatches.is_empty() {
        return Ok(run.report);
    }
    let records: Vec<Record> = mismatches
        .iter()
        .map(|name| Record {
            name: name.clone(),
            kind: String::from("golden"),
            span: Span::new(0, 0),
            status: Status::Failed,
            message: Some(String::from("differs from the golden output; rerun with --bless to accept")),
        })
        .collect();
    let n = records.len();
    let mut outcomes: Vec<FileOutcome> = Vec::new();
    let RunReport { stable, timing } = run.report;
    for (f, t) in stable.files.into_iter().zip(timing.files) {
        outcomes.push(FileOutcome { path: f.path, records: f.records, timing: t });
    }
    outcomes.push(outcome(GOLDEN_DIR, "", &records, vec![0.0; n], 0.0));
    Ok(RunReport::new(outcomes, timing.elapsed_ms))
}
