//! The four translation passes over files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use predicheck_core::dtt::{DttDecl, SortMode};
use predicheck_core::report::{Record, Status};
use predicheck_core::sexp::read_all;
use predicheck_core::syntax::aca::parse_aca_decl;
use predicheck_core::syntax::dtt::print_dtt_file;
use predicheck_core::syntax::hao::{item_header, parse_theory, TheoryDecl};
use predicheck_core::translate::fol::is_relativized;
use predicheck_core::translate::transport::print_transported;
use predicheck_core::translate::{
    aca_to_emtt, formula_to_fol, formula_to_trunc, print_fol, theory_to_mltt, FolFormula,
};

use crate::check::{check_text, outcome, SourceKind};
use crate::error::CliError;
use crate::options::Options;
use crate::report::{FileOutcome, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Mltt,
    Trunc,
    Fol,
    Emtt,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Mltt => "mltt",
            Target::Trunc => "trunc",
            Target::Fol => "fol",
            Target::Emtt => "emtt",
        }
    }

    pub fn source(self) -> SourceKind {
        match self {
            Target::Emtt => SourceKind::Aca,
            _ => SourceKind::Theory,
        }
    }

    /// Extension of the written file.
    pub fn output_extension(self) -> &'static str {
        match self {
            Target::Fol => "fol",
            _ => "dtt",
        }
    }
}

/// Translated text and one record per source declaration.
#[derive(Clone, Debug)]
pub struct Translation {
    pub text: String,
    pub records: Vec<Record>,
    fol: Vec<(String, FolFormula)>,
}

fn rec(name: &str, kind: &str, span: predicheck_core::Span, r: Result<(), String>) -> Record {
    let (status, message) = match r {
        Ok(()) => (Status::Ok, None),
        Err(m) => (Status::Failed, Some(m)),
    };
    Record { name: name.to_string(), kind: kind.to_string(), span, status, message }
}

fn push_line(out: &mut String, line: &str) {
    out.push_str(line);
    out.push('\n');
}

/// Translates source text. The caller has already matched the source
/// kind against the target.
pub fn translate_text(text: &str, target: Target) -> Translation {
    let mut t = Translation { text: String::new(), records: Vec::new(), fol: Vec::new() };
    let forms = match read_all(text) {
        Ok(f) => f,
        Err(e) => {
            t.records.push(rec("input", "file", e.span, Err(e.to_string())));
            return t;
        }
    };
    match target {
        Target::Emtt => {
            let mut decls = Vec::new();
            for form in &forms {
                let (name, kind) = item_header(form);
                let parsed = parse_aca_decl(form);
                t.records.push(rec(&name, &kind, form.span, parsed.as_ref().map(|_| ()).map_err(|e| e.to_string())));
                decls.extend(parsed);
            }
            t.text = print_dtt_file(&aca_to_emtt(&decls));
        }
        Target::Mltt => {
            let items = parse_theory(&forms);
            let translated = theory_to_mltt(&items);
            // the first two entries are the mode and the succ-ne-zero assumption
            let mut entries = translated[2..].iter();
            for item in &items {
                let r = match &item.decl {
                    Ok(TheoryDecl::Lemma(..)) => {
                        let e = entries.next().expect("one entry per lemma");
                        match (&e.comment, &e.decl) {
                            (Some(c), Some(DttDecl::Assume(..))) => Err(c.clone()),
                            _ => Ok(()),
                        }
                    }
                    Ok(TheoryDecl::Formula(..)) => {
                        entries.next();
                        Ok(())
                    }
                    Ok(_) => continue,
                    Err(e) => {
                        entries.next();
                        Err(e.to_string())
                    }
                };
                t.records.push(rec(&item.name, &item.kind, item.span, r));
            }
            t.text = print_transported(&translated);
        }
        Target::Trunc => {
            push_line(&mut t.text, "(mode mtt)");
            for item in parse_theory(&forms) {
                let r = match &item.decl {
                    Ok(TheoryDecl::Formula(n, f) | TheoryDecl::Lemma(n, f, _)) => {
                        let d = DttDecl::Classify { name: Some(n.clone()), ty: formula_to_trunc(f), expected: None };
                        push_line(&mut t.text, &predicheck_core::syntax::dtt::print_dtt_decl(&d));
                        Ok(())
                    }
                    Ok(_) => continue,
                    Err(e) => Err(e.to_string()),
                };
                t.records.push(rec(&item.name, &item.kind, item.span, r));
            }
        }
        Target::Fol => {
            for item in parse_theory(&forms) {
                let r = match &item.decl {
                    Ok(TheoryDecl::Formula(n, f)) => {
                        let g = formula_to_fol(f);
                        push_line(&mut t.text, &format!("(formula {n} {})", print_fol(&g)));
                        t.fol.push((n.clone(), g));
                        Ok(())
                    }
                    Ok(TheoryDecl::Lemma(..) | TheoryDecl::Reject(..)) => {
                        Err(String::from("proofs not transportable to fol target"))
                    }
                    Ok(_) => continue,
                    Err(e) => Err(e.to_string()),
                };
                t.records.push(rec(&item.name, &item.kind, item.span, r));
            }
        }
    }
    t
}

/// Checks translated output: in the kernel for the type-theoretic
/// targets, by the relativization check for first-order output.
pub fn check_translation(t: &Translation, target: Target, shown: &str, opts: &Options) -> (Vec<Record>, Vec<f64>) {
    match target {
        Target::Fol => {
            let mut offset = 0;
            let records = t
                .fol
                .iter()
                .map(|(n, f)| {
                    let line_len = t.text[offset..].find('\n').map_or(t.text.len() - offset, |i| i + 1);
                    let span = predicheck_core::Span::new(offset, offset + line_len.saturating_sub(1));
                    offset += line_len;
                    let ok =
                        if is_relativized(f) { Ok(()) } else { Err(String::from("quantifier is not relativized")) };
                    rec(n, "formula", span, ok)
                })
                .collect::<Vec<_>>();
            let times = vec![0.0; records.len()];
            (records, times)
        }
        _ => {
            let mode = match target {
                Target::Mltt => SortMode::Mltt,
                Target::Trunc => SortMode::Mtt,
                _ => SortMode::Emtt,
            };
            let o = Options { mode: Some(mode), ..opts.clone() };
            check_text(SourceKind::Dtt, shown, &t.text, &o)
        }
    }
}

/// Default output path: the input with the target's extension added.
pub fn default_output(input: &Path, target: Target) -> PathBuf {
    let mut s = input.as_os_str().to_owned();
    s.push(format!(".{}.{}", target.as_str(), target.output_extension()));
    PathBuf::from(s)
}

pub fn ensure_source(input: &Path, target: Target) -> Result<(), CliError> {
    let kind = SourceKind::from_path(input);
    if kind != Some(target.source()) {
        return Err(CliError::Usage(format!(
            "{}: target {} translates .{} files",
            input.display(),
            target.as_str(),
            target.source().extension()
        )));
    }
    Ok(())
}

/// Translation records for the input, then check records for the
/// output when `check` is set.
pub fn translate_outcomes(
    text: &str,
    target: Target,
    input_shown: &str,
    output_shown: &str,
    check: bool,
    opts: &Options,
) -> (Translation, Vec<FileOutcome>) {
    let start = Instant::now();
    let t = translate_text(text, target);
    let n = t.records.len();
    let mut outs = vec![outcome(input_shown, text, &t.records, vec![0.0; n], start.elapsed().as_secs_f64() * 1000.0)];
    if check {
        let start = Instant::now();
        let (records, times) = check_translation(&t, target, output_shown, opts);
        outs.push(outcome(output_shown, &t.text, &records, times, start.elapsed().as_secs_f64() * 1000.0));
    }
    (t, outs)
}

pub fn cmd_translate(
    input: &Path,
    target: Target,
    output: Option<&Path>,
    check: bool,
    opts: &Options,
) -> Result<RunReport, CliError> {
    ensure_source(input, target)?;
    let start = Instant::now();
    let text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let out_path = output.map_or_else(|| default_output(input, target), Path::to_path_buf);
    let (t, outcomes) =
        translate_outcomes(&text, target, &input.display().to_string(), &out_path.display().to_string(), check, opts);
    std::fs::write(&out_path, &t.text).map_err(|e| CliError::io(&out_path, e))?;
    Ok(RunReport::new(outcomes, start.elapsed().as_secs_f64() * 1000.0))
}
