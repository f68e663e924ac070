//! Writing and checking synthesized derivations.

use std::path::{Path, PathBuf};
use std::time::Instant;

use predicheck_core::derivations::ca_theory;
use predicheck_core::derivations::choice::{ac_bang_file, ac_file, trunc_ac_bang_file};
use predicheck_core::logic::Formula;
use predicheck_core::syntax::dtt::print_dtt_file;
use predicheck_core::syntax::hao::{print_formula, print_theory};
use predicheck_core::syntax::{parse, Category, Payload};

use crate::check::{check_text, outcome, SourceKind};
use crate::error::CliError;
use crate::options::Options;
use crate::report::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Schema {
    Ca,
    Ac,
    AcBang,
    TruncAcBang,
}

impl Schema {
    pub fn default_output(self) -> PathBuf {
        PathBuf::from(match self {
            Schema::Ca => "ca.hao",
            Schema::Ac => "ac.dtt",
            Schema::AcBang => "ac-bang.dtt",
            Schema::TruncAcBang => "trunc-ac-bang.dtt",
        })
    }
}

/// `phi` is a formula, or a file holding one.
pub fn read_phi(phi: &str) -> Result<Formula, CliError> {
    let text = if Path::new(phi).is_file() {
        std::fs::read_to_string(phi).map_err(|e| CliError::io(Path::new(phi), e))?
    } else {
        phi.to_string()
    };
    match parse(text.trim(), Category::Formula) {
        Ok(node) => match node.payload {
            Payload::Formula(f) => Ok(f),
            _ => unreachable!("formula category"),
        },
        Err(e) => Err(CliError::Usage(format!("φ: {e}"))),
    }
}

/// The text of a synthesized artifact.
pub fn synthesize_text(schema: Schema, phi: Option<&str>) -> Result<String, CliError> {
    Ok(match schema {
        Schema::Ca => {
            let phi = phi.ok_or_else(|| CliError::Usage(String::from("synthesize ca needs --phi")))?;
            let phi = read_phi(phi)?;
            let decls = ca_theory(&phi).map_err(|e| CliError::Usage(e.to_string()))?;
            format!("; comprehension for {}\n{}", print_formula(&phi), print_theory(&decls))
        }
        Schema::Ac => print_dtt_file(&ac_file()),
        Schema::AcBang => print_dtt_file(&ac_bang_file()),
        Schema::TruncAcBang => print_dtt_file(&trunc_ac_bang_file()),
    })
}

pub fn cmd_synthesize(
    schema: Schema,
    phi: Option<&str>,
    output: Option<&Path>,
    opts: &Options,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let text = synthesize_text(schema, phi)?;
    let path = output.map_or_else(|| schema.default_output(), Path::to_path_buf);
    std::fs::write(&path, &text).map_err(|e| CliError::io(&path, e))?;
    let kind = if schema == Schema::Ca { SourceKind::Theory } else { SourceKind::Dtt };
    let shown = path.display().to_string();
    let (records, times) = check_text(kind, &shown, &text, opts);
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    Ok(RunReport::new(vec![outcome(&shown, &text, &records, times, elapsed)], elapsed))
}
