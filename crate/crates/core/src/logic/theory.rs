//! Checking `.hao` theory files declaration by declaration.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::Formula;
use super::proof::{check_proof, AxiomProfile, LemmaEnv, Proof, ProofDiagnostic, ProofEnv};
use crate::hao::{self, TypingContext};
use crate::report::{Record, Status};
use crate::syntax::hao::{Item, TheoryDecl};

/// Flag switches applied on top of every `(profile ...)` declaration.
pub type ProfileOverrides = [(String, bool)];

fn join(diags: &[ProofDiagnostic]) -> String {
    let parts: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
    parts.join("; ")
}

fn apply(profile: &mut AxiomProfile, overrides: &ProfileOverrides) {
    for (flag, on) in overrides {
        profile.set(flag, *on);
    }
}

/// Checks declarations in order. Lemmas that check become citable by later
/// declarations; failed ones do not.
pub fn check_theory(items: &[Item<TheoryDecl>], overrides: &ProfileOverrides, fuel: u64) -> Vec<Record> {
    check_theory_observed(items, overrides, fuel, &mut |_| {})
}

/// As [`check_theory`], calling `observe` as each record is produced.
pub fn check_theory_observed(
    items: &[Item<TheoryDecl>],
    overrides: &ProfileOverrides,
    fuel: u64,
    observe: &mut dyn FnMut(&Record),
) -> Vec<Record> {
    let mut profile = AxiomProfile::INTUITIONISTIC;
    apply(&mut profile, overrides);
    let mut lemmas = LemmaEnv::new();
    let mut out = Vec::new();
    for item in items {
        let record = |status, message: Option<String>| Record {
            name: item.name.clone(),
            kind: item.kind.clone(),
            span: item.span,
            status,
            message,
        };
        let decl = match &item.decl {
            Ok(d) => d,
            Err(e) => {
                let r = record(Status::Failed, Some(e.to_string()));
                observe(&r);
                out.push(r);
                continue;
            }
        };
        let result: Result<(), String> = match decl {
            TheoryDecl::Profile(flags) => {
                profile = AxiomProfile::INTUITIONISTIC;
                for f in flags {
                    profile.set(f, true);
                }
                apply(&mut profile, overrides);
                Ok(())
            }
            TheoryDecl::Define(_, t) => {
                hao::infer_type(&TypingContext::new(), t).map(|_| ()).map_err(|e| e.to_string())
            }
            TheoryDecl::Formula(_, f) => f.check_well_formed(&mut TypingContext::new()).map_err(|e| e.to_string()),
            TheoryDecl::Lemma(name, f, p) | TheoryDecl::Reject(name, f, p) => {
                if lemmas.contains_key(name) {
                    Err(format!("lemma '{name}' is already defined"))
                } else {
                    check_statement(profile, &lemmas, fuel, f, p)
                }
            }
        };
        let (status, message) = match (decl, result) {
            (TheoryDecl::Reject(..), Ok(())) => {
                (Status::UnexpectedAccept, Some(String::from("derivation was expected to fail but checks")))
            }
            (TheoryDecl::Reject(..), Err(m)) => (Status::ExpectedReject, Some(m)),
            (TheoryDecl::Lemma(name, f, _), Ok(())) => {
                lemmas.insert(name.clone(), f.clone());
                (Status::Ok, None)
            }
            (TheoryDecl::Profile(_), Ok(())) => {
                let flags = profile.flag_names();
                let text = if flags.is_empty() { String::from("intuitionistic") } else { flags.join(" ") };
                (Status::Ok, Some(text))
            }
            (_, Ok(())) => (Status::Ok, None),
            (_, Err(m)) => (Status::Failed, Some(m)),
        };
        let r = record(status, message);
        observe(&r);
        out.push(r);
    }
    out
}

fn check_statement(profile: AxiomProfile, lemmas: &LemmaEnv, fuel: u64, f: &Formula, p: &Proof) -> Result<(), String> {
    f.check_well_formed(&mut TypingContext::new()).map_err(|e| e.to_string())?;
    let env = ProofEnv { profile, lemmas, fuel };
    check_proof(&env, &TypingContext::new(), &[], p, f).map_err(|d| join(&d))
}

/// Statements of every lemma that checks, in file order.
pub fn checked_lemmas(items: &[Item<TheoryDecl>], records: &[Record]) -> Vec<(String, Formula, Proof)> {
    items
        .iter()
        .zip(records)
        .filter_map(|(item, r)| match (&item.decl, r.status) {
            (Ok(TheoryDecl::Lemma(n, f, p)), Status::Ok) => Some((n.clone(), f.clone(), p.clone())),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::read_all;
    use crate::syntax::hao::parse_theory;

    fn run(text: &str, overrides: &ProfileOverrides) -> Vec<Record> {
        let items = parse_theory(&read_all(text).unwrap());
        check_theory(&items, overrides, crate::DEFAULT_FUEL)
    }

    #[test]
    fn single_refl_lemma() {
        let r = run("(lemma refl-zero (= N 0 0) (refl 0))", &[]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, Status::Ok);
    }

    #[test]
    fn lem_disabled_by_default() {
        let r = run("(lemma em (or (= N 0 0) (not (= N 0 0))) (lem (= N 0 0)))", &[]);
        assert_eq!(r[0].status, Status::Failed);
        assert!(r[0].message.as_deref().unwrap().contains("LEM disabled"));
        let r = run("(profile lem) (lemma em (or (= N 0 0) (not (= N 0 0))) (lem (= N 0 0)))", &[]);
        assert_eq!(r[1].status, Status::Ok);
        let r = run(
            "(profile lem) (lemma em (or (= N 0 0) (not (= N 0 0))) (lem (= N 0 0)))",
            &[(String::from("lem"), false)],
        );
        assert_eq!(r[1].status, Status::Failed);
    }

    #[test]
    fn citations_and_failed_lemmas() {
        let text = "(lemma a (= N 0 0) (refl 0)) (lemma b (= N 0 1) (refl 0)) \
                    (lemma c (= N 0 0) (cite a)) (lemma d (= N 0 1) (cite b))";
        let r = run(text, &[]);
        let st: Vec<Status> = r.iter().map(|r| r.status).collect();
        assert_eq!(st, [Status::Ok, Status::Failed, Status::Ok, Status::Failed]);
        assert!(r[3].message.as_deref().unwrap().contains("unknown lemma"));
    }

    #[test]
    fn reject_and_parse_errors() {
        let r = run("(reject bad (= N 0 1) (refl 0)) (lemma oops (= N 0))", &[]);
        assert_eq!(r[0].status, Status::ExpectedReject);
        assert_eq!(r[1].status, Status::Failed);
        assert_eq!(r[1].name, "oops");
    }

    #[test]
    fn definitions_expand() {
        let r = run("(define two 2) (lemma t (= N two (ap succ 1)) (refl 2))", &[]);
        assert!(r.iter().all(|r| r.status == Status::Ok));
    }
}
