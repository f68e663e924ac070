//! Checking `.dtt` goal files.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::check::Kernel;
use super::expr::Expr;
use super::{Ctx, DttError, Entry, Sort, SortMode};
use crate::report::{Record, Status};
use crate::sexp::Sexp;
use crate::syntax::dtt::parse_dtt_decl;
use crate::syntax::hao::Item;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DttDecl {
    Mode(SortMode),
    Family {
        name: String,
        params: Vec<(String, Expr)>,
        sort: Sort,
    },
    Assume(String, Expr),
    Define(String, Expr, Expr),
    Check {
        name: Option<String>,
        term: Expr,
        ty: Expr,
    },
    /// A goal that must fail to check.
    Reject {
        name: Option<String>,
        term: Expr,
        ty: Expr,
    },
    Classify {
        name: Option<String>,
        ty: Expr,
        expected: Option<Sort>,
    },
}

impl DttDecl {
    pub fn kind(&self) -> &'static str {
        match self {
            DttDecl::Mode(_) => "mode",
            DttDecl::Family { .. } => "family",
            DttDecl::Assume(..) => "assume",
            DttDecl::Define(..) => "define",
            DttDecl::Check { .. } => "check",
            DttDecl::Reject { .. } => "reject",
            DttDecl::Classify { .. } => "classify",
        }
    }
}

/// Reads every declaration; unnamed ones are called `kind-ordinal`.
pub fn parse_dtt(forms: &[Sexp]) -> Vec<Item<DttDecl>> {
    forms
        .iter()
        .enumerate()
        .map(|(i, form)| {
            let decl = parse_dtt_decl(form);
            let kind = match &decl {
                Ok(d) => d.kind().to_string(),
                Err(_) => form.head().map_or("?", |(h, _)| h).to_string(),
            };
            let given = match &decl {
                Ok(DttDecl::Family { name, .. } | DttDecl::Assume(name, _) | DttDecl::Define(name, ..)) => {
                    Some(name.clone())
                }
                Ok(DttDecl::Check { name, .. } | DttDecl::Reject { name, .. } | DttDecl::Classify { name, .. }) => {
                    name.clone()
                }
                _ => None,
            };
            let name = given.unwrap_or_else(|| format!("{kind}-{}", i + 1));
            Item { name, kind, span: form.span, decl }
        })
        .collect()
}

/// Checks declarations in order under the declared modes, or under
/// `mode_override` everywhere when it is given. The default mode is MLTT.
pub fn check_dtt(items: &[Item<DttDecl>], mode_override: Option<SortMode>, fuel: u64) -> Vec<Record> {
    check_dtt_observed(items, mode_override, fuel, &mut |_| {})
}

/// As [`check_dtt`], calling `observe` as each record is produced.
pub fn check_dtt_observed(
    items: &[Item<DttDecl>],
    mode_override: Option<SortMode>,
    fuel: u64,
    observe: &mut dyn FnMut(&Record),
) -> Vec<Record> {
    let mut kernel = Kernel { mode: mode_override.unwrap_or(SortMode::Mltt), fuel };
    let mut ctx = Ctx::new();
    let mut defs: Vec<(String, Expr)> = Vec::new();
    let mut out = Vec::new();
    for item in items {
        let decl = match &item.decl {
            Ok(d) => d,
            Err(e) => {
                let r = Record {
                    name: item.name.clone(),
                    kind: item.kind.clone(),
                    span: item.span,
                    status: Status::Failed,
                    message: Some(e.to_string()),
                };
                observe(&r);
                out.push(r);
                continue;
            }
        };
        let expand = |e: &Expr| defs.iter().rev().fold(e.clone(), |acc, (x, v)| acc.subst(x, v));
        let result: Result<Option<String>, String> = match decl {
            DttDecl::Mode(m) => {
                if mode_override.is_none() {
                    kernel.mode = *m;
                }
                Ok(Some(format!("mode {}", kernel.mode)))
            }
            DttDecl::Family { name, params, sort } => {
                let mut inner = ctx.clone();
                let mut r: Result<Option<String>, DttError> = Ok(None);
                let mut expanded = Vec::new();
                for (x, a) in params {
                    let a = expand(a);
                    if let Err(e) = kernel.classify(&inner, &a) {
                        r = Err(e);
                        break;
                    }
                    inner = inner.with_term(x, a.clone());
                    expanded.push((x.clone(), a));
                }
                if r.is_ok() {
                    ctx.push(Entry::Family { name: name.clone(), params: expanded, sort: *sort });
                }
                r.map_err(|e| e.to_string())
            }
            DttDecl::Assume(x, a) => {
                let a = expand(a);
                kernel
                    .classify(&ctx, &a)
                    .map(|s| {
                        ctx.push(Entry::Term(x.clone(), a));
                        Some(format!("sort {s}"))
                    })
                    .map_err(|e| e.to_string())
            }
            DttDecl::Define(x, a, v) => {
                let (a, v) = (expand(a), expand(v));
                kernel
                    .check(&ctx, &v, &a)
                    .map(|()| {
                        defs.push((x.clone(), Expr::ann(v, a)));
                        None
                    })
                    .map_err(|e| e.to_string())
            }
            DttDecl::Check { term, ty, .. } | DttDecl::Reject { term, ty, .. } => {
                kernel.check(&ctx, &expand(term), &expand(ty)).map(|()| None).map_err(|e| e.to_string())
            }
            DttDecl::Classify { ty, expected, .. } => match kernel.classify(&ctx, &expand(ty)) {
                Ok(s) if expected.is_none_or(|e| e == s) => Ok(Some(format!("sort {s}"))),
                Ok(s) => Err(format!("classified type has sort {s}, expected {}", expected.unwrap())),
                Err(e) => Err(e.to_string()),
            },
        };
        let reject = matches!(decl, DttDecl::Reject { .. });
        let (status, message) = match (result, reject) {
            (Ok(m), false) => (Status::Ok, m),
            (Err(e), false) => (Status::Failed, Some(e)),
            (Ok(_), true) => (Status::UnexpectedAccept, Some(String::from("checked, but was required to fail"))),
            (Err(e), true) => (Status::ExpectedReject, Some(e)),
        };
        let r = Record { name: item.name.clone(), kind: item.kind.clone(), span: item.span, status, message };
        observe(&r);
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::read_all;

    fn run(text: &str, mode: Option<SortMode>) -> Vec<Record> {
        check_dtt(&parse_dtt(&read_all(text).unwrap()), mode, 100_000)
    }

    const AC: &str = "
        (family R ((x Nat) (y Nat)) props)
        (check ac
          (lam h (pair (lam x (fst (ap h x))) (lam x (snd (ap h x)))))
          (-> (Forall (x Nat) (Exists (y Nat) (R x y)))
              (Exists (f (-> Nat Nat)) (Forall (x Nat) (R x (ap f x))))))";

    #[test]
    fn ac_checks_in_mltt_only() {
        let r = run(AC, Some(SortMode::Mltt));
        assert!(r.iter().all(|r| r.status == Status::Ok), "{r:?}");
        let r = run(AC, Some(SortMode::Mtt));
        assert_eq!(r[1].status, Status::Failed);
        assert!(r[1].message.as_deref().unwrap().contains("fst"), "{r:?}");
    }

    #[test]
    fn classify_and_defaults() {
        let r = run("(mode emtt) (classify (-> Nat P1) coll) (classify Nat prop) (reject (lam x x) Nat)", None);
        let statuses: Vec<Status> = r.iter().map(|r| r.status).collect();
        assert_eq!(statuses, [Status::Ok, Status::Ok, Status::Failed, Status::ExpectedReject]);
        assert_eq!(r[2].name, "classify-3");
        assert_eq!(r[2].message.as_deref(), Some("classified type has sort Set, expected Prop"));
    }

    #[test]
    fn definitions_unfold() {
        let r = run("(define two Nat 2) (check (refl two) (Id Nat two (succ (succ 0))))", None);
        assert!(r.iter().all(|r| r.status == Status::Ok), "{r:?}");
    }
}
