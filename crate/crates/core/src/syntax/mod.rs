//! Parsing and printing for every surface language, behind one entry point.

use alloc::string::String;
use alloc::vec::Vec;

use crate::aca::{AcaDecl, AcaFormula};
use crate::dtt::{DttDecl, Expr};
use crate::hao::{FiniteType, Term};
use crate::logic::{Formula, Proof};
use crate::sexp::{read_all, read_one, Span, SyntaxResult};

pub mod aca;
pub mod dtt;
pub mod hao;

use hao::{Scope, TheoryDecl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Type,
    Term,
    Formula,
    Proof,
    Dtt,
    Aca,
    TheoryFile,
    DttFile,
    AcaFile,
}

impl Category {
    pub fn from_name(s: &str) -> Option<Category> {
        Some(match s {
            "type" => Category::Type,
            "term" => Category::Term,
            "formula" => Category::Formula,
            "proof" => Category::Proof,
            "dtt" => Category::Dtt,
            "aca" => Category::Aca,
            "theory-file" => Category::TheoryFile,
            "dtt-file" => Category::DttFile,
            "aca-file" => Category::AcaFile,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Type(FiniteType),
    Term(Term),
    Formula(Formula),
    Proof(Proof),
    Dtt(Expr),
    Aca(AcaFormula),
    Theory(Vec<TheoryDecl>),
    DttFile(Vec<DttDecl>),
    AcaFile(Vec<AcaDecl>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceNode {
    pub category: Category,
    pub payload: Payload,
    pub span: Span,
}

/// Parses `text` as one form of `category`, or a whole file for the file
/// categories. A file fails at its first bad declaration.
pub fn parse(text: &str, category: Category) -> SyntaxResult<SurfaceNode> {
    let span = Span::new(0, text.len());
    let payload = match category {
        Category::TheoryFile => {
            let items = hao::parse_theory(&read_all(text)?);
            Payload::Theory(items.into_iter().map(|i| i.decl).collect::<SyntaxResult<_>>()?)
        }
        Category::DttFile => {
            let forms = read_all(text)?;
            Payload::DttFile(forms.iter().map(dtt::parse_dtt_decl).collect::<SyntaxResult<_>>()?)
        }
        Category::AcaFile => {
            let forms = read_all(text)?;
            Payload::AcaFile(forms.iter().map(aca::parse_aca_decl).collect::<SyntaxResult<_>>()?)
        }
        _ => {
            let s = read_one(text)?;
            match category {
                Category::Type => Payload::Type(hao::parse_type(&s)?),
                Category::Term => Payload::Term(hao::parse_term(&s, &Scope::default())?),
                Category::Formula => Payload::Formula(hao::parse_formula(&s, &mut Scope::default())?),
                Category::Proof => Payload::Proof(hao::parse_proof(&s, &mut Scope::default())?),
                Category::Dtt => Payload::Dtt(dtt::parse_expr(&s)?),
                _ => Payload::Aca(aca::parse_aca_formula(&s)?),
            }
        }
    };
    Ok(SurfaceNode { category, payload, span })
}

pub fn print(node: &SurfaceNode) -> String {
    match &node.payload {
        Payload::Type(t) => hao::print_type(t),
        Payload::Term(t) => hao::print_term(t),
        Payload::Formula(f) => hao::print_formula(f),
        Payload::Proof(p) => hao::print_proof(p),
        Payload::Dtt(e) => dtt::print_expr(e),
        Payload::Aca(f) => aca::print_aca_formula(f),
        Payload::Theory(ds) => hao::print_theory(ds),
        Payload::DttFile(ds) => dtt::print_dtt_file(ds),
        Payload::AcaFile(ds) => {
            let mut out = String::new();
            for d in ds {
                out.push_str(&aca::print_aca_decl(d));
                out.push('\n');
            }
            out
        }
    }
}

fn canonical_theory_decl(d: &TheoryDecl) -> TheoryDecl {
    match d {
        TheoryDecl::Lemma(n, f, p) => TheoryDecl::Lemma(n.clone(), f.canonical(), hao::canonical_proof(p)),
        TheoryDecl::Reject(n, f, p) => TheoryDecl::Reject(n.clone(), f.canonical(), hao::canonical_proof(p)),
        TheoryDecl::Formula(n, f) => TheoryDecl::Formula(n.clone(), f.canonical()),
        _ => d.clone(),
    }
}

fn canonical_dtt_decl(d: &DttDecl) -> DttDecl {
    match d {
        DttDecl::Family { name, params, sort } => {
            let body = params.iter().rev().fold(Expr::Unit, |acc, (x, a)| Expr::pi(x, a.clone(), acc));
            DttDecl::Family { name: name.clone(), params: alloc::vec![(String::new(), body.canonical())], sort: *sort }
        }
        DttDecl::Assume(x, a) => DttDecl::Assume(x.clone(), a.canonical()),
        DttDecl::Define(x, a, v) => DttDecl::Define(x.clone(), a.canonical(), v.canonical()),
        DttDecl::Check { name, term, ty } => {
            DttDecl::Check { name: name.clone(), term: term.canonical(), ty: ty.canonical() }
        }
        DttDecl::Reject { name, term, ty } => {
            DttDecl::Reject { name: name.clone(), term: term.canonical(), ty: ty.canonical() }
        }
        DttDecl::Classify { name, ty, expected } => {
            DttDecl::Classify { name: name.clone(), ty: ty.canonical(), expected: *expected }
        }
        DttDecl::Mode(_) => d.clone(),
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Payload, b: &Payload) -> bool {
    match (a, b) {
        (Payload::Formula(x), Payload::Formula(y)) => x.alpha_eq(y),
        (Payload::Proof(x), Payload::Proof(y)) => hao::canonical_proof(x) == hao::canonical_proof(y),
        (Payload::Dtt(x), Payload::Dtt(y)) => x.alpha_eq(y),
        (Payload::Theory(xs), Payload::Theory(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| canonical_theory_decl(x) == canonical_theory_decl(y))
        }
        (Payload::DttFile(xs), Payload::DttFile(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| canonical_dtt_decl(x) == canonical_dtt_decl(y))
        }
        _ => a == b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(text: &str, c: Category) -> String {
        print(&parse(text, c).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(rt("(-> N N)", Category::Type), "(-> N N)");
        assert_eq!(rt("(* N (-> N N))", Category::Type), "(* N (-> N N))");
        assert_eq!(rt("(forall (x N) (= N x x))", Category::Formula), "(forall (x N) (= N x x))");
        assert!(parse("(ap zero zero)", Category::Term).is_ok());
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let printed = rt("(forall (x N) (exists (x N) (= N x x)))", Category::Formula);
        assert_eq!(printed, "(forall (x N) (exists (x' N) (= N x' x')))");
        let a = parse("(forall (x N) (exists (x N) (= N x x)))", Category::Formula).unwrap();
        let b = parse(&printed, Category::Formula).unwrap();
        assert!(alpha_eq(&a.payload, &b.payload));
    }

    #[test]
    fn errors_carry_spans_inside_the_input() {
        let text = "(forall (x N) (= N x))";
        let e = parse(text, Category::Formula).unwrap_err();
        assert!(e.span.end <= text.len());
    }
}
