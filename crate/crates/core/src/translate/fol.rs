//! HA^ω into a one-sorted first-order language with a membership
//! predicate. Finite types become closed class terms; quantifiers are
//! relativized to them. HA terms are carried over unchanged.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

use crate::hao::{FiniteType, Term};
use crate::logic::Formula;
use crate::syntax::hao::print_term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolTerm {
    /// The natural numbers.
    Omega,
    FunSet(Box<FolTerm>, Box<FolTerm>),
    Prod(Box<FolTerm>, Box<FolTerm>),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolFormula {
    False,
    Eq(FolTerm, FolTerm),
    Mem(FolTerm, FolTerm),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Imp(Box<FolFormula>, Box<FolFormula>),
    Forall(String, Box<FolFormula>),
    Exists(String, Box<FolFormula>),
}

pub fn type_to_fol(t: &FiniteType) -> FolTerm {
    match t {
        FiniteType::N => FolTerm::Omega,
        FiniteType::Arrow(a, b) => FolTerm::FunSet(Box::new(type_to_fol(a)), Box::new(type_to_fol(b))),
        FiniteType::Prod(a, b) => FolTerm::Prod(Box::new(type_to_fol(a)), Box::new(type_to_fol(b))),
    }
}

pub fn formula_to_fol(f: &Formula) -> FolFormula {
    let t = |g: &Formula| Box::new(formula_to_fol(g));
    let mem = |x: &str, ty: &FiniteType| FolFormula::Mem(FolTerm::Term(Term::var(x)), type_to_fol(ty));
    match f {
        Formula::False => FolFormula::False,
        Formula::Eq(_, a, b) => FolFormula::Eq(FolTerm::Term(a.clone()), FolTerm::Term(b.clone())),
        Formula::And(a, b) => FolFormula::And(t(a), t(b)),
        Formula::Or(a, b) => FolFormula::Or(t(a), t(b)),
        Formula::Imp(a, b) => FolFormula::Imp(t(a), t(b)),
        Formula::Forall(x, ty, body) => {
            FolFormula::Forall(x.clone(), Box::new(FolFormula::Imp(Box::new(mem(x, ty)), t(body))))
        }
        Formula::Exists(x, ty, body) => {
            FolFormula::Exists(x.clone(), Box::new(FolFormula::And(Box::new(mem(x, ty)), t(body))))
        }
    }
}

/// Every quantifier guards its variable with a membership premise.
pub fn is_relativized(f: &FolFormula) -> bool {
    let guarded = |x: &str, g: &FolFormula| matches!(g, FolFormula::Mem(FolTerm::Term(Term::Var(y)), _) if y == x);
    match f {
        FolFormula::False | FolFormula::Eq(..) | FolFormula::Mem(..) => true,
        FolFormula::And(a, b) | FolFormula::Or(a, b) | FolFormula::Imp(a, b) => is_relativized(a) && is_relativized(b),
        FolFormula::Forall(x, body) => match &**body {
            FolFormula::Imp(g, b) => guarded(x, g) && is_relativized(b),
            _ => false,
        },
        FolFormula::Exists(x, body) => match &**body {
            FolFormula::And(g, b) => guarded(x, g) && is_relativized(b),
            _ => false,
        },
    }
}

pub fn print_fol_term(t: &FolTerm) -> String {
    match t {
        FolTerm::Omega => String::from("omega"),
        FolTerm::FunSet(a, b) => format!("(funset {} {})", print_fol_term(a), print_fol_term(b)),
        FolTerm::Prod(a, b) => format!("(prod {} {})", print_fol_term(a), print_fol_term(b)),
        FolTerm::Term(t) => print_term(t),
    }
}

pub fn print_fol(f: &FolFormula) -> String {
    match f {
        FolFormula::False => String::from("false"),
        FolFormula::Eq(a, b) => format!("(= {} {})", print_fol_term(a), print_fol_term(b)),
        FolFormula::Mem(a, b) => format!("(in {} {})", print_fol_term(a), print_fol_term(b)),
        FolFormula::And(a, b) => format!("(and {} {})", print_fol(a), print_fol(b)),
        FolFormula::Or(a, b) => format!("(or {} {})", print_fol(a), print_fol(b)),
        FolFormula::Imp(a, b) => format!("(imp {} {})", print_fol(a), print_fol(b)),
        FolFormula::Forall(x, b) => format!("(forall {x} {})", print_fol(b)),
        FolFormula::Exists(x, b) => format!("(exists {x} {})", print_fol(b)),
    }
}
