//! A universe-free dependent type checker with three sort disciplines.
//!
//! In `Mltt` mode propositions are types: the proposition formers are read
//! as Σ, +, Π and Id, and every type classifies as a set. `Mtt` and `Emtt`
//! keep four sorts and only eliminate propositions towards propositions.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub mod check;
pub mod conv;
pub mod expr;
pub mod file;

pub use check::{classify, desugar, infer, is_hprop, lem_type, Kernel};
pub use conv::{convertible, normalize, whnf};
pub use expr::{Binder, Expr};
pub use file::{check_dtt, check_dtt_observed, parse_dtt, DttDecl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    PropS,
    Prop,
    Set,
    Coll,
}

impl Sort {
    /// `PropS ≤ Prop ≤ Coll`, `PropS ≤ Set ≤ Coll`.
    pub fn le(self, other: Sort) -> bool {
        use Sort::*;
        matches!((self, other), (PropS, _) | (Prop, Prop) | (Prop, Coll) | (Set, Set) | (Set, Coll) | (Coll, Coll))
    }

    /// Least upper bound.
    pub fn join(self, other: Sort) -> Sort {
        if self.le(other) {
            other
        } else if other.le(self) {
            self
        } else {
            Sort::Coll
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sort::PropS => "props",
            Sort::Prop => "prop",
            Sort::Set => "set",
            Sort::Coll => "coll",
        }
    }

    pub fn from_name(s: &str) -> Option<Sort> {
        Some(match s {
            "props" => Sort::PropS,
            "prop" => Sort::Prop,
            "set" => Sort::Set,
            "coll" => Sort::Coll,
            _ => return None,
        })
    }

    pub const ALL: [Sort; 4] = [Sort::PropS, Sort::Prop, Sort::Set, Sort::Coll];
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::PropS => "PropS",
            Sort::Prop => "Prop",
            Sort::Set => "Set",
            Sort::Coll => "Coll",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SortMode {
    Mltt,
    Mtt,
    Emtt,
}

impl SortMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SortMode::Mltt => "mltt",
            SortMode::Mtt => "mtt",
            SortMode::Emtt => "emtt",
        }
    }

    pub fn from_name(s: &str) -> Option<SortMode> {
        Some(match s {
            "mltt" => SortMode::Mltt,
            "mtt" => SortMode::Mtt,
            "emtt" => SortMode::Emtt,
            _ => return None,
        })
    }
}

impl fmt::Display for SortMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Term(String, Expr),
    Family { name: String, params: Vec<(String, Expr)>, sort: Sort },
}

/// Typing context, newest entry last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ctx {
    entries: Vec<Entry>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn with_term(&self, x: &str, ty: Expr) -> Ctx {
        let mut c = self.clone();
        c.entries.push(Entry::Term(String::from(x), ty));
        c
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn term(&self, x: &str) -> Option<&Expr> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Term(y, ty) if y == x => Some(ty),
            _ => None,
        })
    }

    pub fn family(&self, x: &str) -> Option<(&[(String, Expr)], Sort)> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Family { name, params, sort } if name == x => Some((params.as_slice(), *sort)),
            _ => None,
        })
    }

    pub fn contains(&self, x: &str) -> bool {
        self.entries.iter().any(|e| match e {
            Entry::Term(y, _) => y == x,
            Entry::Family { name, .. } => name == x,
        })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// `base`, primed until it is not declared.
    pub fn fresh(&self, base: &str) -> String {
        crate::names::fresh(base, |c| self.contains(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DttError {
    Unbound(String),
    UnknownFamily(String),
    FamilyArity {
        name: String,
        expected: usize,
        found: usize,
    },
    NotAType(Box<Expr>),
    /// A type former in term position.
    NotATerm(Box<Expr>),
    /// An eliminator of a proposition aimed at a motive that is not one.
    SortViolation {
        eliminator: &'static str,
        motive_sort: Sort,
    },
    Mismatch {
        expected: Box<Expr>,
        found: Box<Expr>,
    },
    Shape {
        expected: &'static str,
        found: Box<Expr>,
    },
    CannotInfer(Box<Expr>),
    ModeUnavailable {
        former: &'static str,
        mode: SortMode,
    },
    BadSort {
        position: &'static str,
        sort: Sort,
    },
    NotSmall(Box<Expr>),
    LemRestricted(Sort),
    Fuel,
}

impl fmt::Display for DttError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::syntax::dtt::print_expr as p;
        match self {
            DttError::Unbound(x) => write!(f, "unbound variable '{x}'"),
            DttError::UnknownFamily(x) => write!(f, "unknown type family '{x}'"),
            DttError::FamilyArity { name, expected, found } => {
                write!(f, "family '{name}' takes {expected} argument(s), found {found}")
            }
            DttError::NotAType(e) => write!(f, "{} is not a type", p(e)),
            DttError::NotATerm(e) => write!(f, "{} is a type, not a term", p(e)),
            DttError::SortViolation { eliminator, motive_sort } => write!(
                f,
                "sort violation: {eliminator} eliminates a proposition towards a motive of sort {motive_sort}"
            ),
            DttError::Mismatch { expected, found } => {
                write!(f, "type mismatch: expected {}, found {}", p(expected), p(found))
            }
            DttError::Shape { expected, found } => write!(f, "expected {expected}, found {}", p(found)),
            DttError::CannotInfer(e) => write!(f, "cannot infer a type for {}; annotate it", p(e)),
            DttError::ModeUnavailable { former, mode } => write!(f, "{former} is not available in {mode} mode"),
            DttError::BadSort { position, sort } => write!(f, "{position} has sort {sort}"),
            DttError::NotSmall(e) => write!(f, "{} is not a small proposition", p(e)),
            DttError::LemRestricted(s) => {
                write!(f, "excluded middle is only stated for propositions, found sort {s}")
            }
            DttError::Fuel => f.write_str("conversion fuel exhausted"),
        }
    }
}

pub type DttResult<T> = Result<T, DttError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_lattice() {
        use Sort::*;
        let le: Vec<(Sort, Sort)> =
            Sort::ALL.iter().flat_map(|a| Sort::ALL.iter().map(move |b| (*a, *b))).filter(|(a, b)| a.le(*b)).collect();
        let expected = [
            (PropS, PropS),
            (PropS, Prop),
            (PropS, Set),
            (PropS, Coll),
            (Prop, Prop),
            (Prop, Coll),
            (Set, Set),
            (Set, Coll),
            (Coll, Coll),
        ];
        assert_eq!(le, expected);
        assert_eq!(Prop.join(Set), Coll);
        assert_eq!(PropS.join(Set), Set);
    }
}
