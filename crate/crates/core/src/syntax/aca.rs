//! Concrete syntax for second-order arithmetic and `.aca` files.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::aca::{AcaDecl, AcaFormula, AcaTerm};
use crate::sexp::{arity, ident, Sexp, SyntaxError, SyntaxResult};

/// `add` and `mul` name the arithmetic operations in translations.
pub const ACA_KEYWORDS: &[&str] = &[
    "zero", "succ", "in", "false", "true", "and", "or", "imp", "iff", "not", "forall", "exists", "N", "Set", "add",
    "mul",
];

const MAX_NUMERAL: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarSort {
    Number,
    Set,
}

impl VarSort {
    fn as_str(self) -> &'static str {
        match self {
            VarSort::Number => "number",
            VarSort::Set => "set",
        }
    }
}

/// Binders in scope and the sorts fixed for free names by their first use.
#[derive(Default)]
struct Sorts {
    bound: Vec<(String, VarSort)>,
    free: BTreeMap<String, VarSort>,
}

impl Sorts {
    fn use_as(&mut self, s: &Sexp, x: &str, sort: VarSort) -> SyntaxResult<()> {
        let found = match self.bound.iter().rev().find(|(y, _)| y == x) {
            Some((_, so)) => *so,
            None => *self.free.entry(x.to_string()).or_insert(sort),
        };
        if found == sort {
            Ok(())
        } else {
            Err(SyntaxError::parse(
                s.span,
                format!("'{x}' is a {} variable, used as a {}", found.as_str(), sort.as_str()),
            ))
        }
    }
}

fn name(s: &Sexp) -> SyntaxResult<String> {
    ident(s, ACA_KEYWORDS)
}

fn term(s: &Sexp, sorts: &mut Sorts) -> SyntaxResult<AcaTerm> {
    if let Some(a) = s.atom() {
        if a.bytes().all(|c| c.is_ascii_digit()) {
            return match a.parse::<u64>() {
                Ok(n) if n <= MAX_NUMERAL => Ok(AcaTerm::numeral(n)),
                _ => Err(SyntaxError::parse(s.span, format!("numeral {a} exceeds {MAX_NUMERAL}"))),
            };
        }
        if a == "zero" {
            return Ok(AcaTerm::Zero);
        }
        let x = name(s)?;
        sorts.use_as(s, &x, VarSort::Number)?;
        return Ok(AcaTerm::Var(x));
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a number term"))?;
    match head {
        "succ" => {
            arity(s.span, head, args, 1)?;
            Ok(AcaTerm::Succ(Box::new(term(&args[0], sorts)?)))
        }
        "+" | "*" => {
            arity(s.span, head, args, 2)?;
            let (a, b) = (Box::new(term(&args[0], sorts)?), Box::new(term(&args[1], sorts)?));
            Ok(if head == "+" { AcaTerm::Add(a, b) } else { AcaTerm::Mul(a, b) })
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown term former '{head}'"))),
    }
}

fn formula(s: &Sexp, sorts: &mut Sorts) -> SyntaxResult<AcaFormula> {
    if let Some(a) = s.atom() {
        return match a {
            "false" => Ok(AcaFormula::False),
            "true" => Ok(AcaFormula::not(AcaFormula::False)),
            _ => Err(SyntaxError::parse(s.span, format!("expected a formula, found '{a}'"))),
        };
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a formula"))?;
    match head {
        "=" => {
            arity(s.span, head, args, 2)?;
            Ok(AcaFormula::Eq(term(&args[0], sorts)?, term(&args[1], sorts)?))
        }
        "in" => {
            arity(s.span, head, args, 2)?;
            let t = term(&args[0], sorts)?;
            let x = name(&args[1])?;
            sorts.use_as(&args[1], &x, VarSort::Set)?;
            Ok(AcaFormula::In(t, x))
        }
        "and" | "or" | "imp" | "iff" => {
            arity(s.span, head, args, 2)?;
            let a = formula(&args[0], sorts)?;
            let b = formula(&args[1], sorts)?;
            Ok(match head {
                "and" => AcaFormula::and(a, b),
                "or" => AcaFormula::or(a, b),
                "imp" => AcaFormula::imp(a, b),
                _ => AcaFormula::iff(a, b),
            })
        }
        "not" => {
            arity(s.span, head, args, 1)?;
            Ok(AcaFormula::not(formula(&args[0], sorts)?))
        }
        "forall" | "exists" => {
            arity(s.span, head, args, 2)?;
            let binder = args[0].expect_list("a binder (x N) or (X Set)")?;
            if binder.len() != 2 {
                return Err(SyntaxError::parse(args[0].span, "binder takes a name and N or Set"));
            }
            let x = name(&binder[0])?;
            let sort = match binder[1].atom() {
                Some("N") => VarSort::Number,
                Some("Set") => VarSort::Set,
                _ => return Err(SyntaxError::parse(binder[1].span, "binder sort must be N or Set")),
            };
            sorts.bound.push((x.clone(), sort));
            let body = formula(&args[1], sorts);
            sorts.bound.pop();
            let body = body?;
            Ok(match (head, sort) {
                ("forall", VarSort::Number) => AcaFormula::forall_n(&x, body),
                ("exists", VarSort::Number) => AcaFormula::exists_n(&x, body),
                ("forall", VarSort::Set) => AcaFormula::forall_s(&x, body),
                _ => AcaFormula::exists_s(&x, body),
            })
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown formula former '{head}'"))),
    }
}

pub fn parse_aca_formula(s: &Sexp) -> SyntaxResult<AcaFormula> {
    formula(s, &mut Sorts::default())
}

/// `(formula n φ)`, `(comprehension n x φ)` or `(induction n x φ)`.
pub fn parse_aca_decl(s: &Sexp) -> SyntaxResult<AcaDecl> {
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a declaration"))?;
    match head {
        "formula" => {
            arity(s.span, head, args, 2)?;
            let f = parse_aca_formula(&args[1])?;
            let fv = f.free_vars();
            if let Some(x) = fv.numbers.iter().chain(&fv.sets).next() {
                return Err(SyntaxError::parse(args[1].span, format!("formula must be closed, '{x}' is free")));
            }
            Ok(AcaDecl::Formula(name(&args[0])?, f))
        }
        "comprehension" | "induction" => {
            arity(s.span, head, args, 3)?;
            let var = name(&args[1])?;
            let mut sorts = Sorts::default();
            sorts.free.insert(var.clone(), VarSort::Number);
            let body = formula(&args[2], &mut sorts)?;
            let n = name(&args[0])?;
            if head == "comprehension" {
                if !body.is_arithmetical() {
                    return Err(SyntaxError::parse(args[2].span, "comprehension is only for arithmetical formulas"));
                }
                Ok(AcaDecl::Comprehension { name: n, var, body })
            } else {
                Ok(AcaDecl::Induction { name: n, var, body })
            }
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown declaration '{head}'"))),
    }
}

pub fn print_aca_term(t: &AcaTerm) -> String {
    if let Some(n) = t.as_numeral() {
        return n.to_string();
    }
    match t {
        AcaTerm::Var(x) => x.clone(),
        AcaTerm::Zero => String::from("0"),
        AcaTerm::Succ(a) => format!("(succ {})", print_aca_term(a)),
        AcaTerm::Add(a, b) => format!("(+ {} {})", print_aca_term(a), print_aca_term(b)),
        AcaTerm::Mul(a, b) => format!("(* {} {})", print_aca_term(a), print_aca_term(b)),
    }
}

fn as_iff(f: &AcaFormula) -> Option<(&AcaFormula, &AcaFormula)> {
    let AcaFormula::And(l, r) = f else { return None };
    let (AcaFormula::Imp(a, b), AcaFormula::Imp(b2, a2)) = (&**l, &**r) else { return None };
    (a == a2 && b == b2).then_some((&**a, &**b))
}

pub fn print_aca_formula(f: &AcaFormula) -> String {
    let p = print_aca_formula;
    if let Some((a, b)) = as_iff(f) {
        return format!("(iff {} {})", p(a), p(b));
    }
    match f {
        AcaFormula::False => String::from("false"),
        AcaFormula::Eq(a, b) => format!("(= {} {})", print_aca_term(a), print_aca_term(b)),
        AcaFormula::In(t, x) => format!("(in {} {x})", print_aca_term(t)),
        AcaFormula::Imp(a, b) if **b == AcaFormula::False => format!("(not {})", p(a)),
        AcaFormula::And(a, b) => format!("(and {} {})", p(a), p(b)),
        AcaFormula::Or(a, b) => format!("(or {} {})", p(a), p(b)),
        AcaFormula::Imp(a, b) => format!("(imp {} {})", p(a), p(b)),
        AcaFormula::ForallN(x, b) => format!("(forall ({x} N) {})", p(b)),
        AcaFormula::ExistsN(x, b) => format!("(exists ({x} N) {})", p(b)),
        AcaFormula::ForallS(x, b) => format!("(forall ({x} Set) {})", p(b)),
        AcaFormula::ExistsS(x, b) => format!("(exists ({x} Set) {})", p(b)),
    }
}

pub fn print_aca_decl(d: &AcaDecl) -> String {
    match d {
        AcaDecl::Formula(n, f) => format!("(formula {n} {})", print_aca_formula(f)),
        AcaDecl::Comprehension { name, var, body } => {
            format!("(comprehension {name} {var} {})", print_aca_formula(body))
        }
        AcaDecl::Induction { name, var, body } => format!("(induction {name} {var} {})", print_aca_formula(body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::read_one;

    fn decl(text: &str) -> SyntaxResult<AcaDecl> {
        parse_aca_decl(&read_one(text).unwrap())
    }

    #[test]
    fn round_trips() {
        for text in [
            "(formula f (forall (x N) (exists (y N) (= (+ x 1) y))))",
            "(formula g (forall (X Set) (iff (in 0 X) (not (not (in 0 X))))))",
            "(comprehension evens x (exists (z N) (= x (* 2 z))))",
            "(induction ind x (or (= x 0) (exists (p N) (= x (succ p)))))",
        ] {
            assert_eq!(print_aca_decl(&decl(text).unwrap()), text);
        }
    }

    #[test]
    fn sorts_are_enforced() {
        assert!(decl("(formula f (forall (x N) (in 0 x)))").is_err());
        assert!(decl("(comprehension c x (in 0 x))").is_err());
        assert!(decl("(formula f (= x 0))").is_err());
    }

    #[test]
    fn comprehension_must_be_arithmetical() {
        assert!(decl("(comprehension c x (exists (Y Set) (in x Y)))").is_err());
        assert!(decl("(comprehension c x (in x Y))").is_ok());
    }
}
