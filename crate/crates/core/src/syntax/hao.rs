//! Concrete syntax for finite types, terms, formulas, proofs and `.hao`
//! theory files.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::hao::{FiniteType, Term};
use crate::logic::formula::{expand_exists_unique, match_exists_unique, Formula};
use crate::logic::proof::{AxiomInst, Proof};
use crate::names;
use crate::sexp::{arity, ident, ErrorKind, Sexp, SexpKind, Span, SyntaxError, SyntaxResult};

pub const TERM_KEYWORDS: &[&str] = &["zero", "succ", "k", "s", "rec", "pair", "fst", "snd", "ap", "N"];

/// Names introduced by `define`, substituted while parsing.
pub type Definitions = BTreeMap<String, Term>;

/// Parser state: definitions in force and the variables bound around the
/// current position, which shadow definitions.
#[derive(Clone, Debug, Default)]
pub struct Scope<'a> {
    pub defs: Option<&'a Definitions>,
    bound: Vec<String>,
}

impl<'a> Scope<'a> {
    pub fn new(defs: &'a Definitions) -> Scope<'a> {
        Scope { defs: Some(defs), bound: Vec::new() }
    }

    fn lookup(&self, name: &str) -> Option<&Term> {
        if self.bound.iter().any(|b| b == name) {
            return None;
        }
        self.defs?.get(name)
    }

    fn with<T>(&mut self, names: &[&str], k: impl FnOnce(&mut Self) -> T) -> T {
        let n = self.bound.len();
        self.bound.extend(names.iter().map(|s| s.to_string()));
        let r = k(self);
        self.bound.truncate(n);
        r
    }
}

pub fn parse_type(s: &Sexp) -> SyntaxResult<FiniteType> {
    if let Some(a) = s.atom() {
        return if a == "N" {
            Ok(FiniteType::N)
        } else {
            Err(SyntaxError::parse(s.span, format!("unknown type '{a}'")))
        };
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a type"))?;
    match head {
        "->" | "*" => {
            arity(s.span, head, args, 2)?;
            let l = parse_type(&args[0])?;
            let r = parse_type(&args[1])?;
            Ok(if head == "->" { FiniteType::arrow(l, r) } else { FiniteType::prod(l, r) })
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown type former '{head}'"))),
    }
}

fn types<const K: usize>(s: &Sexp, head: &str, args: &[Sexp]) -> SyntaxResult<[FiniteType; K]> {
    arity(s.span, head, args, K)?;
    let mut out: [FiniteType; K] = core::array::from_fn(|_| FiniteType::N);
    for (slot, a) in out.iter_mut().zip(args) {
        *slot = parse_type(a)?;
    }
    Ok(out)
}

pub fn parse_term(s: &Sexp, scope: &Scope<'_>) -> SyntaxResult<Term> {
    if let Some(a) = s.atom() {
        if let Ok(n) = a.parse::<u64>() {
            if n > 10_000 {
                return Err(SyntaxError::parse(s.span, "numeral too large"));
            }
            return Ok(Term::numeral(n));
        }
        return match a {
            "zero" => Ok(Term::Zero),
            "succ" => Ok(Term::Succ),
            _ => {
                let x = ident(s, TERM_KEYWORDS)?;
                Ok(scope.lookup(&x).cloned().unwrap_or(Term::Var(x)))
            }
        };
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a term"))?;
    match head {
        "k" => {
            let [a, b] = types(s, head, args)?;
            Ok(Term::K(a, b))
        }
        "s" => {
            let [a, b, c] = types(s, head, args)?;
            Ok(Term::S(a, b, c))
        }
        "rec" => {
            let [a] = types(s, head, args)?;
            Ok(Term::Rec(a))
        }
        "pair" | "fst" | "snd" => {
            let [a, b] = types(s, head, args)?;
            Ok(match head {
                "pair" => Term::Pair(a, b),
                "fst" => Term::Fst(a, b),
                _ => Term::Snd(a, b),
            })
        }
        "ap" => {
            if args.len() < 2 {
                return Err(SyntaxError::parse(s.span, "'ap' takes a function and at least one argument"));
            }
            let mut t = parse_term(&args[0], scope)?;
            for a in &args[1..] {
                t = Term::ap(t, parse_term(a, scope)?);
            }
            Ok(t)
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown term former '{head}'"))),
    }
}

fn binder(s: &Sexp) -> SyntaxResult<(String, FiniteType)> {
    let items = s.expect_list("a binder (x type)")?;
    if items.len() != 2 {
        return Err(SyntaxError::parse(s.span, "a binder is (name type)"));
    }
    Ok((ident(&items[0], TERM_KEYWORDS)?, parse_type(&items[1])?))
}

/// Binders followed by a body: `(x σ) (y τ) ... body`, names pairwise distinct.
fn binders_then_body<'s>(s: &Sexp, args: &'s [Sexp]) -> SyntaxResult<(Vec<(String, FiniteType)>, &'s Sexp)> {
    let Some((body, bs)) = args.split_last() else {
        return Err(SyntaxError::parse(s.span, "missing body"));
    };
    if bs.is_empty() {
        return Err(SyntaxError::parse(s.span, "quantifier needs at least one binder"));
    }
    let mut out: Vec<(String, FiniteType)> = Vec::new();
    for b in bs {
        let (x, ty) = binder(b)?;
        if out.iter().any(|(y, _)| *y == x) {
            return Err(SyntaxError {
                kind: ErrorKind::DuplicateBinder,
                span: b.span,
                message: format!("'{x}' is bound twice in one binder list"),
            });
        }
        out.push((x, ty));
    }
    Ok((out, body))
}

pub fn parse_formula(s: &Sexp, scope: &mut Scope<'_>) -> SyntaxResult<Formula> {
    if let Some(a) = s.atom() {
        return match a {
            "false" => Ok(Formula::False),
            "true" => Ok(Formula::not(Formula::False)),
            _ => Err(SyntaxError::parse(s.span, format!("expected a formula, found '{a}'"))),
        };
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a formula"))?;
    match head {
        "=" => {
            arity(s.span, head, args, 3)?;
            Ok(Formula::Eq(parse_type(&args[0])?, parse_term(&args[1], scope)?, parse_term(&args[2], scope)?))
        }
        "and" | "or" | "imp" | "iff" => {
            arity(s.span, head, args, 2)?;
            let a = parse_formula(&args[0], scope)?;
            let b = parse_formula(&args[1], scope)?;
            Ok(match head {
                "and" => Formula::and(a, b),
                "or" => Formula::or(a, b),
                "imp" => Formula::imp(a, b),
                _ => Formula::iff(a, b),
            })
        }
        "not" => {
            arity(s.span, head, args, 1)?;
            Ok(Formula::not(parse_formula(&args[0], scope)?))
        }
        "forall" | "exists" | "exists!" => {
            let (bs, body) = binders_then_body(s, args)?;
            let names: Vec<&str> = bs.iter().map(|(x, _)| x.as_str()).collect();
            let mut f = scope.with(&names, |sc| parse_formula(body, sc))?;
            for (x, ty) in bs.into_iter().rev() {
                f = match head {
                    "forall" => Formula::Forall(x, ty, Box::new(f)),
                    "exists" => Formula::Exists(x, ty, Box::new(f)),
                    _ => expand_exists_unique(&x, &ty, &f),
                };
            }
            Ok(f)
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown formula former '{head}'"))),
    }
}

fn label(s: &Sexp) -> SyntaxResult<String> {
    ident(s, &[])
}

fn var_name(s: &Sexp) -> SyntaxResult<String> {
    ident(s, TERM_KEYWORDS)
}

/// `(name body)` or `(a b body)` as used by eliminators.
fn named_branch(s: &Sexp, n: usize) -> SyntaxResult<(&[Sexp], &Sexp)> {
    let items = s.expect_list("a branch")?;
    if items.len() != n + 1 {
        return Err(SyntaxError::parse(s.span, format!("branch takes {n} name(s) and a body")));
    }
    Ok((&items[..n], &items[n]))
}

pub fn parse_proof(s: &Sexp, scope: &mut Scope<'_>) -> SyntaxResult<Proof> {
    if s.atom().is_some() {
        return Ok(Proof::Hyp(label(s)?));
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a proof"))?;
    let p = |i: usize, sc: &mut Scope<'_>| parse_proof(&args[i], sc).map(Box::new);
    Ok(match head {
        "hyp" | "cite" => {
            arity(s.span, head, args, 1)?;
            let l = label(&args[0])?;
            if head == "hyp" {
                Proof::Hyp(l)
            } else {
                Proof::Cite(l)
            }
        }
        "and-i" | "imp-e" => {
            arity(s.span, head, args, 2)?;
            let (a, b) = (p(0, scope)?, p(1, scope)?);
            if head == "and-i" {
                Proof::AndI(a, b)
            } else {
                Proof::ImpE(a, b)
            }
        }
        "and-e1" | "and-e2" | "or-i1" | "or-i2" | "false-e" => {
            arity(s.span, head, args, 1)?;
            let a = p(0, scope)?;
            match head {
                "and-e1" => Proof::AndE1(a),
                "and-e2" => Proof::AndE2(a),
                "or-i1" => Proof::OrI1(a),
                "or-i2" => Proof::OrI2(a),
                _ => Proof::FalseE(a),
            }
        }
        "or-e" => {
            arity(s.span, head, args, 3)?;
            let scrutinee = p(0, scope)?;
            let (l, lb) = named_branch(&args[1], 1)?;
            let (r, rb) = named_branch(&args[2], 1)?;
            Proof::OrE {
                scrutinee,
                left: (label(&l[0])?, Box::new(parse_proof(lb, scope)?)),
                right: (label(&r[0])?, Box::new(parse_proof(rb, scope)?)),
            }
        }
        "imp-i" => {
            arity(s.span, head, args, 2)?;
            Proof::ImpI(label(&args[0])?, p(1, scope)?)
        }
        "forall-i" => {
            arity(s.span, head, args, 2)?;
            let x = var_name(&args[0])?;
            let body = scope.with(&[&x], |sc| parse_proof(&args[1], sc))?;
            Proof::ForallI(x, Box::new(body))
        }
        "forall-e" => {
            arity(s.span, head, args, 2)?;
            Proof::ForallE(p(0, scope)?, parse_term(&args[1], scope)?)
        }
        "exists-i" => {
            arity(s.span, head, args, 2)?;
            Proof::ExistsI(parse_term(&args[0], scope)?, p(1, scope)?)
        }
        "exists-e" => {
            arity(s.span, head, args, 2)?;
            let scrutinee = p(0, scope)?;
            let (names, body) = named_branch(&args[1], 2)?;
            let var = var_name(&names[0])?;
            let label = label(&names[1])?;
            let body = scope.with(&[&var], |sc| parse_proof(body, sc))?;
            Proof::ExistsE { scrutinee, var, label, body: Box::new(body) }
        }
        "refl" => {
            arity(s.span, head, args, 1)?;
            Proof::Refl(parse_term(&args[0], scope)?)
        }
        "subst" => {
            arity(s.span, head, args, 4)?;
            let (var, ty) = binder(&args[0])?;
            let motive = scope.with(&[&var], |sc| parse_formula(&args[1], sc))?;
            Proof::EqSubst { var, ty, motive, eq: p(2, scope)?, base: p(3, scope)? }
        }
        "axiom" => Proof::Axiom(parse_axiom(s, args, scope)?),
        "ind" => {
            arity(s.span, head, args, 4)?;
            let vs = args[0].expect_list("(n)")?;
            if vs.len() != 1 {
                return Err(SyntaxError::parse(args[0].span, "induction binds one variable"));
            }
            let var = var_name(&vs[0])?;
            let motive = scope.with(&[&var], |sc| parse_formula(&args[1], sc))?;
            let base = p(2, scope)?;
            let (names, step) = named_branch(&args[3], 2)?;
            let step_var = var_name(&names[0])?;
            let step_label = label(&names[1])?;
            let step = scope.with(&[&step_var], |sc| parse_proof(step, sc))?;
            Proof::Induction { var, motive, base, step_var, step_label, step: Box::new(step) }
        }
        "lem" => {
            arity(s.span, head, args, 1)?;
            Proof::Lem(parse_formula(&args[0], scope)?)
        }
        "irc" => {
            arity(s.span, head, args, 4)?;
            let (x, x_ty) = binder(&args[0])?;
            let (y, y_ty) = binder(&args[1])?;
            if x == y {
                return Err(SyntaxError {
                    kind: ErrorKind::DuplicateBinder,
                    span: args[1].span,
                    message: format!("'{x}' is bound twice in one binder list"),
                });
            }
            let body = scope.with(&[&x, &y], |sc| parse_formula(&args[2], sc))?;
            Proof::Irc { x, x_ty, y, y_ty, body, proof: p(3, scope)? }
        }
        "have" => {
            arity(s.span, head, args, 4)?;
            Proof::Have(label(&args[0])?, parse_formula(&args[1], scope)?, p(2, scope)?, p(3, scope)?)
        }
        "the" => {
            arity(s.span, head, args, 2)?;
            Proof::Annot(parse_formula(&args[0], scope)?, p(1, scope)?)
        }
        _ => return Err(SyntaxError::parse(s.span, format!("unknown proof rule '{head}'"))),
    })
}

fn parse_axiom(s: &Sexp, args: &[Sexp], scope: &mut Scope<'_>) -> SyntaxResult<AxiomInst> {
    let Some((name, rest)) = args.split_first() else {
        return Err(SyntaxError::parse(s.span, "axiom needs a name"));
    };
    let name = name.expect_atom("an axiom name")?;
    let tys = |n: usize| -> SyntaxResult<Vec<FiniteType>> {
        arity(s.span, name, rest, n)?;
        rest.iter().map(parse_type).collect()
    };
    Ok(match name {
        "succ-ne-zero" => {
            tys(0)?;
            AxiomInst::SuccNeZero
        }
        "succ-inj" => {
            tys(0)?;
            AxiomInst::SuccInj
        }
        "k-def" | "fst-def" | "snd-def" => {
            let mut t = tys(2)?;
            let b = t.pop().unwrap();
            let a = t.pop().unwrap();
            match name {
                "k-def" => AxiomInst::KDef(a, b),
                "fst-def" => AxiomInst::FstDef(a, b),
                _ => AxiomInst::SndDef(a, b),
            }
        }
        "s-def" => {
            let mut t = tys(3)?;
            let c = t.pop().unwrap();
            let b = t.pop().unwrap();
            let a = t.pop().unwrap();
            AxiomInst::SDef(a, b, c)
        }
        "rec-zero" | "rec-succ" => {
            let a = tys(1)?.pop().unwrap();
            if name == "rec-zero" {
                AxiomInst::RecZero(a)
            } else {
                AxiomInst::RecSucc(a)
            }
        }
        "ac" | "ac!" => {
            arity(s.span, name, rest, 3)?;
            let (x, x_ty) = binder(&rest[0])?;
            let (y, y_ty) = binder(&rest[1])?;
            if x == y {
                return Err(SyntaxError {
                    kind: ErrorKind::DuplicateBinder,
                    span: rest[1].span,
                    message: format!("'{x}' is bound twice in one binder list"),
                });
            }
            let body = scope.with(&[&x, &y], |sc| parse_formula(&rest[2], sc))?;
            if name == "ac" {
                AxiomInst::Ac { x, x_ty, y, y_ty, body }
            } else {
                AxiomInst::AcBang { x, x_ty, y, y_ty, body }
            }
        }
        _ => return Err(SyntaxError::parse(args[0].span, format!("unknown axiom '{name}'"))),
    })
}

pub fn print_type(t: &FiniteType) -> String {
    match t {
        FiniteType::N => String::from("N"),
        FiniteType::Arrow(a, b) => format!("(-> {} {})", print_type(a), print_type(b)),
        FiniteType::Prod(a, b) => format!("(* {} {})", print_type(a), print_type(b)),
    }
}

pub fn print_term(t: &Term) -> String {
    if let Some(n) = t.as_numeral() {
        return n.to_string();
    }
    match t {
        Term::Var(x) => x.clone(),
        Term::Zero => String::from("0"),
        Term::Succ => String::from("succ"),
        Term::K(a, b) => format!("(k {} {})", print_type(a), print_type(b)),
        Term::S(a, b, c) => format!("(s {} {} {})", print_type(a), print_type(b), print_type(c)),
        Term::Rec(a) => format!("(rec {})", print_type(a)),
        Term::Pair(a, b) => format!("(pair {} {})", print_type(a), print_type(b)),
        Term::Fst(a, b) => format!("(fst {} {})", print_type(a), print_type(b)),
        Term::Snd(a, b) => format!("(snd {} {})", print_type(a), print_type(b)),
        Term::Ap(..) => {
            let (head, args) = t.spine();
            let mut out = format!("(ap {}", print_term(head));
            for a in args {
                out.push(' ');
                out.push_str(&print_term(a));
            }
            out.push(')');
            out
        }
    }
}

/// Prints a formula, renaming binders that shadow an enclosing binder and
/// re-sugaring `not`, `iff` and `exists!`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut Vec::new(), &mut out);
    out
}

fn rename_binder(x: &str, body: &Formula, bound: &[String]) -> (String, Formula) {
    if !bound.iter().any(|b| b == x) {
        return (x.to_string(), body.clone());
    }
    let mut taken = BTreeSet::new();
    body.all_names(&mut taken);
    let x2 = names::prime_away(x, |c| taken.contains(c) || bound.iter().any(|b| b == c));
    let renamed = body.subst(x, &Term::var(&x2));
    (x2, renamed)
}

fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(l, r) = f else { return None };
    let (Formula::Imp(a, b), Formula::Imp(b2, a2)) = (&**l, &**r) else { return None };
    (a.alpha_eq(a2) && b.alpha_eq(b2)).then_some((&**a, &**b))
}

fn write_formula(f: &Formula, bound: &mut Vec<String>, out: &mut String) {
    if let Some((y, ty, body)) = match_exists_unique(f) {
        let (y, body) = rename_binder(y, body, bound);
        out.push_str(&format!("(exists! ({y} {}) ", print_type(ty)));
        bound.push(y);
        write_formula(&body, bound, out);
        bound.pop();
        out.push(')');
        return;
    }
    if let Some((a, b)) = as_iff(f) {
        out.push_str("(iff ");
        write_formula(a, bound, out);
        out.push(' ');
        write_formula(b, bound, out);
        out.push(')');
        return;
    }
    match f {
        Formula::False => out.push_str("false"),
        Formula::Eq(ty, l, r) => {
            out.push_str(&format!("(= {} {} {})", print_type(ty), print_term(l), print_term(r)));
        }
        Formula::Imp(a, b) if **b == Formula::False => {
            out.push_str("(not ");
            write_formula(a, bound, out);
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            let head = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "imp",
            };
            out.push('(');
            out.push_str(head);
            out.push(' ');
            write_formula(a, bound, out);
            out.push(' ');
            write_formula(b, bound, out);
            out.push(')');
        }
        Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
            let head = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            let (x, body) = rename_binder(x, body, bound);
            out.push_str(&format!("({head} ({x} {}) ", print_type(ty)));
            bound.push(x);
            write_formula(&body, bound, out);
            bound.pop();
            out.push(')');
        }
    }
}

pub fn print_axiom(a: &AxiomInst) -> String {
    let tys = |ts: &[&FiniteType]| {
        let mut s = format!("(axiom {}", a.name());
        for t in ts {
            s.push(' ');
            s.push_str(&print_type(t));
        }
        s.push(')');
        s
    };
    match a {
        AxiomInst::SuccNeZero | AxiomInst::SuccInj => tys(&[]),
        AxiomInst::KDef(x, y) | AxiomInst::FstDef(x, y) | AxiomInst::SndDef(x, y) => tys(&[x, y]),
        AxiomInst::SDef(x, y, z) => tys(&[x, y, z]),
        AxiomInst::RecZero(x) | AxiomInst::RecSucc(x) => tys(&[x]),
        AxiomInst::Ac { x, x_ty, y, y_ty, body } | AxiomInst::AcBang { x, x_ty, y, y_ty, body } => format!(
            "(axiom {} ({x} {}) ({y} {}) {})",
            a.name(),
            print_type(x_ty),
            print_type(y_ty),
            print_formula(body)
        ),
    }
}

pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_proof(p, &mut out);
    out
}

fn write_proof(p: &Proof, out: &mut String) {
    let open = |out: &mut String, head: &str| {
        out.push('(');
        out.push_str(head);
    };
    let sub = |out: &mut String, q: &Proof| {
        out.push(' ');
        write_proof(q, out);
    };
    let text = |out: &mut String, s: &str| {
        out.push(' ');
        out.push_str(s);
    };
    match p {
        Proof::Hyp(l) => {
            out.push_str(l);
            return;
        }
        Proof::Cite(n) => {
            open(out, "cite");
            text(out, n);
        }
        Proof::AndI(a, b) | Proof::ImpE(a, b) => {
            open(out, p.rule_name());
            sub(out, a);
            sub(out, b);
        }
        Proof::AndE1(a) | Proof::AndE2(a) | Proof::OrI1(a) | Proof::OrI2(a) | Proof::FalseE(a) => {
            open(out, p.rule_name());
            sub(out, a);
        }
        Proof::OrE { scrutinee, left, right } => {
            open(out, "or-e");
            sub(out, scrutinee);
            for (l, q) in [left, right] {
                out.push_str(&format!(" ({l}"));
                sub(out, q);
                out.push(')');
            }
        }
        Proof::ImpI(l, a) => {
            open(out, "imp-i");
            text(out, l);
            sub(out, a);
        }
        Proof::ForallI(x, a) => {
            open(out, "forall-i");
            text(out, x);
            sub(out, a);
        }
        Proof::ForallE(a, t) => {
            open(out, "forall-e");
            sub(out, a);
            text(out, &print_term(t));
        }
        Proof::ExistsI(t, a) => {
            open(out, "exists-i");
            text(out, &print_term(t));
            sub(out, a);
        }
        Proof::ExistsE { scrutinee, var, label, body } => {
            open(out, "exists-e");
            sub(out, scrutinee);
            out.push_str(&format!(" ({var} {label}"));
            sub(out, body);
            out.push(')');
        }
        Proof::Refl(t) => {
            open(out, "refl");
            text(out, &print_term(t));
        }
        Proof::EqSubst { var, ty, motive, eq, base } => {
            open(out, "subst");
            out.push_str(&format!(" ({var} {})", print_type(ty)));
            text(out, &print_formula(motive));
            sub(out, eq);
            sub(out, base);
        }
        Proof::Axiom(a) => {
            out.push_str(&print_axiom(a));
            return;
        }
        Proof::Induction { var, motive, base, step_var, step_label, step } => {
            open(out, "ind");
            out.push_str(&format!(" ({var})"));
            text(out, &print_formula(motive));
            sub(out, base);
            out.push_str(&format!(" ({step_var} {step_label}"));
            sub(out, step);
            out.push(')');
        }
        Proof::Lem(f) => {
            open(out, "lem");
            text(out, &print_formula(f));
        }
        Proof::Irc { x, x_ty, y, y_ty, body, proof } => {
            open(out, "irc");
            out.push_str(&format!(" ({x} {}) ({y} {})", print_type(x_ty), print_type(y_ty)));
            text(out, &print_formula(body));
            sub(out, proof);
        }
        Proof::Have(l, f, a, b) => {
            open(out, "have");
            text(out, l);
            text(out, &print_formula(f));
            sub(out, a);
            sub(out, b);
        }
        Proof::Annot(f, a) => {
            open(out, "the");
            text(out, &print_formula(f));
            sub(out, a);
        }
    }
    out.push(')');
}

/// Replaces every embedded formula by its canonical form, for α-comparison.
pub fn canonical_proof(p: &Proof) -> Proof {
    let c = |q: &Proof| Box::new(canonical_proof(q));
    match p {
        Proof::Hyp(_) | Proof::Cite(_) | Proof::Refl(_) => p.clone(),
        Proof::AndI(a, b) => Proof::AndI(c(a), c(b)),
        Proof::ImpE(a, b) => Proof::ImpE(c(a), c(b)),
        Proof::AndE1(a) => Proof::AndE1(c(a)),
        Proof::AndE2(a) => Proof::AndE2(c(a)),
        Proof::OrI1(a) => Proof::OrI1(c(a)),
        Proof::OrI2(a) => Proof::OrI2(c(a)),
        Proof::FalseE(a) => Proof::FalseE(c(a)),
        Proof::OrE { scrutinee, left, right } => Proof::OrE {
            scrutinee: c(scrutinee),
            left: (left.0.clone(), c(&left.1)),
            right: (right.0.clone(), c(&right.1)),
        },
        Proof::ImpI(l, a) => Proof::ImpI(l.clone(), c(a)),
        Proof::ForallI(x, a) => Proof::ForallI(x.clone(), c(a)),
        Proof::ForallE(a, t) => Proof::ForallE(c(a), t.clone()),
        Proof::ExistsI(t, a) => Proof::ExistsI(t.clone(), c(a)),
        Proof::ExistsE { scrutinee, var, label, body } => {
            Proof::ExistsE { scrutinee: c(scrutinee), var: var.clone(), label: label.clone(), body: c(body) }
        }
        Proof::EqSubst { var, ty, motive, eq, base } => {
            Proof::EqSubst { var: var.clone(), ty: ty.clone(), motive: motive.canonical(), eq: c(eq), base: c(base) }
        }
        Proof::Axiom(a) => Proof::Axiom(match a {
            AxiomInst::Ac { x, x_ty, y, y_ty, body } => AxiomInst::Ac {
                x: x.clone(),
                x_ty: x_ty.clone(),
                y: y.clone(),
                y_ty: y_ty.clone(),
                body: body.canonical(),
            },
            AxiomInst::AcBang { x, x_ty, y, y_ty, body } => AxiomInst::AcBang {
                x: x.clone(),
                x_ty: x_ty.clone(),
                y: y.clone(),
                y_ty: y_ty.clone(),
                body: body.canonical(),
            },
            other => other.clone(),
        }),
        Proof::Induction { var, motive, base, step_var, step_label, step } => Proof::Induction {
            var: var.clone(),
            motive: motive.canonical(),
            base: c(base),
            step_var: step_var.clone(),
            step_label: step_label.clone(),
            step: c(step),
        },
        Proof::Lem(f) => Proof::Lem(f.canonical()),
        Proof::Irc { x, x_ty, y, y_ty, body, proof } => Proof::Irc {
            x: x.clone(),
            x_ty: x_ty.clone(),
            y: y.clone(),
            y_ty: y_ty.clone(),
            body: body.canonical(),
            proof: c(proof),
        },
        Proof::Have(l, f, a, b) => Proof::Have(l.clone(), f.canonical(), c(a), c(b)),
        Proof::Annot(f, a) => Proof::Annot(f.canonical(), c(a)),
    }
}

/// Declarations of a `.hao` theory file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryDecl {
    /// Replaces the active axiom profile with the listed flags.
    Profile(Vec<String>),
    Define(String, Term),
    Lemma(String, Formula, Proof),
    /// A statement checked for well-formedness only.
    Formula(String, Formula),
    /// A derivation that must fail to check.
    Reject(String, Formula, Proof),
}

impl TheoryDecl {
    pub fn kind(&self) -> &'static str {
        match self {
            TheoryDecl::Profile(_) => "profile",
            TheoryDecl::Define(..) => "define",
            TheoryDecl::Lemma(..) => "lemma",
            TheoryDecl::Formula(..) => "formula",
            TheoryDecl::Reject(..) => "reject",
        }
    }
}

/// One top-level declaration with its position. Parse failures are kept
/// so they can be reported alongside the declarations that did parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item<D> {
    pub name: String,
    pub kind: String,
    pub span: Span,
    pub decl: Result<D, SyntaxError>,
}

/// Name and kind of a declaration form, read without parsing its body.
pub fn item_header(s: &Sexp) -> (String, String) {
    match s.head() {
        Some((head, args)) => {
            let name = args.first().and_then(Sexp::atom).filter(|a| crate::sexp::is_ident(a));
            (name.unwrap_or(head).to_string(), head.to_string())
        }
        None => (String::from("?"), String::from("?")),
    }
}

pub const PROFILE_FLAGS: &[&str] = &["lem", "ac", "ac!", "irc!", "irc", "irc!*", "irc*"];

/// Parses `.hao` declarations in order, expanding definitions as they
/// appear.
pub fn parse_theory(forms: &[Sexp]) -> Vec<Item<TheoryDecl>> {
    let mut defs = Definitions::new();
    let mut out = Vec::new();
    for form in forms {
        let (name, kind) = item_header(form);
        let decl = parse_theory_decl(form, &defs);
        if let Ok(TheoryDecl::Define(n, t)) = &decl {
            defs.insert(n.clone(), t.clone());
        }
        out.push(Item { name, kind, span: form.span, decl });
    }
    out
}

pub fn parse_theory_decl(s: &Sexp, defs: &Definitions) -> SyntaxResult<TheoryDecl> {
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a declaration"))?;
    let mut scope = Scope::new(defs);
    match head {
        "profile" => {
            let mut flags = Vec::new();
            for a in args {
                let f = a.expect_atom("a profile flag")?;
                if !PROFILE_FLAGS.contains(&f) {
                    return Err(SyntaxError::parse(a.span, format!("unknown profile flag '{f}'")));
                }
                flags.push(f.to_string());
            }
            Ok(TheoryDecl::Profile(flags))
        }
        "define" => {
            arity(s.span, head, args, 2)?;
            Ok(TheoryDecl::Define(var_name(&args[0])?, parse_term(&args[1], &scope)?))
        }
        "lemma" | "reject" => {
            arity(s.span, head, args, 3)?;
            let name = label(&args[0])?;
            let f = parse_formula(&args[1], &mut scope)?;
            let p = parse_proof(&args[2], &mut scope)?;
            Ok(if head == "lemma" { TheoryDecl::Lemma(name, f, p) } else { TheoryDecl::Reject(name, f, p) })
        }
        "formula" => {
            arity(s.span, head, args, 2)?;
            Ok(TheoryDecl::Formula(label(&args[0])?, parse_formula(&args[1], &mut scope)?))
        }
        _ => Err(SyntaxError::parse(s.span, format!("unknown declaration '{head}'"))),
    }
}

pub fn print_theory_decl(d: &TheoryDecl) -> String {
    match d {
        TheoryDecl::Profile(flags) => {
            let mut s = String::from("(profile");
            for f in flags {
                s.push(' ');
                s.push_str(f);
            }
            s.push(')');
            s
        }
        TheoryDecl::Define(n, t) => format!("(define {n} {})", print_term(t)),
        TheoryDecl::Lemma(n, f, p) => format!("(lemma {n}\n  {}\n  {})", print_formula(f), print_proof(p)),
        TheoryDecl::Reject(n, f, p) => format!("(reject {n}\n  {}\n  {})", print_formula(f), print_proof(p)),
        TheoryDecl::Formula(n, f) => format!("(formula {n} {})", print_formula(f)),
    }
}

pub fn print_theory(decls: &[TheoryDecl]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&print_theory_decl(d));
        out.push('\n');
    }
    out
}

pub fn is_atom(s: &Sexp, a: &str) -> bool {
    matches!(&s.kind, SexpKind::Atom(x) if x == a)
}
