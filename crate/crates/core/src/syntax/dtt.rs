//! Concrete syntax for dependent-type expressions and `.dtt` goal files.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dtt::{Binder, DttDecl, Expr, Sort, SortMode};
use crate::sexp::{arity, ident, ErrorKind, Sexp, SyntaxError, SyntaxResult};

pub const DTT_KEYWORDS: &[&str] = &[
    "Nat",
    "Empty",
    "Unit",
    "Pi",
    "->",
    "Sigma",
    "*",
    "+",
    "Id",
    "Exists",
    "Or",
    "False",
    "Forall",
    "Imp",
    "And",
    "Eq",
    "Trunc",
    "P1",
    "Props",
    "lam",
    "ap",
    "pair",
    "fst",
    "snd",
    "inl",
    "inr",
    "case",
    "zero",
    "succ",
    "natrec",
    "refl",
    "idpeel",
    "ex-intro",
    "ex-elim",
    "tr",
    "trunc-elim",
    "plam",
    "true",
    "star",
    "absurd",
    "let",
    "the",
];

const MAX_NUMERAL: u64 = 10_000;

fn name(s: &Sexp) -> SyntaxResult<String> {
    ident(s, DTT_KEYWORDS)
}

fn distinct(s: &Sexp, names: &[String]) -> SyntaxResult<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(SyntaxError {
                kind: ErrorKind::DuplicateBinder,
                span: s.span,
                message: format!("'{n}' is bound twice in one binder list"),
            });
        }
    }
    Ok(())
}

/// `(x1 .. xn body)` with `n` names.
fn scope(s: &Sexp, n: usize) -> SyntaxResult<Binder> {
    let items = s.expect_list("a binder")?;
    if items.len() != n + 1 {
        return Err(SyntaxError::parse(s.span, format!("binder takes {n} name(s) and a body")));
    }
    let names = items[..n].iter().map(name).collect::<SyntaxResult<Vec<_>>>()?;
    distinct(s, &names)?;
    Ok(Binder { names, body: Box::new(parse_expr(&items[n])?) })
}

/// `(x A)` in a quantifier head.
fn typed(s: &Sexp) -> SyntaxResult<(String, Expr)> {
    let items = s.expect_list("a typed binder (x A)")?;
    if items.len() != 2 {
        return Err(SyntaxError::parse(s.span, "typed binder takes a name and a type"));
    }
    Ok((name(&items[0])?, parse_expr(&items[1])?))
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

pub fn parse_expr(s: &Sexp) -> SyntaxResult<Expr> {
    if let Some(a) = s.atom() {
        if a.bytes().all(|c| c.is_ascii_digit()) {
            return match a.parse::<u64>() {
                Ok(n) if n <= MAX_NUMERAL => Ok(Expr::numeral(n)),
                _ => Err(SyntaxError::parse(s.span, format!("numeral {a} exceeds {MAX_NUMERAL}"))),
            };
        }
        return Ok(match a {
            "Nat" => Expr::Nat,
            "Empty" => Expr::Empty,
            "Unit" => Expr::Unit,
            "False" => Expr::FalseP,
            "P1" => Expr::PowUnit,
            "Props" => Expr::SmallProps,
            "zero" => Expr::Zero,
            "true" => Expr::True,
            "star" => Expr::Star,
            _ => Expr::Var(name(s)?),
        });
    }
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected an expression"))?;
    let n = |k: usize| arity(s.span, head, args, k);
    let e = |i: usize| parse_expr(&args[i]);
    Ok(match head {
        "Pi" | "Sigma" | "Exists" | "Forall" => {
            n(2)?;
            let (x, a) = typed(&args[0])?;
            let bb = Binder { names: alloc::vec![x], body: b(e(1)?) };
            match head {
                "Pi" => Expr::Pi(b(a), bb),
                "Sigma" => Expr::Sigma(b(a), bb),
                "Exists" => Expr::ExistsP(b(a), bb),
                _ => Expr::ForallP(b(a), bb),
            }
        }
        "->" | "*" => {
            if args.len() < 2 {
                return Err(SyntaxError::parse(s.span, format!("'{head}' takes at least 2 arguments")));
            }
            let parts = args.iter().map(parse_expr).collect::<SyntaxResult<Vec<_>>>()?;
            let mut it = parts.into_iter().rev();
            let last = it.next().unwrap();
            it.fold(last, |acc, x| if head == "->" { Expr::arrow(x, acc) } else { Expr::times(x, acc) })
        }
        "+" | "Or" | "Imp" | "And" | "pair" | "ex-intro" => {
            n(2)?;
            let (l, r) = (b(e(0)?), b(e(1)?));
            match head {
                "+" => Expr::Sum(l, r),
                "Or" => Expr::OrP(l, r),
                "Imp" => Expr::ImpP(l, r),
                "And" => Expr::AndP(l, r),
                "pair" => Expr::Pair(l, r),
                _ => Expr::ExIntro(l, r),
            }
        }
        "Id" | "Eq" => {
            n(3)?;
            let (a, l, r) = (b(e(0)?), b(e(1)?), b(e(2)?));
            if head == "Id" {
                Expr::Id(a, l, r)
            } else {
                Expr::EqP(a, l, r)
            }
        }
        "Trunc" | "fst" | "snd" | "inl" | "inr" | "succ" | "refl" | "tr" => {
            n(1)?;
            let x = b(e(0)?);
            match head {
                "Trunc" => Expr::Trunc(x),
                "fst" => Expr::Fst(x),
                "snd" => Expr::Snd(x),
                "inl" => Expr::Inl(x),
                "inr" => Expr::Inr(x),
                "succ" => Expr::Succ(x),
                "refl" => Expr::Refl(x),
                _ => Expr::TruncIntro(x),
            }
        }
        "lam" | "plam" => {
            n(2)?;
            let bb = Binder { names: alloc::vec![name(&args[0])?], body: b(e(1)?) };
            if head == "lam" {
                Expr::Lam(bb)
            } else {
                Expr::PropLam(bb)
            }
        }
        "ap" => {
            if args.len() < 2 {
                return Err(SyntaxError::parse(s.span, "'ap' takes at least 2 arguments"));
            }
            let parts = args.iter().map(parse_expr).collect::<SyntaxResult<Vec<_>>>()?;
            let mut it = parts.into_iter();
            let f = it.next().unwrap();
            Expr::apps(f, it)
        }
        "case" => {
            if args.len() != 3 && args.len() != 4 {
                return Err(SyntaxError::parse(
                    s.span,
                    "'case' takes a scrutinee, an optional motive and two branches",
                ));
            }
            let motive = if args.len() == 4 { Some(scope(&args[1], 1)?) } else { None };
            let k = args.len() - 2;
            Expr::Case { scrut: b(e(0)?), motive, left: scope(&args[k], 1)?, right: scope(&args[k + 1], 1)? }
        }
        "natrec" => {
            n(4)?;
            Expr::NatRec { motive: scope(&args[0], 1)?, base: b(e(1)?), step: scope(&args[2], 2)?, target: b(e(3)?) }
        }
        "idpeel" => {
            n(3)?;
            Expr::IdPeel { motive: scope(&args[0], 3)?, eq: b(e(1)?), refl: scope(&args[2], 1)? }
        }
        "ex-elim" => {
            n(2)?;
            Expr::ExElim { scrut: b(e(0)?), body: scope(&args[1], 2)? }
        }
        "trunc-elim" => {
            n(2)?;
            Expr::TruncElim { scrut: b(e(0)?), body: scope(&args[1], 1)? }
        }
        "absurd" => match args.len() {
            1 => Expr::Absurd(None, b(e(0)?)),
            2 => Expr::Absurd(Some(b(e(0)?)), b(e(1)?)),
            _ => return Err(SyntaxError::parse(s.span, "'absurd' takes an optional motive and a proof")),
        },
        "let" => {
            n(2)?;
            let items = args[0].expect_list("a let binding (x A v)")?;
            if items.len() != 3 {
                return Err(SyntaxError::parse(args[0].span, "let binding takes a name, a type and a value"));
            }
            let bb = Binder { names: alloc::vec![name(&items[0])?], body: b(e(1)?) };
            Expr::Let(b(parse_expr(&items[1])?), b(parse_expr(&items[2])?), bb)
        }
        "the" => {
            n(2)?;
            Expr::Ann(b(e(1)?), b(e(0)?))
        }
        _ if DTT_KEYWORDS.contains(&head) => {
            return Err(SyntaxError::parse(s.span, format!("'{head}' cannot head an application")));
        }
        _ => {
            let fam = name(&s.list().unwrap()[0])?;
            Expr::Fam(fam, args.iter().map(parse_expr).collect::<SyntaxResult<Vec<_>>>()?)
        }
    })
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn list(out: &mut String, head: &str, parts: &[&dyn Fn(&mut String)]) {
    out.push('(');
    out.push_str(head);
    for p in parts {
        out.push(' ');
        p(out);
    }
    out.push(')');
}

fn write_scope(bb: &Binder, out: &mut String) {
    out.push('(');
    for n in &bb.names {
        out.push_str(n);
        out.push(' ');
    }
    write_expr(&bb.body, out);
    out.push(')');
}

fn w(x: &Expr) -> impl Fn(&mut String) + '_ {
    move |o| write_expr(x, o)
}

fn sc(bb: &Binder) -> impl Fn(&mut String) + '_ {
    move |o| write_scope(bb, o)
}

fn write_expr(e: &Expr, out: &mut String) {
    if let Some(n) = e.as_numeral() {
        out.push_str(&n.to_string());
        return;
    }
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Fam(name, args) => {
            out.push('(');
            out.push_str(name);
            for a in args {
                out.push(' ');
                write_expr(a, out);
            }
            out.push(')');
        }
        Expr::Nat => out.push_str("Nat"),
        Expr::Empty => out.push_str("Empty"),
        Expr::Unit => out.push_str("Unit"),
        Expr::FalseP => out.push_str("False"),
        Expr::PowUnit => out.push_str("P1"),
        Expr::SmallProps => out.push_str("Props"),
        Expr::Zero => out.push_str("zero"),
        Expr::True => out.push_str("true"),
        Expr::Star => out.push_str("star"),
        Expr::Pi(a, bb) | Expr::Sigma(a, bb) | Expr::ExistsP(a, bb) | Expr::ForallP(a, bb) => {
            let x = &bb.names[0];
            let dependent = bb.body.has_free(x);
            let head = match (e, dependent) {
                (Expr::Pi(..), false) => "->",
                (Expr::Sigma(..), false) => "*",
                (Expr::Pi(..), true) => "Pi",
                (Expr::Sigma(..), true) => "Sigma",
                (Expr::ExistsP(..), _) => "Exists",
                _ => "Forall",
            };
            if dependent || matches!(e, Expr::ExistsP(..) | Expr::ForallP(..)) {
                let binder = |o: &mut String| {
                    o.push_str(&format!("({x} "));
                    write_expr(a, o);
                    o.push(')');
                };
                list(out, head, &[&binder, &w(&bb.body)]);
            } else {
                list(out, head, &[&w(a), &w(&bb.body)]);
            }
        }
        Expr::Sum(l, r) => list(out, "+", &[&w(l), &w(r)]),
        Expr::OrP(l, r) => list(out, "Or", &[&w(l), &w(r)]),
        Expr::ImpP(l, r) => list(out, "Imp", &[&w(l), &w(r)]),
        Expr::AndP(l, r) => list(out, "And", &[&w(l), &w(r)]),
        Expr::Pair(l, r) => list(out, "pair", &[&w(l), &w(r)]),
        Expr::ExIntro(l, r) => list(out, "ex-intro", &[&w(l), &w(r)]),
        Expr::Id(a, l, r) => list(out, "Id", &[&w(a), &w(l), &w(r)]),
        Expr::EqP(a, l, r) => list(out, "Eq", &[&w(a), &w(l), &w(r)]),
        Expr::Trunc(x) => list(out, "Trunc", &[&w(x)]),
        Expr::Fst(x) => list(out, "fst", &[&w(x)]),
        Expr::Snd(x) => list(out, "snd", &[&w(x)]),
        Expr::Inl(x) => list(out, "inl", &[&w(x)]),
        Expr::Inr(x) => list(out, "inr", &[&w(x)]),
        Expr::Succ(x) => list(out, "succ", &[&w(x)]),
        Expr::Refl(x) => list(out, "refl", &[&w(x)]),
        Expr::TruncIntro(x) => list(out, "tr", &[&w(x)]),
        Expr::Lam(bb) | Expr::PropLam(bb) => {
            let head = if matches!(e, Expr::Lam(_)) { "lam" } else { "plam" };
            let x = |o: &mut String| o.push_str(&bb.names[0]);
            list(out, head, &[&x, &w(&bb.body)]);
        }
        Expr::App(..) => {
            let mut spine = Vec::new();
            let mut cur = e;
            while let Expr::App(f, a) = cur {
                spine.push(&**a);
                cur = f;
            }
            out.push_str("(ap ");
            write_expr(cur, out);
            for a in spine.iter().rev() {
                out.push(' ');
                write_expr(a, out);
            }
            out.push(')');
        }
        Expr::Case { scrut, motive, left, right } => match motive {
            Some(m) => list(out, "case", &[&w(scrut), &sc(m), &sc(left), &sc(right)]),
            None => list(out, "case", &[&w(scrut), &sc(left), &sc(right)]),
        },
        Expr::NatRec { motive, base, step, target } => {
            list(out, "natrec", &[&sc(motive), &w(base), &sc(step), &w(target)])
        }
        Expr::IdPeel { motive, eq, refl } => list(out, "idpeel", &[&sc(motive), &w(eq), &sc(refl)]),
        Expr::ExElim { scrut, body } => list(out, "ex-elim", &[&w(scrut), &sc(body)]),
        Expr::TruncElim { scrut, body } => list(out, "trunc-elim", &[&w(scrut), &sc(body)]),
        Expr::Absurd(m, x) => match m {
            Some(m) => list(out, "absurd", &[&w(m), &w(x)]),
            None => list(out, "absurd", &[&w(x)]),
        },
        Expr::Let(ty, v, bb) => {
            let binding = |o: &mut String| {
                o.push_str(&format!("({} ", bb.names[0]));
                write_expr(ty, o);
                o.push(' ');
                write_expr(v, o);
                o.push(')');
            };
            list(out, "let", &[&binding, &w(&bb.body)]);
        }
        Expr::Ann(x, ty) => list(out, "the", &[&w(ty), &w(x)]),
    }
}

fn sort(s: &Sexp) -> SyntaxResult<Sort> {
    let a = s.expect_atom("a sort")?;
    Sort::from_name(a).ok_or_else(|| SyntaxError::parse(s.span, format!("unknown sort '{a}'")))
}

/// Parses one `.dtt` declaration:
/// `(mode m)`, `(family R ((x A) ...) sort)`, `(assume x A)`,
/// `(define x A v)`, `(check [name] e A)`, `(reject [name] e A)`,
/// `(classify [name] A [sort])`.
pub fn parse_dtt_decl(s: &Sexp) -> SyntaxResult<DttDecl> {
    let (head, args) = s.head().ok_or_else(|| SyntaxError::parse(s.span, "expected a declaration"))?;
    let n = |k: usize| arity(s.span, head, args, k);
    Ok(match head {
        "mode" => {
            n(1)?;
            let m = args[0].expect_atom("a mode")?;
            DttDecl::Mode(
                SortMode::from_name(m)
                    .ok_or_else(|| SyntaxError::parse(args[0].span, format!("unknown mode '{m}'")))?,
            )
        }
        "family" => {
            n(3)?;
            let params =
                args[1].expect_list("a parameter list")?.iter().map(typed).collect::<SyntaxResult<Vec<_>>>()?;
            let names: Vec<String> = params.iter().map(|(x, _)| x.clone()).collect();
            distinct(&args[1], &names)?;
            DttDecl::Family { name: name(&args[0])?, params, sort: sort(&args[2])? }
        }
        "assume" => {
            n(2)?;
            DttDecl::Assume(name(&args[0])?, parse_expr(&args[1])?)
        }
        "define" => {
            n(3)?;
            DttDecl::Define(name(&args[0])?, parse_expr(&args[1])?, parse_expr(&args[2])?)
        }
        "check" | "reject" => {
            let (label, rest) = match args.len() {
                2 => (None, args),
                3 => (Some(name(&args[0])?), &args[1..]),
                _ => {
                    return Err(SyntaxError::parse(
                        s.span,
                        format!("'{head}' takes an optional name, a term and a type"),
                    ))
                }
            };
            let (term, ty) = (parse_expr(&rest[0])?, parse_expr(&rest[1])?);
            if head == "check" {
                DttDecl::Check { name: label, term, ty }
            } else {
                DttDecl::Reject { name: label, term, ty }
            }
        }
        "classify" => {
            let is_sort = |x: &Sexp| x.atom().and_then(Sort::from_name).is_some();
            let (label, ty, expected) = match args {
                [t] => (None, t, None),
                [t, so] if is_sort(so) => (None, t, Some(sort(so)?)),
                [l, t] => (Some(name(l)?), t, None),
                [l, t, so] => (Some(name(l)?), t, Some(sort(so)?)),
                _ => {
                    return Err(SyntaxError::parse(
                        s.span,
                        "'classify' takes an optional name, a type and an optional sort",
                    ))
                }
            };
            DttDecl::Classify { name: label, ty: parse_expr(ty)?, expected }
        }
        _ => return Err(SyntaxError::parse(s.span, format!("unknown declaration '{head}'"))),
    })
}

pub fn print_dtt_decl(d: &DttDecl) -> String {
    let named = |n: &Option<String>| n.as_ref().map(|n| format!("{n} ")).unwrap_or_default();
    match d {
        DttDecl::Mode(m) => format!("(mode {m})"),
        DttDecl::Family { name, params, sort } => {
            let ps: Vec<String> = params.iter().map(|(x, a)| format!("({x} {})", print_expr(a))).collect();
            format!("(family {name} ({}) {})", ps.join(" "), sort.as_str())
        }
        DttDecl::Assume(x, a) => format!("(assume {x} {})", print_expr(a)),
        DttDecl::Define(x, a, v) => format!("(define {x} {} {})", print_expr(a), print_expr(v)),
        DttDecl::Check { name, term, ty } => format!("(check {}{} {})", named(name), print_expr(term), print_expr(ty)),
        DttDecl::Reject { name, term, ty } => {
            format!("(reject {}{} {})", named(name), print_expr(term), print_expr(ty))
        }
        DttDecl::Classify { name, ty, expected } => match expected {
            Some(s) => format!("(classify {}{} {})", named(name), print_expr(ty), s.as_str()),
            None => format!("(classify {}{})", named(name), print_expr(ty)),
        },
    }
}

/// One declaration per line.
pub fn print_dtt_file(decls: &[DttDecl]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&print_dtt_decl(d));
        out.push('\n');
    }
    out
}
