//! Second-order arithmetic into EMTT: numbers are `Nat`, sets are
//! propositional functions `Nat → P1`, and formulas are propositions.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::aca::{AcaDecl, AcaFormula, AcaTerm};
use crate::dtt::{Binder, Ctx, DttDecl, Expr, Sort};
use crate::names;

fn v(x: &str) -> Expr {
    Expr::var(x)
}

pub fn set_type() -> Expr {
    Expr::arrow(Expr::Nat, Expr::PowUnit)
}

pub fn term_to_emtt(t: &AcaTerm) -> Expr {
    match t {
        AcaTerm::Var(x) => v(x),
        AcaTerm::Zero => Expr::Zero,
        AcaTerm::Succ(a) => Expr::succ(term_to_emtt(a)),
        AcaTerm::Add(a, b) => Expr::apps(v("add"), [term_to_emtt(a), term_to_emtt(b)]),
        AcaTerm::Mul(a, b) => Expr::apps(v("mul"), [term_to_emtt(a), term_to_emtt(b)]),
    }
}

pub fn formula_to_emtt(f: &AcaFormula) -> Expr {
    let t = formula_to_emtt;
    match f {
        AcaFormula::False => Expr::FalseP,
        AcaFormula::Eq(a, b) => Expr::eq_p(Expr::Nat, term_to_emtt(a), term_to_emtt(b)),
        AcaFormula::In(a, x) => Expr::app(v(x), term_to_emtt(a)),
        AcaFormula::And(a, b) => Expr::and_p(t(a), t(b)),
        AcaFormula::Or(a, b) => Expr::or_p(t(a), t(b)),
        AcaFormula::Imp(a, b) => Expr::imp_p(t(a), t(b)),
        AcaFormula::ForallN(x, b) => Expr::forall_p(x, Expr::Nat, t(b)),
        AcaFormula::ExistsN(x, b) => Expr::exists_p(x, Expr::Nat, t(b)),
        AcaFormula::ForallS(x, b) => Expr::forall_p(x, set_type(), t(b)),
        AcaFormula::ExistsS(x, b) => Expr::exists_p(x, set_type(), t(b)),
    }
}

fn nat_rec(motive: Expr, base: Expr, step: (&str, &str, Expr), target: Expr) -> Expr {
    Expr::NatRec {
        motive: Binder::one("_", motive),
        base: Box::new(base),
        step: Binder::new(&[step.0, step.1], step.2),
        target: Box::new(target),
    }
}

fn binop() -> Expr {
    Expr::arrow(Expr::Nat, Expr::arrow(Expr::Nat, Expr::Nat))
}

/// `add` and `mul` by primitive recursion on the second argument.
pub fn arithmetic_definitions() -> [(String, Expr, Expr); 2] {
    let lam2 = |body| Expr::lam("m", Expr::lam("n", body));
    let add = lam2(nat_rec(Expr::Nat, v("m"), ("k", "r", Expr::succ(v("r"))), v("n")));
    let mul = lam2(nat_rec(Expr::Nat, Expr::Zero, ("k", "r", Expr::apps(v("add"), [v("r"), v("m")])), v("n")));
    [(String::from("add"), binop(), add), (String::from("mul"), binop(), mul)]
}

/// A context declaring the arithmetic operations, for classifying
/// translated formulas without their definitions.
pub fn arithmetic_context() -> Ctx {
    Ctx::new().with_term("add", binop()).with_term("mul", binop())
}

/// The mode declaration, the operations, and checks of their recursion
/// equations.
pub fn prelude() -> Vec<DttDecl> {
    let mut out = vec![DttDecl::Mode(crate::dtt::SortMode::Emtt)];
    for (x, a, d) in arithmetic_definitions() {
        out.push(DttDecl::Define(x, a, d));
    }
    let op = |f: &str, a: Expr, b: Expr| Expr::apps(v(f), [a, b]);
    let sm = || Expr::succ(v("n"));
    let eqs = [
        ("add-zero", op("add", v("m"), Expr::Zero), v("m")),
        ("add-succ", op("add", v("m"), sm()), Expr::succ(op("add", v("m"), v("n")))),
        ("mul-zero", op("mul", v("m"), Expr::Zero), Expr::Zero),
        ("mul-succ", op("mul", v("m"), sm()), op("add", op("mul", v("m"), v("n")), v("m"))),
    ];
    for (name, l, r) in eqs {
        let ty = Expr::forall_p("m", Expr::Nat, Expr::forall_p("n", Expr::Nat, Expr::eq_p(Expr::Nat, l, r.clone())));
        let term = Expr::lam("m", Expr::lam("n", Expr::refl(r)));
        out.push(DttDecl::Check { name: Some(String::from(name)), term, ty });
    }
    out
}

fn taken(d: &AcaDecl) -> BTreeSet<String> {
    let mut s = BTreeSet::new();
    d.statement().all_names(&mut s);
    s.insert(String::from("add"));
    s.insert(String::from("mul"));
    s
}

/// A proof term for the translated statement of a schema instance.
pub fn schema_proof(d: &AcaDecl) -> Option<Expr> {
    let ps = d.parameters();
    let params: Vec<&String> = ps.numbers.iter().chain(&ps.sets).collect();
    let used = taken(d);
    let fresh = |b: &str| names::fresh(b, |c| used.contains(c));
    let core = match d {
        AcaDecl::Formula(..) => return None,
        AcaDecl::Comprehension { var, body, .. } => {
            let phi = formula_to_emtt(body);
            let h = fresh("h");
            let id = || Expr::lam(&h, v(&h));
            Expr::ExIntro(
                Box::new(Expr::PropLam(Binder::one(var, phi))),
                Box::new(Expr::lam(var, Expr::pair(id(), id()))),
            )
        }
        AcaDecl::Induction { var, body, .. } => {
            let phi = formula_to_emtt(body);
            let (p, m, r) = (fresh("p"), fresh("m"), fresh("r"));
            let step = Expr::apps(Expr::snd(v(&p)), [v(&m), v(&r)]);
            let rec = Expr::NatRec {
                motive: Binder::one(var, phi),
                base: Box::new(Expr::fst(v(&p))),
                step: Binder::new(&[&m, &r], step),
                target: Box::new(v(var)),
            };
            Expr::lam(&p, Expr::lam(var, rec))
        }
    };
    Some(params.iter().rev().fold(core, |acc, x| Expr::lam(x, acc)))
}

/// Sort the translation of a statement should have.
pub fn expected_sort(f: &AcaFormula) -> Sort {
    if f.is_arithmetical() {
        Sort::PropS
    } else {
        Sort::Prop
    }
}

/// The `.dtt` declarations for an `.aca` file: the prelude, then a
/// classification per statement and a check per schema instance.
pub fn aca_to_emtt(decls: &[AcaDecl]) -> Vec<DttDecl> {
    let mut out = prelude();
    for d in decls {
        let st = d.statement();
        let ty = formula_to_emtt(&st);
        out.push(DttDecl::Classify {
            name: Some(String::from(d.name())),
            ty: ty.clone(),
            expected: Some(expected_sort(&st)),
        });
        if let Some(term) = schema_proof(d) {
            out.push(DttDecl::Check { name: Some(format!("{}-proof", d.name())), term, ty });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{check_dtt, Kernel, SortMode};
    use crate::report::Status;
    use crate::sexp::read_one;
    use crate::sexp::Span;
    use crate::syntax::aca::parse_aca_decl;
    use crate::syntax::hao::Item;

    fn decl(text: &str) -> AcaDecl {
        parse_aca_decl(&read_one(text).unwrap()).unwrap()
    }

    fn run(decls: &[AcaDecl]) -> Vec<crate::report::Record> {
        let items: Vec<Item<DttDecl>> = aca_to_emtt(decls)
            .into_iter()
            .map(|d| Item {
                name: String::from(d.kind()),
                kind: String::from(d.kind()),
                span: Span::new(0, 0),
                decl: Ok(d),
            })
            .collect();
        check_dtt(&items, None, crate::DEFAULT_FUEL)
    }

    #[test]
    fn arithmetical_formulas_are_small() {
        let d = decl("(formula f (forall (x N) (exists (y N) (= (+ x 1) (* y 2)))))");
        let k = Kernel::new(SortMode::Emtt);
        assert_eq!(k.classify(&arithmetic_context(), &formula_to_emtt(&d.statement())), Ok(Sort::PropS));
        let d = decl("(formula g (forall (X Set) (or (in 0 X) (not (in 0 X)))))");
        assert_eq!(k.classify(&arithmetic_context(), &formula_to_emtt(&d.statement())), Ok(Sort::Prop));
    }

    #[test]
    fn schemas_have_proofs() {
        let ds = [
            decl("(comprehension evens x (exists (z N) (= x (* 2 z))))"),
            decl("(comprehension inter x (and (in x Y) (in x Z)))"),
            decl("(induction ind x (or (= x 0) (exists (p N) (= x (succ p)))))"),
            decl("(induction setind x (imp (in 0 Y) (in x Y)))"),
        ];
        let r = run(&ds);
        assert!(r.iter().all(|r| r.status == Status::Ok), "{r:#?}");
        assert_eq!(r.len(), prelude().len() + 2 * ds.len());
    }
}
