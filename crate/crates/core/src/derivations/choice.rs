//! Closed choice terms: AC and AC! in MLTT, and AC! through truncation.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dtt::{Binder, DttDecl, Expr, Sort, SortMode};

fn v(x: &str) -> Expr {
    Expr::var(x)
}

fn nat_fn() -> Expr {
    Expr::arrow(Expr::Nat, Expr::Nat)
}

/// The relation `R x y` of the schematic statements.
pub fn rel(x: Expr, y: Expr) -> Expr {
    Expr::fam("R", [x, y])
}

/// `(family R ((x Nat) (y Nat)) props)`
pub fn relation_family() -> DttDecl {
    DttDecl::Family {
        name: String::from("R"),
        params: vec![(String::from("x"), Expr::Nat), (String::from("y"), Expr::Nat)],
        sort: Sort::PropS,
    }
}

fn conclusion(r: &dyn Fn(Expr, Expr) -> Expr) -> Expr {
    Expr::sigma("f", nat_fn(), Expr::pi("x", Expr::Nat, r(v("x"), Expr::app(v("f"), v("x")))))
}

/// `Π x Σ y R(x,y) → Σ f Π x R(x, f x)`
pub fn ac_type() -> Expr {
    let total = Expr::pi("x", Expr::Nat, Expr::sigma("y", Expr::Nat, rel(v("x"), v("y"))));
    Expr::arrow(total, conclusion(&rel))
}

/// AC with the quantifiers read as propositions.
pub fn ac_prop_type() -> Expr {
    let total = Expr::forall_p("x", Expr::Nat, Expr::exists_p("y", Expr::Nat, rel(v("x"), v("y"))));
    let concl = Expr::exists_p("f", nat_fn(), Expr::forall_p("x", Expr::Nat, rel(v("x"), Expr::app(v("f"), v("x")))));
    Expr::arrow(total, concl)
}

/// `λh. (λx. fst (h x), λx. snd (h x))`
pub fn ac_term() -> Expr {
    let hx = || Expr::app(v("h"), v("x"));
    Expr::lam("h", Expr::pair(Expr::lam("x", Expr::fst(hx())), Expr::lam("x", Expr::snd(hx()))))
}

/// `Σ y R(x,y) × Π y1 Π y2 (R(x,y1) × R(x,y2) → y1 = y2)`
fn unique_exists(r: &dyn Fn(Expr, Expr) -> Expr) -> Expr {
    let uniq = Expr::pi(
        "y1",
        Expr::Nat,
        Expr::pi(
            "y2",
            Expr::Nat,
            Expr::arrow(Expr::times(r(v("x"), v("y1")), r(v("x"), v("y2"))), Expr::id(Expr::Nat, v("y1"), v("y2"))),
        ),
    );
    Expr::times(Expr::sigma("y", Expr::Nat, r(v("x"), v("y"))), uniq)
}

pub fn ac_bang_type() -> Expr {
    Expr::arrow(Expr::pi("x", Expr::Nat, unique_exists(&rel)), conclusion(&rel))
}

/// AC precomposed with the projection that forgets uniqueness, in normal
/// form.
pub fn ac_bang_term() -> Expr {
    let w = || Expr::fst(Expr::app(v("h"), v("x")));
    Expr::lam("h", Expr::pair(Expr::lam("x", Expr::fst(w())), Expr::lam("x", Expr::snd(w()))))
}

/// `ac_term` applied to the forgetful projection, before normalization.
pub fn ac_bang_by_precomposition() -> Expr {
    let forget = Expr::lam("x", Expr::fst(Expr::app(v("h"), v("x"))));
    Expr::lam("h", Expr::app(Expr::ann(ac_term(), ac_type()), forget))
}

/// `Σ y (R(x,y) × Π y'. R(x,y') → y = y')`: unique existence with a
/// witness that is itself an h-proposition.
pub fn unique_core(r: &dyn Fn(Expr, Expr) -> Expr) -> Expr {
    let uniq = Expr::pi("y'", Expr::Nat, Expr::arrow(r(v("x"), v("y'")), Expr::id(Expr::Nat, v("y"), v("y'"))));
    Expr::sigma("y", Expr::Nat, Expr::times(r(v("x"), v("y")), uniq))
}

pub fn trunc_ac_bang_type_for(r: &dyn Fn(Expr, Expr) -> Expr) -> Expr {
    let premise = Expr::pi("x", Expr::Nat, Expr::trunc(unique_core(r)));
    Expr::arrow(premise, Expr::trunc(conclusion(r)))
}

/// Unpacks `h x` at `motive`, then projects.
fn trunc_term_at(motive: Expr, second: bool) -> Expr {
    let opened = || {
        Expr::ann(
            Expr::TruncElim { scrut: Box::new(Expr::app(v("h"), v("x"))), body: Binder::one("z", v("z")) },
            motive.clone(),
        )
    };
    let snd = if second { Expr::fst(Expr::snd(opened())) } else { Expr::snd(opened()) };
    Expr::lam("h", Expr::TruncIntro(Box::new(Expr::pair(Expr::lam("x", Expr::fst(opened())), Expr::lam("x", snd)))))
}

pub fn ac_bang_trunc_term_for(r: &dyn Fn(Expr, Expr) -> Expr) -> Expr {
    trunc_term_at(unique_core(r), true)
}

pub fn trunc_ac_bang_type() -> Expr {
    trunc_ac_bang_type_for(&rel)
}

pub fn ac_bang_trunc_term() -> Expr {
    ac_bang_trunc_term_for(&rel)
}

/// General AC with truncated existence.
pub fn trunc_ac_type() -> Expr {
    let premise = Expr::pi("x", Expr::Nat, Expr::trunc(Expr::sigma("y", Expr::Nat, rel(v("x"), v("y")))));
    Expr::arrow(premise, Expr::trunc(conclusion(&rel)))
}

/// The same construction for general AC, unpacking `h x` at the plain
/// existential, which is not a proposition.
pub fn trunc_ac_term() -> Expr {
    trunc_term_at(Expr::sigma("y", Expr::Nat, rel(v("x"), v("y"))), false)
}

fn check(name: &str, term: Expr, ty: Expr) -> DttDecl {
    DttDecl::Check { name: Some(String::from(name)), term, ty }
}

fn reject(name: &str, term: Expr, ty: Expr) -> DttDecl {
    DttDecl::Reject { name: Some(String::from(name)), term, ty }
}

pub fn ac_file() -> Vec<DttDecl> {
    vec![
        DttDecl::Mode(SortMode::Mltt),
        relation_family(),
        check("ac", ac_term(), ac_type()),
        DttDecl::Mode(SortMode::Mtt),
        reject("ac-mtt", ac_term(), ac_prop_type()),
    ]
}

pub fn ac_mtt_reject_file() -> Vec<DttDecl> {
    vec![DttDecl::Mode(SortMode::Mtt), relation_family(), reject("ac-mtt", ac_term(), ac_prop_type())]
}

pub fn ac_bang_file() -> Vec<DttDecl> {
    vec![
        DttDecl::Mode(SortMode::Mltt),
        relation_family(),
        check("ac-bang", ac_bang_term(), ac_bang_type()),
        check("ac-bang-precomposed", ac_bang_by_precomposition(), ac_bang_type()),
    ]
}

pub fn trunc_ac_bang_file() -> Vec<DttDecl> {
    vec![
        DttDecl::Mode(SortMode::Mtt),
        relation_family(),
        check("trunc-ac-bang", ac_bang_trunc_term(), trunc_ac_bang_type()),
        reject("trunc-ac", trunc_ac_term(), trunc_ac_type()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{normalize, Ctx, DttError, Entry, Kernel};

    fn ctx() -> Ctx {
        let DttDecl::Family { name, params, sort } = relation_family() else { unreachable!() };
        let mut c = Ctx::new();
        c.push(Entry::Family { name, params, sort });
        c
    }

    fn k(mode: SortMode) -> Kernel {
        Kernel::new(mode)
    }

    #[test]
    fn ac_in_mltt() {
        assert_eq!(k(SortMode::Mltt).check(&ctx(), &ac_term(), &ac_type()), Ok(()));
        assert_eq!(k(SortMode::Mltt).check(&ctx(), &ac_bang_term(), &ac_bang_type()), Ok(()));
        assert_eq!(k(SortMode::Mltt).check(&ctx(), &ac_bang_by_precomposition(), &ac_bang_type()), Ok(()));
    }

    #[test]
    fn ac_terms_are_normal_and_closed() {
        for t in [ac_term(), ac_bang_term()] {
            assert!(t.free_vars().is_empty());
            assert_eq!(normalize(&t, &mut 1000).unwrap(), t);
        }
        let pre = normalize(&ac_bang_by_precomposition(), &mut 1000).unwrap();
        assert!(pre.alpha_eq(&ac_bang_term()));
    }

    #[test]
    fn ac_rejected_for_propositions() {
        let e = k(SortMode::Mtt).check(&ctx(), &ac_term(), &ac_prop_type()).unwrap_err();
        assert_eq!(e, DttError::SortViolation { eliminator: "fst", motive_sort: Sort::Set });
    }

    #[test]
    fn truncated_unique_choice() {
        assert_eq!(k(SortMode::Mtt).check(&ctx(), &ac_bang_trunc_term(), &trunc_ac_bang_type()), Ok(()));
        let e = k(SortMode::Mtt).check(&ctx(), &trunc_ac_term(), &trunc_ac_type()).unwrap_err();
        assert_eq!(e, DttError::SortViolation { eliminator: "trunc-elim", motive_sort: Sort::Set });
    }

    #[test]
    fn degenerate_relation_extracts_its_witness() {
        let r = |_x: Expr, y: Expr| Expr::id(Expr::Nat, y, Expr::Zero);
        let term = ac_bang_trunc_term_for(&r);
        assert_eq!(k(SortMode::Mtt).check(&Ctx::new(), &term, &trunc_ac_bang_type_for(&r)), Ok(()));
        // h x := |(0, (refl 0, λy' q. q⁻¹))|
        let sym = Expr::lam(
            "y'",
            Expr::lam(
                "q",
                Expr::IdPeel {
                    motive: Binder::new(&["a", "b", "e"], Expr::id(Expr::Nat, v("b"), v("a"))),
                    eq: Box::new(v("q")),
                    refl: Binder::one("w", Expr::refl(v("w"))),
                },
            ),
        );
        let witness = Expr::TruncIntro(Box::new(Expr::pair(Expr::Zero, Expr::pair(Expr::refl(Expr::Zero), sym))));
        let h = Expr::lam("x", witness);
        let premise = Expr::pi("x", Expr::Nat, Expr::trunc(unique_core(&r)));
        assert_eq!(k(SortMode::Mtt).check(&Ctx::new(), &h, &premise), Ok(()));
        let out = normalize(&Expr::app(term, h), &mut 10_000).unwrap();
        let Expr::TruncIntro(p) = out else { panic!("{out:?}") };
        let Expr::Pair(f, _) = *p else { panic!() };
        assert_eq!(*f, Expr::lam("x", Expr::Zero));
    }
}
