//! HA^ω into MLTT, propositions as types.

use alloc::boxed::Box;

use crate::dtt::{Binder, Expr};
use crate::hao::{FiniteType, Term};
use crate::logic::Formula;

pub fn type_to_mltt(t: &FiniteType) -> Expr {
    match t {
        FiniteType::N => Expr::Nat,
        FiniteType::Arrow(a, b) => Expr::arrow(type_to_mltt(a), type_to_mltt(b)),
        FiniteType::Prod(a, b) => Expr::times(type_to_mltt(a), type_to_mltt(b)),
    }
}

fn lams(names: &[&str], body: Expr) -> Expr {
    names.iter().rev().fold(body, |acc, x| Expr::lam(x, acc))
}

fn v(x: &str) -> Expr {
    Expr::var(x)
}

/// The λ-term for a constant, annotated with its type so it can be
/// applied in inference position.
fn constant(t: &Term) -> Expr {
    let ty = |t: &FiniteType| type_to_mltt(t);
    let arr = FiniteType::arrow;
    let (body, ft) = match t {
        Term::Succ => (Expr::lam("n", Expr::succ(v("n"))), FiniteType::n_to_n()),
        Term::K(s, t2) => (lams(&["x", "y"], v("x")), arr(s.clone(), arr(t2.clone(), s.clone()))),
        Term::S(s, t2, r) => (
            lams(&["x", "y", "z"], Expr::app(Expr::app(v("x"), v("z")), Expr::app(v("y"), v("z")))),
            arr(arr(s.clone(), arr(t2.clone(), r.clone())), arr(arr(s.clone(), t2.clone()), arr(s.clone(), r.clone()))),
        ),
        Term::Rec(s) => {
            let motive = Binder::one("_", ty(s));
            let step = Binder::new(&["m", "r"], Expr::apps(v("f"), [v("m"), v("r")]));
            let body = Expr::NatRec { motive, base: Box::new(v("a")), step, target: Box::new(v("n")) };
            let step_ty = arr(FiniteType::N, arr(s.clone(), s.clone()));
            (lams(&["a", "f", "n"], body), arr(s.clone(), arr(step_ty, arr(FiniteType::N, s.clone()))))
        }
        Term::Pair(s, t2) => (
            lams(&["x", "y"], Expr::pair(v("x"), v("y"))),
            arr(s.clone(), arr(t2.clone(), FiniteType::prod(s.clone(), t2.clone()))),
        ),
        Term::Fst(s, t2) => {
            (Expr::lam("p", Expr::fst(v("p"))), arr(FiniteType::prod(s.clone(), t2.clone()), s.clone()))
        }
        Term::Snd(s, t2) => {
            (Expr::lam("p", Expr::snd(v("p"))), arr(FiniteType::prod(s.clone(), t2.clone()), t2.clone()))
        }
        Term::Var(_) | Term::Zero | Term::Ap(..) => unreachable!("not a constant"),
    };
    Expr::ann(body, ty(&ft))
}

pub fn term_to_mltt(t: &Term) -> Expr {
    match t {
        Term::Var(x) => Expr::var(x),
        Term::Zero => Expr::Zero,
        Term::Ap(f, a) if **f == Term::Succ => Expr::succ(term_to_mltt(a)),
        Term::Ap(f, a) => Expr::app(term_to_mltt(f), term_to_mltt(a)),
        _ => constant(t),
    }
}

pub fn formula_to_mltt(f: &Formula) -> Expr {
    match f {
        Formula::False => Expr::Empty,
        Formula::Eq(ty, a, b) => Expr::id(type_to_mltt(ty), term_to_mltt(a), term_to_mltt(b)),
        Formula::And(a, b) => Expr::times(formula_to_mltt(a), formula_to_mltt(b)),
        Formula::Or(a, b) => Expr::sum(formula_to_mltt(a), formula_to_mltt(b)),
        Formula::Imp(a, b) => Expr::arrow(formula_to_mltt(a), formula_to_mltt(b)),
        Formula::Forall(x, ty, body) => Expr::pi(x, type_to_mltt(ty), formula_to_mltt(body)),
        Formula::Exists(x, ty, body) => Expr::sigma(x, type_to_mltt(ty), formula_to_mltt(body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{convertible, Ctx, Kernel, SortMode};
    use crate::hao::{self, TypingContext};

    fn kernel() -> Kernel {
        Kernel::new(SortMode::Mltt)
    }

    #[test]
    fn examples() {
        assert_eq!(type_to_mltt(&FiniteType::N), Expr::Nat);
        let f = Formula::exists("x", FiniteType::N, Formula::eq_n(Term::var("x"), Term::Zero));
        assert_eq!(formula_to_mltt(&f), Expr::sigma("x", Expr::Nat, Expr::id(Expr::Nat, Expr::var("x"), Expr::Zero)));
        assert_eq!(formula_to_mltt(&Formula::False), Expr::Empty);
    }

    #[test]
    fn constants_have_their_types() {
        use FiniteType as T;
        let consts = [
            Term::Succ,
            Term::K(T::N, T::n_to_n()),
            Term::S(T::N, T::N, T::N),
            Term::Rec(T::n_to_n()),
            Term::Pair(T::N, T::n_to_n()),
            Term::Fst(T::N, T::N),
            Term::Snd(T::N, T::N),
        ];
        for c in consts {
            let ty = hao::infer_type(&TypingContext::new(), &c).unwrap();
            assert_eq!(kernel().check(&Ctx::new(), &term_to_mltt(&c), &type_to_mltt(&ty)), Ok(()), "{c:?}");
        }
    }

    #[test]
    fn reduction_is_preserved() {
        // 2 + 3 by the combinator recursor
        let t = Term::apps(hao::add_term(), [Term::numeral(2), Term::numeral(3)]);
        let nf = hao::normalize(&t, 10_000).unwrap();
        assert_eq!(nf, Term::numeral(5));
        assert!(convertible(&term_to_mltt(&t), &term_to_mltt(&nf), 100_000).unwrap());
    }
}
