//! HA^ω into MTT with propositional truncation: every formula becomes a
//! proposition, with disjunction and existence truncated.

use crate::dtt::Expr;
use crate::logic::Formula;

use super::mltt::{term_to_mltt, type_to_mltt};

pub fn formula_to_trunc(f: &Formula) -> Expr {
    let t = formula_to_trunc;
    match f {
        Formula::False => Expr::FalseP,
        Formula::Eq(ty, a, b) => Expr::id(type_to_mltt(ty), term_to_mltt(a), term_to_mltt(b)),
        Formula::And(a, b) => Expr::and_p(t(a), t(b)),
        Formula::Or(a, b) => Expr::trunc(Expr::sum(t(a), t(b))),
        Formula::Imp(a, b) => Expr::imp_p(t(a), t(b)),
        Formula::Forall(x, ty, body) => Expr::forall_p(x, type_to_mltt(ty), t(body)),
        Formula::Exists(x, ty, body) => Expr::trunc(Expr::sigma(x, type_to_mltt(ty), t(body))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{Ctx, Kernel, Sort, SortMode};
    use crate::hao::{FiniteType, Term};

    #[test]
    fn outputs_are_propositions() {
        let x = || Term::var("x");
        let f = Formula::forall(
            "x",
            FiniteType::N,
            Formula::or(
                Formula::eq_n(x(), Term::Zero),
                Formula::exists("y", FiniteType::N, Formula::eq_n(x(), Term::succ(Term::var("y")))),
            ),
        );
        let e = formula_to_trunc(&f);
        let s = Kernel::new(SortMode::Mtt).classify(&Ctx::new(), &e).unwrap();
        assert!(s.le(Sort::Prop));
        assert!(matches!(e, Expr::ForallP(..)));
    }
}
