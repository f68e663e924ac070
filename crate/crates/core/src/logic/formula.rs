use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::hao::{self, FiniteType, FuelExhausted, Term, TypeError, TypingContext};
use crate::names;

/// Many-sorted formulas over HA^ω terms. `Imp` is ⊃.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    False,
    Eq(FiniteType, Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, FiniteType, Box<Formula>),
    Exists(String, FiniteType, Box<Formula>),
}

impl Formula {
    pub fn eq(ty: FiniteType, l: Term, r: Term) -> Formula {
        Formula::Eq(ty, l, r)
    }

    pub fn eq_n(l: Term, r: Term) -> Formula {
        Formula::Eq(FiniteType::N, l, r)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::False)
    }

    /// `(a ⊃ b) ∧ (b ⊃ a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(x: &str, ty: FiniteType, body: Formula) -> Formula {
        Formula::Forall(String::from(x), ty, Box::new(body))
    }

    pub fn exists(x: &str, ty: FiniteType, body: Formula) -> Formula {
        Formula::Exists(String::from(x), ty, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::False => {}
            Formula::Eq(_, l, r) => {
                let mut vs = BTreeSet::new();
                l.free_vars(&mut vs);
                r.free_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, _, body) | Formula::Exists(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        self.free_vars().contains(name)
    }

    /// Every identifier occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::False => {}
            Formula::Eq(_, l, r) => {
                l.free_vars(out);
                r.free_vars(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Forall(x, _, body) | Formula::Exists(x, _, body) => {
                out.insert(x.clone());
                body.all_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of `by` for free `name`.
    pub fn subst(&self, name: &str, by: &Term) -> Formula {
        let mut fv = BTreeSet::new();
        by.free_vars(&mut fv);
        self.subst_with(name, by, &fv)
    }

    fn subst_with(&self, name: &str, by: &Term, by_fv: &BTreeSet<String>) -> Formula {
        match self {
            Formula::False => Formula::False,
            Formula::Eq(ty, l, r) => Formula::Eq(ty.clone(), l.subst(name, by), r.subst(name, by)),
            Formula::And(a, b) => Formula::and(a.subst_with(name, by, by_fv), b.subst_with(name, by, by_fv)),
            Formula::Or(a, b) => Formula::or(a.subst_with(name, by, by_fv), b.subst_with(name, by, by_fv)),
            Formula::Imp(a, b) => Formula::imp(a.subst_with(name, by, by_fv), b.subst_with(name, by, by_fv)),
            Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
                let rebuild = |x: String, body: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(x, ty.clone(), Box::new(body)),
                    _ => Formula::Exists(x, ty.clone(), Box::new(body)),
                };
                if x == name || !body.has_free(name) {
                    return self.clone();
                }
                if by_fv.contains(x) {
                    let body_fv = body.free_vars();
                    let x2 = names::prime_away(x, |c| by_fv.contains(c) || body_fv.contains(c) || c == name);
                    let renamed = body.subst(x, &Term::Var(x2.clone()));
                    rebuild(x2, renamed.subst_with(name, by, by_fv))
                } else {
                    rebuild(x.clone(), body.subst_with(name, by, by_fv))
                }
            }
        }
    }

    /// α-equivalence.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Typechecks every equation at its annotated sort.
    pub fn check_well_formed(&self, ctx: &mut TypingContext) -> Result<(), TypeError> {
        match self {
            Formula::False => Ok(()),
            Formula::Eq(ty, l, r) => {
                for t in [l, r] {
                    let found = hao::infer_type(ctx, t)?;
                    if found != *ty {
                        return Err(TypeError::ArgumentMismatch { fun: Term::var("="), expected: ty.clone(), found });
                    }
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.check_well_formed(ctx)?;
                b.check_well_formed(ctx)
            }
            Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
                ctx.push_shadowing(x.clone(), ty.clone());
                let r = body.check_well_formed(ctx);
                ctx.pop();
                r
            }
        }
    }

    /// Normalizes every embedded term.
    pub fn normalize_terms(&self, fuel: u64) -> Result<Formula, FuelExhausted> {
        Ok(match self {
            Formula::False => Formula::False,
            Formula::Eq(ty, l, r) => Formula::Eq(ty.clone(), hao::normalize(l, fuel)?, hao::normalize(r, fuel)?),
            Formula::And(a, b) => Formula::and(a.normalize_terms(fuel)?, b.normalize_terms(fuel)?),
            Formula::Or(a, b) => Formula::or(a.normalize_terms(fuel)?, b.normalize_terms(fuel)?),
            Formula::Imp(a, b) => Formula::imp(a.normalize_terms(fuel)?, b.normalize_terms(fuel)?),
            Formula::Forall(x, ty, body) => {
                Formula::Forall(x.clone(), ty.clone(), Box::new(body.normalize_terms(fuel)?))
            }
            Formula::Exists(x, ty, body) => {
                Formula::Exists(x.clone(), ty.clone(), Box::new(body.normalize_terms(fuel)?))
            }
        })
    }

    /// α-equivalence up to definitional equality of embedded terms.
    pub fn convertible(&self, other: &Formula, fuel: u64) -> Result<bool, FuelExhausted> {
        if self.alpha_eq(other) {
            return Ok(true);
        }
        Ok(self.normalize_terms(fuel)?.alpha_eq(&other.normalize_terms(fuel)?))
    }

    /// Binders renamed to `#0`, `#1`, ... by depth; α-equivalent formulas
    /// have equal canonical forms.
    pub fn canonical(&self) -> Formula {
        self.canonical_at(0)
    }

    fn canonical_at(&self, depth: usize) -> Formula {
        match self {
            Formula::False | Formula::Eq(..) => self.clone(),
            Formula::And(a, b) => Formula::and(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::Or(a, b) => Formula::or(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::Imp(a, b) => Formula::imp(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::Forall(x, ty, body) | Formula::Exists(x, ty, body) => {
                let c = alloc::format!("#{depth}");
                let body = body.subst(x, &Term::Var(c.clone())).canonical_at(depth + 1);
                match self {
                    Formula::Forall(..) => Formula::Forall(c, ty.clone(), Box::new(body)),
                    _ => Formula::Exists(c, ty.clone(), Box::new(body)),
                }
            }
        }
    }

    /// True when no quantifier ranges over a type other than `N`.
    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::False | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.is_first_order() && b.is_first_order(),
            Formula::Forall(_, ty, body) | Formula::Exists(_, ty, body) => {
                *ty == FiniteType::N && body.is_first_order()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::False | Formula::Eq(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => 1 + body.depth(),
        }
    }
}

fn lookup_pair(env: &[(String, String)], l: &str, r: &str) -> Option<bool> {
    for (a, b) in env.iter().rev() {
        if a == l || b == r {
            return Some(a == l && b == r);
        }
    }
    None
}

fn alpha_term(l: &Term, r: &Term, env: &[(String, String)]) -> bool {
    match (l, r) {
        (Term::Var(x), Term::Var(y)) => lookup_pair(env, x, y).unwrap_or(x == y),
        (Term::Ap(f1, a1), Term::Ap(f2, a2)) => alpha_term(f1, f2, env) && alpha_term(a1, a2, env),
        (Term::Var(_), _) | (_, Term::Var(_)) | (Term::Ap(..), _) | (_, Term::Ap(..)) => false,
        _ => l == r,
    }
}

fn alpha(l: &Formula, r: &Formula, env: &mut Vec<(String, String)>) -> bool {
    match (l, r) {
        (Formula::False, Formula::False) => true,
        (Formula::Eq(t1, a1, b1), Formula::Eq(t2, a2, b2)) => {
            t1 == t2 && alpha_term(a1, a2, env) && alpha_term(b1, b2, env)
        }
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => alpha(a1, a2, env) && alpha(b1, b2, env),
        (Formula::Forall(x, t1, b1), Formula::Forall(y, t2, b2))
        | (Formula::Exists(x, t1, b1), Formula::Exists(y, t2, b2)) => {
            if t1 != t2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha(b1, b2, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// `∃!y^τ φ` as `∃y φ ∧ ∀y₁ ∀y₂ ((φ[y₁] ∧ φ[y₂]) ⊃ y₁ =_τ y₂)` with fresh
/// `y₁`, `y₂`.
pub fn expand_exists_unique(y: &str, ty: &FiniteType, body: &Formula) -> Formula {
    let mut taken = BTreeSet::new();
    body.all_names(&mut taken);
    taken.insert(String::from(y));
    let base = alloc::format!("{y}1");
    let y1 = names::fresh(&base, |c| taken.contains(c));
    taken.insert(y1.clone());
    let base = alloc::format!("{y}2");
    let y2 = names::fresh(&base, |c| taken.contains(c));
    let at = |v: &str| body.subst(y, &Term::var(v));
    let uniqueness = Formula::forall(
        &y1,
        ty.clone(),
        Formula::forall(
            &y2,
            ty.clone(),
            Formula::imp(Formula::and(at(&y1), at(&y2)), Formula::eq(ty.clone(), Term::var(&y1), Term::var(&y2))),
        ),
    );
    Formula::and(Formula::exists(y, ty.clone(), body.clone()), uniqueness)
}

/// Recognizes the output of [`expand_exists_unique`] up to α.
pub fn match_exists_unique(f: &Formula) -> Option<(&str, &FiniteType, &Formula)> {
    let Formula::And(ex, _) = f else { return None };
    let Formula::Exists(y, ty, body) = &**ex else { return None };
    if expand_exists_unique(y, ty, body).alpha_eq(f) {
        Some((y, ty, body))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FiniteType as T;

    fn y_eq_x() -> Formula {
        Formula::eq_n(Term::var("y"), Term::var("x"))
    }

    #[test]
    fn exists_unique_expansion_shape() {
        let e = expand_exists_unique("y", &T::N, &y_eq_x());
        let expected = Formula::and(
            Formula::exists("y", T::N, y_eq_x()),
            Formula::forall(
                "y1",
                T::N,
                Formula::forall(
                    "y2",
                    T::N,
                    Formula::imp(
                        Formula::and(
                            Formula::eq_n(Term::var("y1"), Term::var("x")),
                            Formula::eq_n(Term::var("y2"), Term::var("x")),
                        ),
                        Formula::eq_n(Term::var("y1"), Term::var("y2")),
                    ),
                ),
            ),
        );
        assert_eq!(e, expected);
        assert!(match_exists_unique(&e).is_some());
    }

    #[test]
    fn exists_unique_vacuous_body() {
        let e = expand_exists_unique("y", &T::N, &Formula::False);
        assert!(e.check_well_formed(&mut TypingContext::new()).is_ok());
    }

    #[test]
    fn nested_exists_unique_by_hand() {
        // ∃!y ∃!z (z = y): inner expansion first, then the outer one around it.
        let inner = expand_exists_unique("z", &T::N, &Formula::eq_n(Term::var("z"), Term::var("y")));
        let outer = expand_exists_unique("y", &T::N, &inner);
        let Formula::And(ex, uniq) = &outer else { panic!() };
        assert!(ex.alpha_eq(&Formula::exists("y", T::N, inner.clone())));
        // uniqueness instantiates the whole inner expansion at y1 and y2
        let Formula::Forall(y1, _, rest) = &**uniq else { panic!() };
        let Formula::Forall(y2, _, imp) = &**rest else { panic!() };
        let Formula::Imp(conj, _) = &**imp else { panic!() };
        let expect = Formula::and(inner.subst("y", &Term::var(y1)), inner.subst("y", &Term::var(y2)));
        assert!(conj.alpha_eq(&expect));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (∀y. x = y)[y/x] must not capture
        let f = Formula::forall("y", T::N, Formula::eq_n(Term::var("x"), Term::var("y")));
        let g = f.subst("x", &Term::var("y"));
        let Formula::Forall(b, _, body) = &g else { panic!() };
        assert_ne!(b, "y");
        assert!(body.has_free("y"));
        assert!(g.free_vars().contains("y"));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::forall("x", T::N, Formula::eq_n(Term::var("x"), Term::var("z")));
        let b = Formula::forall("w", T::N, Formula::eq_n(Term::var("w"), Term::var("z")));
        let c = Formula::forall("z", T::N, Formula::eq_n(Term::var("z"), Term::var("z")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn convertible_up_to_reduction() {
        let k = Term::apps(Term::K(T::N, T::N), [Term::Zero, Term::var("q")]);
        let a = Formula::eq_n(k, Term::Zero);
        let b = Formula::eq_n(Term::Zero, Term::Zero);
        assert!(a.convertible(&b, 100).unwrap());
    }
}
