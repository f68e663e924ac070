//! Comprehension from unique choice and excluded middle.
//!
//! For `φ(x)` the characteristic relation `χ(x,y)` is functional by a case
//! split on `φ(x)`. Unique choice turns it into a function `f`, and `f x = 1`
//! holds exactly when `φ(x)` does.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::hao::{FiniteType, Term, TypingContext};
use crate::logic::{
    check_proof, choice_conclusion, expand_exists_unique, AxiomInst, AxiomProfile, Formula, LemmaEnv, Proof,
    ProofDiagnostic, ProofEnv,
};
use crate::names;
use crate::syntax::hao::TheoryDecl;

/// The comprehension variable of `φ`.
pub const X: &str = "x";
/// The value variable of `χ`.
pub const Y: &str = "y";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaError {
    /// `φ` has a free variable other than `x`.
    ExtraFreeVariable(String),
    /// `y` occurs free in `φ`.
    ValueVariableFree,
    IllTyped(String),
}

impl fmt::Display for CaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaError::ExtraFreeVariable(v) => write!(f, "φ may only have x free, but '{v}' is free"),
            CaError::ValueVariableFree => f.write_str("y must not be free in φ"),
            CaError::IllTyped(m) => write!(f, "φ is not well formed with x : N: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaInstance {
    pub phi: Formula,
    pub chi: Formula,
    pub proof: Proof,
    pub goal: Formula,
}

impl CaInstance {
    pub fn check(&self, profile: AxiomProfile) -> Result<(), Vec<ProofDiagnostic>> {
        let lemmas = LemmaEnv::new();
        let env = ProofEnv { profile, lemmas: &lemmas, fuel: crate::DEFAULT_FUEL };
        check_proof(&env, &TypingContext::new(), &[], &self.proof, &self.goal)
    }
}

fn one() -> Term {
    Term::numeral(1)
}

fn var(x: &str) -> Term {
    Term::var(x)
}

fn validate(phi: &Formula) -> Result<(), CaError> {
    let fv = phi.free_vars();
    if let Some(v) = fv.iter().find(|v| v.as_str() != X) {
        if v == Y {
            return Err(CaError::ValueVariableFree);
        }
        return Err(CaError::ExtraFreeVariable(v.clone()));
    }
    let mut ctx = TypingContext::new();
    ctx.push_shadowing(String::from(X), FiniteType::N);
    phi.check_well_formed(&mut ctx).map_err(|e| CaError::IllTyped(format!("{e}")))
}

/// `(φ ∧ y = 1) ∨ (¬φ ∧ y = 0)`
pub fn build_chi(phi: &Formula) -> Result<Formula, CaError> {
    validate(phi)?;
    Ok(chi_of(phi))
}

fn chi_of(phi: &Formula) -> Formula {
    Formula::or(
        Formula::and(phi.clone(), Formula::eq_n(var(Y), one())),
        Formula::and(Formula::not(phi.clone()), Formula::eq_n(var(Y), Term::Zero)),
    )
}

/// `¬(1 = 0)`
pub fn one_ne_zero() -> Formula {
    Formula::not(Formula::eq_n(one(), Term::Zero))
}

fn one_ne_zero_proof() -> Proof {
    let inst = Proof::forall_e(Proof::Axiom(AxiomInst::SuccNeZero), Term::Zero);
    Proof::imp_i("h", Proof::imp_e(inst, Proof::hyp("h")))
}

/// Names the derivation binds, kept apart from everything in `φ`.
struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    fn new(phi: &Formula) -> Fresh {
        let mut taken = BTreeSet::new();
        phi.all_names(&mut taken);
        taken.insert(String::from(X));
        taken.insert(String::from(Y));
        Fresh { taken }
    }

    fn name(&mut self, base: &str) -> String {
        let n = names::fresh(base, |c| self.taken.contains(c));
        self.taken.insert(n.clone());
        n
    }
}

/// `t = s` from a proof of `s = t`.
fn sym(fr: &mut Fresh, e: Proof, s: &Term) -> Proof {
    let z = fr.name("z");
    Proof::eq_subst(&z, FiniteType::N, Formula::eq_n(var(&z), s.clone()), e, Proof::Refl(s.clone()))
}

/// `a = b` from `a = m` and `m = b`.
fn trans(fr: &mut Fresh, a: &Term, e1: Proof, e2: Proof) -> Proof {
    let z = fr.name("z");
    Proof::eq_subst(&z, FiniteType::N, Formula::eq_n(a.clone(), var(&z)), e2, e1)
}

/// `∀x ∃!y χ`
fn functional(chi: &Formula) -> Formula {
    Formula::forall(X, FiniteType::N, expand_exists_unique(Y, &FiniteType::N, chi))
}

fn functional_proof(fr: &mut Fresh, phi: &Formula) -> Proof {
    let existence = Proof::or_e(
        Proof::Lem(phi.clone()),
        "p",
        Proof::exists_i(one(), Proof::or_i1(Proof::and_i(Proof::hyp("p"), Proof::Refl(one())))),
        "np",
        Proof::exists_i(Term::Zero, Proof::or_i2(Proof::and_i(Proof::hyp("np"), Proof::Refl(Term::Zero)))),
    );
    let (a, b) = (fr.name("a"), fr.name("b"));
    let (ta, tb) = (var(&a), var(&b));
    let absurd = |neg: &str, pos: &str| {
        Proof::false_e(Proof::imp_e(Proof::and_e1(Proof::hyp(neg)), Proof::and_e1(Proof::hyp(pos))))
    };
    // both values equal the same numeral
    let same = |fr: &mut Fresh, l: &str, r: &str| {
        let back = sym(fr, Proof::and_e2(Proof::hyp(r)), &tb);
        trans(fr, &ta, Proof::and_e2(Proof::hyp(l)), back)
    };
    let ones = same(fr, "l1", "l2");
    let zeros = same(fr, "r1", "r2");
    let second = || Proof::and_e2(Proof::hyp("c"));
    let body = Proof::or_e(
        Proof::and_e1(Proof::hyp("c")),
        "l1",
        Proof::or_e(second(), "l2", ones, "r2", absurd("r2", "l1")),
        "r1",
        Proof::or_e(second(), "l2", absurd("r1", "l2"), "r2", zeros),
    );
    let uniqueness = Proof::forall_i(&a, Proof::forall_i(&b, Proof::imp_i("c", body)));
    Proof::forall_i(X, Proof::and_i(existence, uniqueness))
}

/// `∃f ∀x (f x = 1 ⟺ φ)` with the function variable of `choice`.
fn comprehension(phi: &Formula, choice: &Formula) -> Formula {
    let Formula::Exists(f, ty, _) = choice else { unreachable!("choice conclusions are existential") };
    let fx = Term::ap(var(f), var(X));
    Formula::exists(
        f,
        ty.clone(),
        Formula::forall(X, FiniteType::N, Formula::iff(Formula::eq_n(fx, one()), phi.clone())),
    )
}

/// `(∃f ∀x χ(x, f x)) → CA`, given a proof of `¬(1 = 0)`.
fn unfold_proof(fr: &mut Fresh, onz: Proof) -> Proof {
    let g = fr.name("g");
    let gx = Term::ap(var(&g), var(X));
    let k = || Proof::forall_e(Proof::hyp("G"), var(X));
    // 1 = g x = 0
    let one_zero = {
        let back = sym(fr, Proof::hyp("e"), &gx);
        trans(fr, &one(), back, Proof::and_e2(Proof::hyp("r")))
    };
    let forward = Proof::imp_i(
        "e",
        Proof::or_e(k(), "l", Proof::and_e1(Proof::hyp("l")), "r", Proof::false_e(Proof::imp_e(onz, one_zero))),
    );
    let backward = Proof::imp_i(
        "p",
        Proof::or_e(
            k(),
            "l",
            Proof::and_e2(Proof::hyp("l")),
            "r",
            Proof::false_e(Proof::imp_e(Proof::and_e1(Proof::hyp("r")), Proof::hyp("p"))),
        ),
    );
    let inner = Proof::exists_i(var(&g), Proof::forall_i(X, Proof::and_i(forward, backward)));
    Proof::imp_i("H", Proof::exists_e(Proof::hyp("H"), &g, "G", inner))
}

fn irc(chi: &Formula, proof: Proof) -> Proof {
    Proof::Irc {
        x: String::from(X),
        x_ty: FiniteType::N,
        y: String::from(Y),
        y_ty: FiniteType::N,
        body: chi.clone(),
        proof: alloc::boxed::Box::new(proof),
    }
}

/// The derivation of comprehension for `φ` as one closed proof.
pub fn derive_ca(phi: &Formula) -> Result<CaInstance, CaError> {
    let chi = build_chi(phi)?;
    let mut fr = Fresh::new(phi);
    let choice = choice_conclusion(X, &FiniteType::N, Y, &FiniteType::N, &chi);
    fr.taken.extend(choice_names(&choice));
    let goal = comprehension(phi, &choice);
    let onz = fr.name("one-ne-zero");
    let unfold = Proof::annot(Formula::imp(choice, goal.clone()), unfold_proof(&mut fr, Proof::hyp(&onz)));
    let functional = functional_proof(&mut fr, phi);
    let body = Proof::imp_e(unfold, irc(&chi, functional));
    let proof = Proof::have(&onz, one_ne_zero(), one_ne_zero_proof(), body);
    Ok(CaInstance { phi: phi.clone(), chi, proof, goal })
}

fn choice_names(choice: &Formula) -> BTreeSet<String> {
    let mut s = BTreeSet::new();
    choice.all_names(&mut s);
    s
}

/// The same derivation as a sequence of lemmas, each citing the previous
/// ones, under the profile it needs.
pub fn ca_theory(phi: &Formula) -> Result<Vec<TheoryDecl>, CaError> {
    let chi = build_chi(phi)?;
    let mut fr = Fresh::new(phi);
    let choice = choice_conclusion(X, &FiniteType::N, Y, &FiniteType::N, &chi);
    fr.taken.extend(choice_names(&choice));
    let goal = comprehension(phi, &choice);
    let s = String::from;
    let functional_stmt = functional(&chi);
    let functional_pf = functional_proof(&mut fr, phi);
    Ok(vec![
        TheoryDecl::Profile(vec![s("lem"), s("irc!")]),
        TheoryDecl::Lemma(s("one-ne-zero"), one_ne_zero(), one_ne_zero_proof()),
        TheoryDecl::Formula(
            s("chi"),
            Formula::forall(X, FiniteType::N, Formula::forall(Y, FiniteType::N, chi.clone())),
        ),
        TheoryDecl::Lemma(s("chi-functional"), functional_stmt.clone(), functional_pf.clone()),
        TheoryDecl::Lemma(s("chi-choice"), choice.clone(), irc(&chi, Proof::cite("chi-functional"))),
        TheoryDecl::Lemma(
            s("ca-unfold"),
            Formula::imp(choice, goal.clone()),
            unfold_proof(&mut fr, Proof::cite("one-ne-zero")),
        ),
        TheoryDecl::Lemma(s("ca"), goal, Proof::imp_e(Proof::cite("ca-unfold"), Proof::cite("chi-choice"))),
        TheoryDecl::Profile(vec![s("irc!")]),
        TheoryDecl::Reject(s("chi-functional-without-lem"), functional_stmt.clone(), functional_pf),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Principle, ProofErrorKind};

    fn x_is_zero() -> Formula {
        Formula::eq_n(var(X), Term::Zero)
    }

    const FULL: AxiomProfile = AxiomProfile::CLASSICAL_IRC;

    /// Classical truth of a formula over numerals, for formulas whose
    /// terms normalize to numerals.
    fn truth(f: &Formula) -> bool {
        match f {
            Formula::False => false,
            Formula::Eq(_, a, b) => {
                let n = |t: &Term| crate::hao::normalize(t, 10_000).unwrap().as_numeral().unwrap();
                n(a) == n(b)
            }
            Formula::And(a, b) => truth(a) && truth(b),
            Formula::Or(a, b) => truth(a) || truth(b),
            Formula::Imp(a, b) => !truth(a) || truth(b),
            _ => panic!("quantifier"),
        }
    }

    #[test]
    fn chi_shape() {
        let chi = build_chi(&x_is_zero()).unwrap();
        assert_eq!(
            crate::syntax::hao::print_formula(&chi),
            "(or (and (= N x 0) (= N y 1)) (and (not (= N x 0)) (= N y 0)))"
        );
        assert!(build_chi(&Formula::False).is_ok());
        assert_eq!(build_chi(&Formula::eq_n(var("y"), Term::Zero)), Err(CaError::ValueVariableFree));
        assert!(matches!(build_chi(&Formula::eq_n(var("z"), Term::Zero)), Err(CaError::ExtraFreeVariable(_))));
    }

    #[test]
    fn chi_is_functional_classically() {
        let chi = build_chi(&x_is_zero()).unwrap();
        for x in 0..3 {
            let at = |y: u64| truth(&chi.subst(X, &Term::numeral(x)).subst(Y, &Term::numeral(y)));
            let ys: Vec<u64> = (0..2).filter(|y| at(*y)).collect();
            assert_eq!(ys, [if x == 0 { 1 } else { 0 }]);
        }
    }

    #[test]
    fn ca_for_x_is_zero() {
        let inst = derive_ca(&x_is_zero()).unwrap();
        assert_eq!(inst.check(FULL), Ok(()));
        assert_eq!(
            crate::syntax::hao::print_formula(&inst.goal),
            "(exists (f (-> N N)) (forall (x N) (iff (= N (ap f x) 1) (= N x 0))))"
        );
    }

    #[test]
    fn missing_principles_fail_at_their_nodes() {
        let inst = derive_ca(&x_is_zero()).unwrap();
        let no_lem = AxiomProfile { lem: false, ..FULL };
        let errs = inst.check(no_lem).unwrap_err();
        let lem_paths = inst.proof.find_paths(&|p| matches!(p, Proof::Lem(_)));
        assert_eq!(errs.iter().map(|d| d.path.clone()).collect::<Vec<_>>(), lem_paths);
        assert!(errs.iter().all(|d| d.kind == ProofErrorKind::Disabled(Principle::Lem)));
        let no_irc = AxiomProfile { irc_nn: false, ..FULL };
        let errs = inst.check(no_irc).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, ProofErrorKind::Disabled(Principle::Irc));
        assert_eq!(vec![errs[0].path.clone()], inst.proof.find_paths(&|p| matches!(p, Proof::Irc { .. })));
    }

    #[test]
    fn staged_lemmas_check() {
        use crate::report::Status;
        use crate::sexp::Span;
        use crate::syntax::hao::Item;
        let decls = ca_theory(&x_is_zero()).unwrap();
        let items: Vec<Item<TheoryDecl>> = decls
            .into_iter()
            .map(|d| Item {
                name: String::from(d.kind()),
                kind: String::from(d.kind()),
                span: Span::new(0, 0),
                decl: Ok(d),
            })
            .collect();
        let r = crate::logic::theory::check_theory(&items, &[], crate::DEFAULT_FUEL);
        assert!(r.iter().all(|r| r.status.passes()), "{r:#?}");
        assert_eq!(r.last().unwrap().status, Status::ExpectedReject);
    }
}
