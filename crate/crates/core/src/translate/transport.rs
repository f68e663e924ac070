//! Natural-deduction derivations into MLTT proof terms. Each rule becomes
//! the introduction or elimination of the corresponding type former;
//! defining axioms become reflexivity and the choice principles become
//! their projection terms.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::mltt::{formula_to_mltt, term_to_mltt};
use crate::dtt::{Binder, Ctx, DttDecl, Expr};
use crate::hao::Term;
use crate::logic::{AxiomInst, Formula, Proof};
use crate::names;
use crate::syntax::hao::{Item, TheoryDecl};

pub const SUCC_NE_ZERO: &str = "succ-ne-zero";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportError {
    /// Excluded middle has no proof term.
    Classical,
}

impl fmt::Display for TransportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportError::Classical => f.write_str("classical node: excluded middle has no MLTT proof term"),
        }
    }
}

fn v(x: &str) -> Expr {
    Expr::var(x)
}

fn term_names(t: &Term, out: &mut BTreeSet<String>) {
    t.free_vars(out);
}

/// Names of term variables and cited lemmas anywhere in `p`.
fn collect(p: &Proof, terms: &mut BTreeSet<String>, labels: &mut BTreeSet<String>) {
    match p {
        Proof::Hyp(l) => {
            labels.insert(l.clone());
        }
        Proof::Cite(n) => {
            terms.insert(n.clone());
        }
        Proof::OrE { left, right, .. } => {
            labels.insert(left.0.clone());
            labels.insert(right.0.clone());
        }
        Proof::ImpI(l, _) => {
            labels.insert(l.clone());
        }
        Proof::ForallI(x, _) => {
            terms.insert(x.clone());
        }
        Proof::ForallE(_, t) | Proof::ExistsI(t, _) | Proof::Refl(t) => term_names(t, terms),
        Proof::ExistsE { var, label, .. } => {
            terms.insert(var.clone());
            labels.insert(label.clone());
        }
        Proof::EqSubst { var, motive, .. } => {
            terms.insert(var.clone());
            motive.all_names(terms);
        }
        Proof::Axiom(a) => a.formula().all_names(terms),
        Proof::Induction { var, motive, step_var, step_label, .. } => {
            terms.insert(var.clone());
            terms.insert(step_var.clone());
            labels.insert(step_label.clone());
            motive.all_names(terms);
        }
        Proof::Lem(f) | Proof::Annot(f, _) => f.all_names(terms),
        Proof::Have(l, f, ..) => {
            labels.insert(l.clone());
            f.all_names(terms);
        }
        Proof::Irc { x, y, body, .. } => {
            terms.insert(x.clone());
            terms.insert(y.clone());
            body.all_names(terms);
        }
        _ => {}
    }
    for c in p.children() {
        collect(c, terms, labels);
    }
}

struct Transport {
    terms: BTreeSet<String>,
    taken: BTreeSet<String>,
}

impl Transport {
    fn new(p: &Proof, goal: Option<&Formula>) -> Transport {
        let mut terms = BTreeSet::new();
        let mut labels = BTreeSet::new();
        collect(p, &mut terms, &mut labels);
        if let Some(g) = goal {
            g.all_names(&mut terms);
        }
        terms.insert(String::from(SUCC_NE_ZERO));
        let taken = terms.union(&labels).cloned().collect();
        Transport { terms, taken }
    }

    /// Hypothesis labels share the namespace of term variables in MLTT, so
    /// a label that collides with one moves to a fresh name.
    fn label(&self, l: &str) -> String {
        if self.terms.contains(l) {
            names::fresh(l, |c| self.taken.contains(c))
        } else {
            String::from(l)
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        let x = names::fresh(base, |c| self.taken.contains(c));
        self.taken.insert(x.clone());
        x
    }

    fn go(&mut self, p: &Proof) -> Result<Expr, TransportError> {
        let b = |e: Expr| Box::new(e);
        Ok(match p {
            Proof::Hyp(l) => v(&self.label(l)),
            Proof::Cite(n) => v(n),
            Proof::AndI(a, c) => Expr::pair(self.go(a)?, self.go(c)?),
            Proof::AndE1(a) => Expr::fst(self.go(a)?),
            Proof::AndE2(a) => Expr::snd(self.go(a)?),
            Proof::OrI1(a) => Expr::Inl(b(self.go(a)?)),
            Proof::OrI2(a) => Expr::Inr(b(self.go(a)?)),
            Proof::OrE { scrutinee, left, right } => Expr::Case {
                scrut: b(self.go(scrutinee)?),
                motive: None,
                left: Binder::one(&self.label(&left.0), self.go(&left.1)?),
                right: Binder::one(&self.label(&right.0), self.go(&right.1)?),
            },
            Proof::ImpI(l, body) => Expr::lam(&self.label(l), self.go(body)?),
            Proof::ImpE(f, a) => Expr::app(self.go(f)?, self.go(a)?),
            Proof::ForallI(x, body) => Expr::lam(x, self.go(body)?),
            Proof::ForallE(a, t) => Expr::app(self.go(a)?, term_to_mltt(t)),
            Proof::ExistsI(t, body) => Expr::pair(term_to_mltt(t), self.go(body)?),
            Proof::ExistsE { scrutinee, var, label, body } => Expr::ExElim {
                scrut: b(self.go(scrutinee)?),
                body: Binder::new(&[var, &self.label(label)], self.go(body)?),
            },
            Proof::FalseE(a) => {
                let inner = self.go(a)?;
                let inner = if inferable(a) { inner } else { Expr::ann(inner, Expr::Empty) };
                Expr::Absurd(None, b(inner))
            }
            Proof::Refl(t) => Expr::refl(term_to_mltt(t)),
            Proof::EqSubst { var, motive, eq, base, .. } => {
                let (x, y, e, w, q) =
                    (self.fresh("x"), self.fresh("y"), self.fresh("e"), self.fresh("w"), self.fresh("q"));
                let m = formula_to_mltt(motive);
                let at = |z: &str| m.subst(var, &v(z));
                let peel = Expr::IdPeel {
                    motive: Binder::new(&[&x, &y, &e], Expr::arrow(at(&x), at(&y))),
                    eq: b(self.go(eq)?),
                    refl: Binder::one(&w, Expr::lam(&q, v(&q))),
                };
                Expr::app(peel, self.go(base)?)
            }
            Proof::Axiom(a) => self.axiom(a),
            Proof::Induction { var, motive, base, step_var, step_label, step } => {
                let n = self.fresh("n");
                let m = formula_to_mltt(motive);
                let rec = Expr::NatRec {
                    motive: Binder::one(var, m.clone()),
                    base: b(self.go(base)?),
                    step: Binder::new(&[step_var, &self.label(step_label)], self.go(step)?),
                    target: b(v(&n)),
                };
                Expr::ann(Expr::lam(&n, rec), Expr::pi(var, Expr::Nat, m))
            }
            Proof::Lem(_) => return Err(TransportError::Classical),
            Proof::Irc { x, x_ty, y, y_ty, body, proof } => {
                let inst = AxiomInst::AcBang {
                    x: x.clone(),
                    x_ty: x_ty.clone(),
                    y: y.clone(),
                    y_ty: y_ty.clone(),
                    body: body.clone(),
                };
                Expr::app(self.axiom(&inst), self.go(proof)?)
            }
            Proof::Have(l, f, a, body) => {
                Expr::Let(b(formula_to_mltt(f)), b(self.go(a)?), Binder::one(&self.label(l), self.go(body)?))
            }
            Proof::Annot(f, a) => Expr::ann(self.go(a)?, formula_to_mltt(f)),
        })
    }

    fn axiom(&mut self, a: &AxiomInst) -> Expr {
        let f = a.formula();
        let term = match a {
            AxiomInst::SuccNeZero => return v(SUCC_NE_ZERO),
            AxiomInst::SuccInj => {
                let pred = |t: Expr| Expr::NatRec {
                    motive: Binder::one("_", Expr::Nat),
                    base: Box::new(Expr::Zero),
                    step: Binder::new(&["m", "r"], v("m")),
                    target: Box::new(t),
                };
                let peel = Expr::IdPeel {
                    motive: Binder::new(&["a", "b", "q"], Expr::id(Expr::Nat, pred(v("a")), pred(v("b")))),
                    eq: Box::new(v("e")),
                    refl: Binder::one("w", Expr::refl(pred(v("w")))),
                };
                Expr::lam("x", Expr::lam("y", Expr::lam("e", peel)))
            }
            AxiomInst::Ac { x, body, .. } | AxiomInst::AcBang { x, body, .. } => {
                let mut used = BTreeSet::new();
                body.all_names(&mut used);
                used.insert(x.clone());
                let h = names::fresh("h", |c| used.contains(c));
                let hx = Expr::app(v(&h), v(x));
                let wit = if matches!(a, AxiomInst::Ac { .. }) { hx } else { Expr::fst(hx) };
                Expr::lam(&h, Expr::pair(Expr::lam(x, Expr::fst(wit.clone())), Expr::lam(x, Expr::snd(wit))))
            }
            _ => {
                let mut vars: Vec<String> = Vec::new();
                let mut cur = &f;
                while let Formula::Forall(x, _, body) = cur {
                    vars.push(x.clone());
                    cur = body;
                }
                let Formula::Eq(_, _, rhs) = cur else { unreachable!("defining axioms are equations") };
                vars.iter().rev().fold(Expr::refl(term_to_mltt(rhs)), |acc, x| Expr::lam(x, acc))
            }
        };
        Expr::ann(term, formula_to_mltt(&f))
    }
}

/// Nodes whose translation infers its own type.
fn inferable(p: &Proof) -> bool {
    matches!(
        p,
        Proof::Hyp(_)
            | Proof::Cite(_)
            | Proof::AndE1(_)
            | Proof::AndE2(_)
            | Proof::ImpE(..)
            | Proof::ForallE(..)
            | Proof::Refl(_)
            | Proof::EqSubst { .. }
            | Proof::Axiom(_)
            | Proof::Induction { .. }
            | Proof::Irc { .. }
            | Proof::Annot(..)
    )
}

/// The proof term of a derivation.
pub fn transport_proof(p: &Proof) -> Result<Expr, TransportError> {
    Transport::new(p, None).go(p)
}

/// As [`transport_proof`], keeping clear of the names in `goal`.
pub fn transport_proof_for(p: &Proof, goal: &Formula) -> Result<Expr, TransportError> {
    Transport::new(p, Some(goal)).go(p)
}

/// `succ-ne-zero` and every given lemma statement as assumptions.
pub fn transport_context(lemmas: &[(String, Formula)]) -> Ctx {
    let mut ctx = Ctx::new().with_term(SUCC_NE_ZERO, formula_to_mltt(&AxiomInst::SuccNeZero.formula()));
    for (n, f) in lemmas {
        ctx = ctx.with_term(n, formula_to_mltt(f));
    }
    ctx
}

/// A translated declaration, with a comment to print before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transported {
    pub comment: Option<String>,
    pub decl: Option<DttDecl>,
}

/// Translates a theory file into an MLTT goal file. Lemmas become
/// definitions with their proof terms, or assumptions when the proof is
/// classical; formulas become classifications.
pub fn theory_to_mltt(items: &[Item<TheoryDecl>]) -> Vec<Transported> {
    let plain = |decl| Transported { comment: None, decl: Some(decl) };
    let mut out = alloc::vec![
        plain(DttDecl::Mode(crate::dtt::SortMode::Mltt)),
        plain(DttDecl::Assume(String::from(SUCC_NE_ZERO), formula_to_mltt(&AxiomInst::SuccNeZero.formula()))),
    ];
    for item in items {
        match &item.decl {
            Ok(TheoryDecl::Lemma(n, f, p)) => {
                let ty = formula_to_mltt(f);
                out.push(match transport_proof_for(p, f) {
                    Ok(term) => plain(DttDecl::Define(n.clone(), ty, term)),
                    Err(e) => {
                        Transported { comment: Some(format!("{n}: {e}")), decl: Some(DttDecl::Assume(n.clone(), ty)) }
                    }
                });
            }
            Ok(TheoryDecl::Formula(n, f)) => {
                out.push(plain(DttDecl::Classify { name: Some(n.clone()), ty: formula_to_mltt(f), expected: None }))
            }
            Ok(_) => {}
            Err(e) => out.push(Transported {
                comment: Some(format!("{}: not translated: {}", item.name, e.to_string().replace('\n', " "))),
                decl: None,
            }),
        }
    }
    out
}

pub fn print_transported(items: &[Transported]) -> String {
    let mut out = String::new();
    for t in items {
        if let Some(c) = &t.comment {
            out.push_str("; ");
            out.push_str(c);
            out.push('\n');
        }
        if let Some(d) = &t.decl {
            out.push_str(&crate::syntax::dtt::print_dtt_decl(d));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{Kernel, SortMode};
    use crate::hao::{FiniteType, TypingContext};
    use crate::logic::{check_proof, AxiomProfile, LemmaEnv, ProofEnv};

    fn closed_ok(p: &Proof, goal: &Formula) {
        let lemmas = LemmaEnv::new();
        let env = ProofEnv {
            profile: AxiomProfile { irc_nn: true, ac: true, ac_bang: true, ..AxiomProfile::INTUITIONISTIC },
            lemmas: &lemmas,
            fuel: crate::DEFAULT_FUEL,
        };
        check_proof(&env, &TypingContext::new(), &[], p, goal).unwrap();
        let e = transport_proof_for(p, goal).unwrap();
        let r = Kernel::new(SortMode::Mltt).check(&transport_context(&[]), &e, &formula_to_mltt(goal));
        assert_eq!(r, Ok(()), "{}", crate::syntax::dtt::print_expr(&e));
    }

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn axioms_have_terms() {
        use FiniteType as T;
        for a in [
            AxiomInst::SuccNeZero,
            AxiomInst::SuccInj,
            AxiomInst::KDef(T::N, T::n_to_n()),
            AxiomInst::SDef(T::N, T::N, T::N),
            AxiomInst::RecZero(T::N),
            AxiomInst::RecSucc(T::n_to_n()),
            AxiomInst::FstDef(T::N, T::N),
            AxiomInst::SndDef(T::N, T::N),
        ] {
            closed_ok(&Proof::Axiom(a.clone()), &a.formula());
        }
    }

    #[test]
    fn induction_and_substitution() {
        // ∀x (x = 0 ∨ ∃y x = succ y)
        let motive = Formula::or(
            Formula::eq_n(x(), Term::Zero),
            Formula::exists("y", FiniteType::N, Formula::eq_n(x(), Term::succ(Term::var("y")))),
        );
        let p = Proof::Induction {
            var: String::from("x"),
            motive: motive.clone(),
            base: Box::new(Proof::or_i1(Proof::Refl(Term::Zero))),
            step_var: String::from("k"),
            step_label: String::from("x"),
            step: Box::new(Proof::or_i2(Proof::exists_i(Term::var("k"), Proof::Refl(Term::succ(Term::var("k")))))),
        };
        closed_ok(&p, &Formula::forall("x", FiniteType::N, motive));
        // a = b → b = a
        let (a, b) = (Term::var("a"), Term::var("b"));
        let goal = Formula::forall(
            "a",
            FiniteType::N,
            Formula::forall(
                "b",
                FiniteType::N,
                Formula::imp(Formula::eq_n(a.clone(), b.clone()), Formula::eq_n(b, a.clone())),
            ),
        );
        let p = Proof::forall_i(
            "a",
            Proof::forall_i(
                "b",
                Proof::imp_i(
                    "h",
                    Proof::eq_subst(
                        "z",
                        FiniteType::N,
                        Formula::eq_n(Term::var("z"), a.clone()),
                        Proof::hyp("h"),
                        Proof::Refl(a),
                    ),
                ),
            ),
        );
        closed_ok(&p, &goal);
    }

    #[test]
    fn lem_is_not_transportable() {
        let phi = Formula::eq_n(Term::Zero, Term::Zero);
        assert_eq!(transport_proof(&Proof::Lem(phi)), Err(TransportError::Classical));
    }

    #[test]
    fn false_elim_and_cases() {
        // ¬(0 = 1) → (0 = 1 ∨ 0 = 1) → 0 = 2
        let e01 = Formula::eq_n(Term::Zero, Term::numeral(1));
        let goal = Formula::imp(
            Formula::not(e01.clone()),
            Formula::imp(Formula::or(e01.clone(), e01.clone()), Formula::eq_n(Term::Zero, Term::numeral(2))),
        );
        let p = Proof::imp_i(
            "n",
            Proof::imp_i(
                "d",
                Proof::false_e(Proof::or_e(
                    Proof::hyp("d"),
                    "l",
                    Proof::imp_e(Proof::hyp("n"), Proof::hyp("l")),
                    "r",
                    Proof::imp_e(Proof::hyp("n"), Proof::hyp("r")),
                )),
            ),
        );
        closed_ok(&p, &goal);
    }
}
