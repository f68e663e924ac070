use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::formula::{expand_exists_unique, Formula};
use crate::hao::{self, FiniteType, FuelExhausted, Term, TypeError, TypingContext};
use crate::names;

/// Natural-deduction derivations.
///
/// Introduction rules, `OrE`, `ExistsE` and `FalseE` are checked against a
/// goal; the remaining nodes determine their own conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Hyp(String),
    /// An earlier lemma, by name.
    Cite(String),
    AndI(Box<Proof>, Box<Proof>),
    AndE1(Box<Proof>),
    AndE2(Box<Proof>),
    OrI1(Box<Proof>),
    OrI2(Box<Proof>),
    OrE {
        scrutinee: Box<Proof>,
        left: (String, Box<Proof>),
        right: (String, Box<Proof>),
    },
    ImpI(String, Box<Proof>),
    ImpE(Box<Proof>, Box<Proof>),
    ForallI(String, Box<Proof>),
    ForallE(Box<Proof>, Term),
    ExistsI(Term, Box<Proof>),
    ExistsE {
        scrutinee: Box<Proof>,
        var: String,
        label: String,
        body: Box<Proof>,
    },
    FalseE(Box<Proof>),
    Refl(Term),
    /// From `a =_σ b` and `motive[a/var]` conclude `motive[b/var]`.
    EqSubst {
        var: String,
        ty: FiniteType,
        motive: Formula,
        eq: Box<Proof>,
        base: Box<Proof>,
    },
    Axiom(AxiomInst),
    /// Concludes `∀var^N motive`.
    Induction {
        var: String,
        motive: Formula,
        base: Box<Proof>,
        step_var: String,
        step_label: String,
        step: Box<Proof>,
    },
    Lem(Formula),
    /// Internal rule of unique choice: from a closed derivation of
    /// `∀x^σ ∃!y^τ body` conclude `∃f^{σ→τ} ∀x^σ body[f x / y]`.
    Irc {
        x: String,
        x_ty: FiniteType,
        y: String,
        y_ty: FiniteType,
        body: Formula,
        proof: Box<Proof>,
    },
    Have(String, Formula, Box<Proof>, Box<Proof>),
    Annot(Formula, Box<Proof>),
}

impl Proof {
    pub fn hyp(l: &str) -> Proof {
        Proof::Hyp(String::from(l))
    }
    pub fn cite(l: &str) -> Proof {
        Proof::Cite(String::from(l))
    }
    pub fn and_i(a: Proof, b: Proof) -> Proof {
        Proof::AndI(Box::new(a), Box::new(b))
    }
    pub fn and_e1(p: Proof) -> Proof {
        Proof::AndE1(Box::new(p))
    }
    pub fn and_e2(p: Proof) -> Proof {
        Proof::AndE2(Box::new(p))
    }
    pub fn or_i1(p: Proof) -> Proof {
        Proof::OrI1(Box::new(p))
    }
    pub fn or_i2(p: Proof) -> Proof {
        Proof::OrI2(Box::new(p))
    }
    pub fn or_e(s: Proof, l: &str, lp: Proof, r: &str, rp: Proof) -> Proof {
        Proof::OrE {
            scrutinee: Box::new(s),
            left: (String::from(l), Box::new(lp)),
            right: (String::from(r), Box::new(rp)),
        }
    }
    pub fn imp_i(l: &str, p: Proof) -> Proof {
        Proof::ImpI(String::from(l), Box::new(p))
    }
    pub fn imp_e(f: Proof, a: Proof) -> Proof {
        Proof::ImpE(Box::new(f), Box::new(a))
    }
    pub fn forall_i(x: &str, p: Proof) -> Proof {
        Proof::ForallI(String::from(x), Box::new(p))
    }
    pub fn forall_e(p: Proof, t: Term) -> Proof {
        Proof::ForallE(Box::new(p), t)
    }
    pub fn exists_i(t: Term, p: Proof) -> Proof {
        Proof::ExistsI(t, Box::new(p))
    }
    pub fn exists_e(s: Proof, x: &str, l: &str, body: Proof) -> Proof {
        Proof::ExistsE { scrutinee: Box::new(s), var: String::from(x), label: String::from(l), body: Box::new(body) }
    }
    pub fn false_e(p: Proof) -> Proof {
        Proof::FalseE(Box::new(p))
    }
    pub fn eq_subst(var: &str, ty: FiniteType, motive: Formula, eq: Proof, base: Proof) -> Proof {
        Proof::EqSubst { var: String::from(var), ty, motive, eq: Box::new(eq), base: Box::new(base) }
    }
    pub fn have(l: &str, f: Formula, p: Proof, body: Proof) -> Proof {
        Proof::Have(String::from(l), f, Box::new(p), Box::new(body))
    }
    pub fn annot(f: Formula, p: Proof) -> Proof {
        Proof::Annot(f, Box::new(p))
    }

    /// The rule name used in diagnostics and the surface syntax.
    pub fn rule_name(&self) -> &'static str {
        match self {
            Proof::Hyp(_) => "hyp",
            Proof::Cite(_) => "cite",
            Proof::AndI(..) => "and-i",
            Proof::AndE1(_) => "and-e1",
            Proof::AndE2(_) => "and-e2",
            Proof::OrI1(_) => "or-i1",
            Proof::OrI2(_) => "or-i2",
            Proof::OrE { .. } => "or-e",
            Proof::ImpI(..) => "imp-i",
            Proof::ImpE(..) => "imp-e",
            Proof::ForallI(..) => "forall-i",
            Proof::ForallE(..) => "forall-e",
            Proof::ExistsI(..) => "exists-i",
            Proof::ExistsE { .. } => "exists-e",
            Proof::FalseE(_) => "false-e",
            Proof::Refl(_) => "refl",
            Proof::EqSubst { .. } => "subst",
            Proof::Axiom(_) => "axiom",
            Proof::Induction { .. } => "induction",
            Proof::Lem(_) => "lem",
            Proof::Irc { .. } => "irc",
            Proof::Have(..) => "have",
            Proof::Annot(..) => "the",
        }
    }

    /// Immediate sub-derivations in the order used by diagnostic paths.
    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::Hyp(_) | Proof::Cite(_) | Proof::Refl(_) | Proof::Axiom(_) | Proof::Lem(_) => Vec::new(),
            Proof::AndI(a, b) | Proof::ImpE(a, b) => alloc::vec![&**a, &**b],
            Proof::AndE1(p)
            | Proof::AndE2(p)
            | Proof::OrI1(p)
            | Proof::OrI2(p)
            | Proof::ImpI(_, p)
            | Proof::ForallI(_, p)
            | Proof::ForallE(p, _)
            | Proof::ExistsI(_, p)
            | Proof::FalseE(p)
            | Proof::Annot(_, p) => alloc::vec![&**p],
            Proof::OrE { scrutinee, left, right } => alloc::vec![&**scrutinee, &*left.1, &*right.1],
            Proof::ExistsE { scrutinee, body, .. } => alloc::vec![&**scrutinee, &**body],
            Proof::EqSubst { eq, base, .. } => alloc::vec![&**eq, &**base],
            Proof::Induction { base, step, .. } => alloc::vec![&**base, &**step],
            Proof::Irc { proof, .. } => alloc::vec![&**proof],
            Proof::Have(_, _, a, b) => alloc::vec![&**a, &**b],
        }
    }

    /// Paths of every node satisfying `pred`, in pre-order.
    pub fn find_paths(&self, pred: &dyn Fn(&Proof) -> bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.find_paths_at(pred, &mut Vec::new(), &mut out);
        out
    }

    fn find_paths_at(&self, pred: &dyn Fn(&Proof) -> bool, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pred(self) {
            out.push(path.clone());
        }
        for (i, c) in self.children().into_iter().enumerate() {
            path.push(i);
            c.find_paths_at(pred, path, out);
            path.pop();
        }
    }

    pub fn contains_lem(&self) -> bool {
        !self.find_paths(&|p| matches!(p, Proof::Lem(_))).is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// Named axiom instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomInst {
    /// `∀x^N ¬(succ x = 0)`
    SuccNeZero,
    /// `∀x^N ∀y^N (succ x = succ y ⊃ x = y)`
    SuccInj,
    KDef(FiniteType, FiniteType),
    SDef(FiniteType, FiniteType, FiniteType),
    RecZero(FiniteType),
    RecSucc(FiniteType),
    FstDef(FiniteType, FiniteType),
    SndDef(FiniteType, FiniteType),
    /// `∀x^σ ∃y^τ φ ⊃ ∃f^{σ→τ} ∀x^σ φ[f x/y]`
    Ac {
        x: String,
        x_ty: FiniteType,
        y: String,
        y_ty: FiniteType,
        body: Formula,
    },
    /// As `Ac` with `∃!` in the premise.
    AcBang {
        x: String,
        x_ty: FiniteType,
        y: String,
        y_ty: FiniteType,
        body: Formula,
    },
}

impl AxiomInst {
    pub fn name(&self) -> &'static str {
        match self {
            AxiomInst::SuccNeZero => "succ-ne-zero",
            AxiomInst::SuccInj => "succ-inj",
            AxiomInst::KDef(..) => "k-def",
            AxiomInst::SDef(..) => "s-def",
            AxiomInst::RecZero(_) => "rec-zero",
            AxiomInst::RecSucc(_) => "rec-succ",
            AxiomInst::FstDef(..) => "fst-def",
            AxiomInst::SndDef(..) => "snd-def",
            AxiomInst::Ac { .. } => "ac",
            AxiomInst::AcBang { .. } => "ac!",
        }
    }

    /// The instance's statement.
    pub fn formula(&self) -> Formula {
        use FiniteType as T;
        let v = Term::var;
        let arr = T::arrow;
        match self {
            AxiomInst::SuccNeZero => {
                Formula::forall("x", T::N, Formula::not(Formula::eq_n(Term::succ(v("x")), Term::Zero)))
            }
            AxiomInst::SuccInj => Formula::forall(
                "x",
                T::N,
                Formula::forall(
                    "y",
                    T::N,
                    Formula::imp(Formula::eq_n(Term::succ(v("x")), Term::succ(v("y"))), Formula::eq_n(v("x"), v("y"))),
                ),
            ),
            AxiomInst::KDef(s, t) => Formula::forall(
                "x",
                s.clone(),
                Formula::forall(
                    "y",
                    t.clone(),
                    Formula::eq(s.clone(), Term::apps(Term::K(s.clone(), t.clone()), [v("x"), v("y")]), v("x")),
                ),
            ),
            AxiomInst::SDef(s, t, r) => Formula::forall(
                "x",
                arr(s.clone(), arr(t.clone(), r.clone())),
                Formula::forall(
                    "y",
                    arr(s.clone(), t.clone()),
                    Formula::forall(
                        "z",
                        s.clone(),
                        Formula::eq(
                            r.clone(),
                            Term::apps(Term::S(s.clone(), t.clone(), r.clone()), [v("x"), v("y"), v("z")]),
                            Term::ap(Term::ap(v("x"), v("z")), Term::ap(v("y"), v("z"))),
                        ),
                    ),
                ),
            ),
            AxiomInst::RecZero(s) => Formula::forall(
                "a",
                s.clone(),
                Formula::forall(
                    "f",
                    arr(T::N, arr(s.clone(), s.clone())),
                    Formula::eq(s.clone(), Term::apps(Term::Rec(s.clone()), [v("a"), v("f"), Term::Zero]), v("a")),
                ),
            ),
            AxiomInst::RecSucc(s) => {
                let rec = |n: Term| Term::apps(Term::Rec(s.clone()), [v("a"), v("f"), n]);
                Formula::forall(
                    "a",
                    s.clone(),
                    Formula::forall(
                        "f",
                        arr(T::N, arr(s.clone(), s.clone())),
                        Formula::forall(
                            "n",
                            T::N,
                            Formula::eq(s.clone(), rec(Term::succ(v("n"))), Term::apps(v("f"), [v("n"), rec(v("n"))])),
                        ),
                    ),
                )
            }
            AxiomInst::FstDef(s, t) | AxiomInst::SndDef(s, t) => {
                let pair = Term::apps(Term::Pair(s.clone(), t.clone()), [v("x"), v("y")]);
                let (proj, ty, res) = match self {
                    AxiomInst::FstDef(..) => (Term::Fst(s.clone(), t.clone()), s.clone(), v("x")),
                    _ => (Term::Snd(s.clone(), t.clone()), t.clone(), v("y")),
                };
                Formula::forall(
                    "x",
                    s.clone(),
                    Formula::forall("y", t.clone(), Formula::eq(ty, Term::ap(proj, pair), res)),
                )
            }
            AxiomInst::Ac { x, x_ty, y, y_ty, body } => {
                let premise = Formula::forall(x, x_ty.clone(), Formula::exists(y, y_ty.clone(), body.clone()));
                Formula::imp(premise, choice_conclusion(x, x_ty, y, y_ty, body))
            }
            AxiomInst::AcBang { x, x_ty, y, y_ty, body } => {
                let premise = Formula::forall(x, x_ty.clone(), expand_exists_unique(y, y_ty, body));
                Formula::imp(premise, choice_conclusion(x, x_ty, y, y_ty, body))
            }
        }
    }
}

/// `∃f^{σ→τ} ∀x^σ body[f x / y]` with `f` fresh.
pub fn choice_conclusion(x: &str, x_ty: &FiniteType, y: &str, y_ty: &FiniteType, body: &Formula) -> Formula {
    let fv = body.free_vars();
    let f = names::fresh("f", |c| fv.contains(c) || c == x || c == y);
    let fx = Term::ap(Term::var(&f), Term::var(x));
    Formula::exists(
        &f,
        FiniteType::arrow(x_ty.clone(), y_ty.clone()),
        Formula::forall(x, x_ty.clone(), body.subst(y, &fx)),
    )
}

/// Which classical and choice principles the checker accepts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AxiomProfile {
    pub lem: bool,
    pub ac: bool,
    pub ac_bang: bool,
    pub irc_nn: bool,
    /// iRC! at every pair of finite types, not only `N, N`.
    pub irc_all: bool,
}

impl AxiomProfile {
    pub const INTUITIONISTIC: AxiomProfile =
        AxiomProfile { lem: false, ac: false, ac_bang: false, irc_nn: false, irc_all: false };

    /// `HA^ω + iRC!_{N,N} + LEM`
    pub const CLASSICAL_IRC: AxiomProfile =
        AxiomProfile { lem: true, ac: false, ac_bang: false, irc_nn: true, irc_all: false };

    /// Flag names as written in `(profile ...)` declarations.
    pub fn flag_names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.lem {
            out.push("lem");
        }
        if self.ac {
            out.push("ac");
        }
        if self.ac_bang {
            out.push("ac!");
        }
        if self.irc_nn {
            out.push("irc!");
        }
        if self.irc_all {
            out.push("irc!*");
        }
        out
    }

    /// Sets a flag by name; accepts `irc` for `irc!`.
    pub fn set(&mut self, name: &str, on: bool) -> bool {
        match name {
            "lem" => self.lem = on,
            "ac" => self.ac = on,
            "ac!" => self.ac_bang = on,
            "irc" | "irc!" => self.irc_nn = on,
            "irc*" | "irc!*" => self.irc_all = on,
            _ => return false,
        }
        true
    }

    /// `self ⊆ other`
    pub fn le(&self, other: &AxiomProfile) -> bool {
        (!self.lem || other.lem)
            && (!self.ac || other.ac)
            && (!self.ac_bang || other.ac_bang)
            && (!self.irc_nn || other.irc_nn)
            && (!self.irc_all || other.irc_all)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Principle {
    Lem,
    Ac,
    AcBang,
    Irc,
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principle::Lem => "LEM",
            Principle::Ac => "AC",
            Principle::AcBang => "AC!",
            Principle::Irc => "iRC!",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofErrorKind {
    /// Goal or premise does not have the shape the rule needs.
    Shape {
        expected: &'static str,
        found: Formula,
    },
    GoalMismatch {
        expected: Formula,
        found: Formula,
    },
    TermType {
        term: Term,
        expected: FiniteType,
        found: FiniteType,
    },
    Type(TypeError),
    Disabled(Principle),
    /// iRC! outside `N, N` without the all-types flag.
    IrcTypes {
        x_ty: FiniteType,
        y_ty: FiniteType,
    },
    /// An iRC! subderivation referred to an enclosing hypothesis.
    IrcNotClosed(String),
    UnboundHypothesis(String),
    UnknownLemma(String),
    EigenvariableClash(String),
    CannotInfer,
    Fuel(FuelExhausted),
}

/// A failure located by the child-index path from the root derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDiagnostic {
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub kind: ProofErrorKind,
}

impl fmt::Display for ProofDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::syntax::hao::{print_formula, print_term, print_type};
        write!(f, "{} at /", self.rule)?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(": ")?;
        match &self.kind {
            ProofErrorKind::Shape { expected, found } => {
                write!(f, "expected {expected}, found {}", print_formula(found))
            }
            ProofErrorKind::GoalMismatch { expected, found } => {
                write!(f, "proves {} but the goal is {}", print_formula(found), print_formula(expected))
            }
            ProofErrorKind::TermType { term, expected, found } => {
                write!(f, "{} has type {}, expected {}", print_term(term), print_type(found), print_type(expected))
            }
            ProofErrorKind::Type(e) => write!(f, "{e}"),
            ProofErrorKind::Disabled(p) => write!(f, "{p} disabled by the axiom profile"),
            ProofErrorKind::IrcTypes { x_ty, y_ty } => {
                write!(f, "iRC! is restricted to N, N; found {}, {}", print_type(x_ty), print_type(y_ty))
            }
            ProofErrorKind::IrcNotClosed(h) => {
                write!(f, "iRC! premise must be a closed derivation, but it uses hypothesis '{h}'")
            }
            ProofErrorKind::UnboundHypothesis(h) => write!(f, "unbound hypothesis '{h}'"),
            ProofErrorKind::UnknownLemma(n) => write!(f, "unknown lemma '{n}'"),
            ProofErrorKind::EigenvariableClash(x) => write!(f, "eigenvariable '{x}' is already in scope"),
            ProofErrorKind::CannotInfer => f.write_str("conclusion cannot be inferred; annotate with (the φ p)"),
            ProofErrorKind::Fuel(e) => write!(f, "{e}"),
        }
    }
}

/// Lemma statements already checked, by name.
pub type LemmaEnv = BTreeMap<String, Formula>;

/// Everything the checker needs besides the derivation.
#[derive(Clone, Debug)]
pub struct ProofEnv<'a> {
    pub profile: AxiomProfile,
    pub lemmas: &'a LemmaEnv,
    pub fuel: u64,
}

/// Checks `p` as a derivation of `goal` from the labelled hypotheses.
///
/// Disabled principles are reported without stopping the traversal, so every
/// offending node appears in the result. Structural errors stop checking.
pub fn check_proof(
    env: &ProofEnv<'_>,
    ctx: &TypingContext,
    hyps: &[(String, Formula)],
    p: &Proof,
    goal: &Formula,
) -> Result<(), Vec<ProofDiagnostic>> {
    let mut checker = Checker { env, ctx: ctx.clone(), hyps: hyps.to_vec(), path: Vec::new(), diags: Vec::new() };
    let wf = goal
        .check_well_formed(&mut checker.ctx.clone())
        .and_then(|_| hyps.iter().try_for_each(|(_, h)| h.check_well_formed(&mut checker.ctx.clone())));
    if let Err(e) = wf {
        return Err(alloc::vec![ProofDiagnostic {
            path: Vec::new(),
            rule: p.rule_name(),
            kind: ProofErrorKind::Type(e)
        }]);
    }
    if let Err(d) = checker.check(p, goal) {
        checker.diags.push(*d);
    }
    if checker.diags.is_empty() {
        Ok(())
    } else {
        Err(checker.diags)
    }
}

/// Infers the conclusion of `p`.
pub fn infer_conclusion(
    env: &ProofEnv<'_>,
    ctx: &TypingContext,
    hyps: &[(String, Formula)],
    p: &Proof,
) -> Result<Formula, Vec<ProofDiagnostic>> {
    let mut checker = Checker { env, ctx: ctx.clone(), hyps: hyps.to_vec(), path: Vec::new(), diags: Vec::new() };
    match checker.infer(p) {
        Ok(f) if checker.diags.is_empty() => Ok(f),
        Ok(_) => Err(checker.diags),
        Err(d) => {
            checker.diags.push(*d);
            Err(checker.diags)
        }
    }
}

struct Checker<'a, 'e> {
    env: &'a ProofEnv<'e>,
    ctx: TypingContext,
    hyps: Vec<(String, Formula)>,
    path: Vec<usize>,
    diags: Vec<ProofDiagnostic>,
}

type Step<T> = Result<T, Box<ProofDiagnostic>>;

impl Checker<'_, '_> {
    fn err(&self, p: &Proof, kind: ProofErrorKind) -> Box<ProofDiagnostic> {
        Box::new(ProofDiagnostic { path: self.path.clone(), rule: p.rule_name(), kind })
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Step<T>) -> Step<T> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn check_child(&mut self, i: usize, p: &Proof, goal: &Formula) -> Step<()> {
        self.child(i, |c| c.check(p, goal))
    }

    fn infer_child(&mut self, i: usize, p: &Proof) -> Step<Formula> {
        self.child(i, |c| c.infer(p))
    }

    fn with_hyp<T>(&mut self, label: &str, f: Formula, k: impl FnOnce(&mut Self) -> Step<T>) -> Step<T> {
        self.hyps.push((String::from(label), f));
        let r = k(self);
        self.hyps.pop();
        r
    }

    fn with_var<T>(&mut self, p: &Proof, x: &str, ty: &FiniteType, k: impl FnOnce(&mut Self) -> Step<T>) -> Step<T> {
        if self.ctx.contains(x) {
            return Err(self.err(p, ProofErrorKind::EigenvariableClash(String::from(x))));
        }
        self.ctx.push_shadowing(String::from(x), ty.clone());
        let r = k(self);
        self.ctx.pop();
        r
    }

    fn term_at(&self, p: &Proof, t: &Term, expected: &FiniteType) -> Step<()> {
        let found = hao::infer_type(&self.ctx, t).map_err(|e| self.err(p, ProofErrorKind::Type(e)))?;
        if found != *expected {
            return Err(self.err(p, ProofErrorKind::TermType { term: t.clone(), expected: expected.clone(), found }));
        }
        Ok(())
    }

    fn well_formed(&self, p: &Proof, f: &Formula) -> Step<()> {
        f.check_well_formed(&mut self.ctx.clone()).map_err(|e| self.err(p, ProofErrorKind::Type(e)))
    }

    fn shape(&self, p: &Proof, expected: &'static str, found: &Formula) -> Box<ProofDiagnostic> {
        self.err(p, ProofErrorKind::Shape { expected, found: found.clone() })
    }

    fn gate(&mut self, p: &Proof, on: bool, principle: Principle) {
        if !on {
            let d = self.err(p, ProofErrorKind::Disabled(principle));
            self.diags.push(*d);
        }
    }

    fn def_equal(&self, p: &Proof, a: &Term, b: &Term) -> Step<bool> {
        hao::def_equal(a, b, self.env.fuel).map_err(|e| self.err(p, ProofErrorKind::Fuel(e)))
    }

    fn check(&mut self, p: &Proof, goal: &Formula) -> Step<()> {
        match p {
            Proof::AndI(a, b) => {
                let Formula::And(l, r) = goal else { return Err(self.shape(p, "a conjunction", goal)) };
                self.check_child(0, a, l)?;
                self.check_child(1, b, r)
            }
            Proof::OrI1(a) => {
                let Formula::Or(l, _) = goal else { return Err(self.shape(p, "a disjunction", goal)) };
                self.check_child(0, a, l)
            }
            Proof::OrI2(a) => {
                let Formula::Or(_, r) = goal else { return Err(self.shape(p, "a disjunction", goal)) };
                self.check_child(0, a, r)
            }
            Proof::OrE { scrutinee, left, right } => {
                let s = self.infer_child(0, scrutinee)?;
                let Formula::Or(l, r) = s else { return Err(self.shape(p, "a disjunction", &s)) };
                self.with_hyp(&left.0, *l, |c| c.check_child(1, &left.1, goal))?;
                self.with_hyp(&right.0, *r, |c| c.check_child(2, &right.1, goal))
            }
            Proof::ImpI(label, body) => {
                let Formula::Imp(l, r) = goal else { return Err(self.shape(p, "an implication", goal)) };
                self.with_hyp(label, (**l).clone(), |c| c.check_child(0, body, r))
            }
            Proof::ForallI(x, body) => {
                let Formula::Forall(y, ty, inner) = goal else {
                    return Err(self.shape(p, "a universal", goal));
                };
                let inst = inner.subst(y, &Term::var(x));
                self.with_var(p, x, ty, |c| c.check_child(0, body, &inst))
            }
            Proof::ExistsI(t, body) => {
                let Formula::Exists(y, ty, inner) = goal else {
                    return Err(self.shape(p, "an existential", goal));
                };
                self.term_at(p, t, ty)?;
                self.check_child(0, body, &inner.subst(y, t))
            }
            Proof::ExistsE { scrutinee, var, label, body } => {
                let s = self.infer_child(0, scrutinee)?;
                let Formula::Exists(y, ty, inner) = &s else { return Err(self.shape(p, "an existential", &s)) };
                let inst = inner.subst(y, &Term::var(var));
                self.with_var(p, var, ty, |c| c.with_hyp(label, inst, |c| c.check_child(1, body, goal)))
            }
            Proof::FalseE(body) => self.check_child(0, body, &Formula::False),
            Proof::Refl(t) => {
                let Formula::Eq(ty, a, b) = goal else { return Err(self.shape(p, "an equation", goal)) };
                self.term_at(p, t, ty)?;
                if self.def_equal(p, a, t)? && self.def_equal(p, t, b)? {
                    Ok(())
                } else {
                    let found = Formula::Eq(ty.clone(), t.clone(), t.clone());
                    Err(self.err(p, ProofErrorKind::GoalMismatch { expected: goal.clone(), found }))
                }
            }
            Proof::Have(label, f, a, b) => {
                self.well_formed(p, f)?;
                self.check_child(0, a, f)?;
                self.with_hyp(label, f.clone(), |c| c.check_child(1, b, goal))
            }
            _ => {
                let found = self.infer(p)?;
                let ok = found.convertible(goal, self.env.fuel).map_err(|e| self.err(p, ProofErrorKind::Fuel(e)))?;
                if ok {
                    Ok(())
                } else {
                    Err(self.err(p, ProofErrorKind::GoalMismatch { expected: goal.clone(), found }))
                }
            }
        }
    }

    fn infer(&mut self, p: &Proof) -> Step<Formula> {
        match p {
            Proof::Hyp(l) => self
                .hyps
                .iter()
                .rev()
                .find(|(h, _)| h == l)
                .map(|(_, f)| f.clone())
                .ok_or_else(|| self.err(p, ProofErrorKind::UnboundHypothesis(l.clone()))),
            Proof::Cite(n) => {
                self.env.lemmas.get(n).cloned().ok_or_else(|| self.err(p, ProofErrorKind::UnknownLemma(n.clone())))
            }
            Proof::AndE1(a) | Proof::AndE2(a) => {
                let f = self.infer_child(0, a)?;
                let Formula::And(l, r) = f else { return Err(self.shape(p, "a conjunction", &f)) };
                Ok(if matches!(p, Proof::AndE1(_)) { *l } else { *r })
            }
            Proof::ImpE(f, a) => {
                let fun = self.infer_child(0, f)?;
                let Formula::Imp(l, r) = fun else { return Err(self.shape(p, "an implication", &fun)) };
                self.check_child(1, a, &l)?;
                Ok(*r)
            }
            Proof::ForallE(a, t) => {
                let f = self.infer_child(0, a)?;
                let Formula::Forall(y, ty, body) = &f else { return Err(self.shape(p, "a universal", &f)) };
                self.term_at(p, t, ty)?;
                Ok(body.subst(y, t))
            }
            Proof::Refl(t) => {
                let ty = hao::infer_type(&self.ctx, t).map_err(|e| self.err(p, ProofErrorKind::Type(e)))?;
                Ok(Formula::Eq(ty, t.clone(), t.clone()))
            }
            Proof::EqSubst { var, ty, motive, eq, base } => {
                self.ctx.push_shadowing(var.clone(), ty.clone());
                let wf = self.well_formed(p, motive);
                self.ctx.pop();
                wf?;
                let e = self.infer_child(0, eq)?;
                let Formula::Eq(ety, a, b) = &e else { return Err(self.shape(p, "an equation", &e)) };
                if ety != ty {
                    return Err(self.shape(p, "an equation at the motive's type", &e));
                }
                self.check_child(1, base, &motive.subst(var, a))?;
                Ok(motive.subst(var, b))
            }
            Proof::Axiom(inst) => {
                match inst {
                    AxiomInst::Ac { x, x_ty, y, y_ty, body } | AxiomInst::AcBang { x, x_ty, y, y_ty, body } => {
                        let (on, which) = match inst {
                            AxiomInst::Ac { .. } => (self.env.profile.ac, Principle::Ac),
                            _ => (self.env.profile.ac_bang, Principle::AcBang),
                        };
                        self.gate(p, on, which);
                        self.ctx.push_shadowing(x.clone(), x_ty.clone());
                        self.ctx.push_shadowing(y.clone(), y_ty.clone());
                        let wf = self.well_formed(p, body);
                        self.ctx.pop();
                        self.ctx.pop();
                        wf?;
                    }
                    _ => {}
                }
                Ok(inst.formula())
            }
            Proof::Induction { var, motive, base, step_var, step_label, step } => {
                self.ctx.push_shadowing(var.clone(), FiniteType::N);
                let wf = self.well_formed(p, motive);
                self.ctx.pop();
                wf?;
                self.check_child(0, base, &motive.subst(var, &Term::Zero))?;
                let ih = motive.subst(var, &Term::var(step_var));
                let next = motive.subst(var, &Term::succ(Term::var(step_var)));
                self.with_var(p, step_var, &FiniteType::N, |c| {
                    c.with_hyp(step_label, ih, |c| c.check_child(1, step, &next))
                })?;
                Ok(Formula::Forall(var.clone(), FiniteType::N, Box::new(motive.clone())))
            }
            Proof::Lem(f) => {
                self.well_formed(p, f)?;
                self.gate(p, self.env.profile.lem, Principle::Lem);
                Ok(Formula::or(f.clone(), Formula::not(f.clone())))
            }
            Proof::Irc { x, x_ty, y, y_ty, body, proof } => {
                let profile = self.env.profile;
                let at_nn = *x_ty == FiniteType::N && *y_ty == FiniteType::N;
                if profile.irc_all || (profile.irc_nn && at_nn) {
                } else if profile.irc_nn {
                    let d = self.err(p, ProofErrorKind::IrcTypes { x_ty: x_ty.clone(), y_ty: y_ty.clone() });
                    self.diags.push(*d);
                } else {
                    self.gate(p, false, Principle::Irc);
                }
                self.ctx.push_shadowing(x.clone(), x_ty.clone());
                self.ctx.push_shadowing(y.clone(), y_ty.clone());
                let wf = self.well_formed(p, body);
                self.ctx.pop();
                self.ctx.pop();
                wf?;
                let premise = Formula::forall(x, x_ty.clone(), expand_exists_unique(y, y_ty, body));
                // the premise is a theorem: no hypotheses in scope
                let outer = core::mem::take(&mut self.hyps);
                let r = self.check_child(0, proof, &premise);
                self.hyps = outer;
                if let Err(d) = r {
                    if let ProofErrorKind::UnboundHypothesis(h) = &d.kind {
                        if self.hyps.iter().any(|(l, _)| l == h) {
                            return Err(self.err(p, ProofErrorKind::IrcNotClosed(h.clone())));
                        }
                    }
                    return Err(d);
                }
                Ok(choice_conclusion(x, x_ty, y, y_ty, body))
            }
            Proof::Annot(f, body) => {
                self.well_formed(p, f)?;
                self.check_child(0, body, f)?;
                Ok(f.clone())
            }
            Proof::Have(label, f, a, b) => {
                self.well_formed(p, f)?;
                self.check_child(0, a, f)?;
                self.with_hyp(label, f.clone(), |c| c.infer_child(1, b))
            }
            _ => Err(self.err(p, ProofErrorKind::CannotInfer)),
        }
    }
}

/// Names bound anywhere in a derivation, including inside its formulas.
pub fn bound_names(p: &Proof, out: &mut BTreeSet<String>) {
    match p {
        Proof::ForallI(x, _) => {
            out.insert(x.clone());
        }
        Proof::ExistsE { var, .. } => {
            out.insert(var.clone());
        }
        Proof::Induction { var, step_var, motive, .. } => {
            out.insert(var.clone());
            out.insert(step_var.clone());
            motive.all_names(out);
        }
        Proof::EqSubst { var, motive, .. } => {
            out.insert(var.clone());
            motive.all_names(out);
        }
        Proof::Lem(f) | Proof::Have(_, f, ..) | Proof::Annot(f, _) => f.all_names(out),
        Proof::Irc { x, y, body, .. } => {
            out.insert(x.clone());
            out.insert(y.clone());
            body.all_names(out);
        }
        _ => {}
    }
    for c in p.children() {
        bound_names(c, out);
    }
}
