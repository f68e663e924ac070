//! Sort classification and bidirectional type checking.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::conv::{convertible, normalize, whnf};
use super::expr::{Binder, Expr};
use super::{Ctx, DttError, DttResult, Sort, SortMode};

/// Reads the proposition formers as their propositions-as-types
/// counterparts.
pub fn desugar(e: &Expr) -> Expr {
    let d = |x: &Expr| Box::new(desugar(x));
    let db = |bb: &Binder| Binder { names: bb.names.clone(), body: Box::new(desugar(&bb.body)) };
    match e {
        Expr::ExistsP(a, bb) => Expr::Sigma(d(a), db(bb)),
        Expr::ForallP(a, bb) => Expr::Pi(d(a), db(bb)),
        Expr::OrP(l, r) => Expr::Sum(d(l), d(r)),
        Expr::FalseP => Expr::Empty,
        Expr::ImpP(l, r) => Expr::arrow(desugar(l), desugar(r)),
        Expr::AndP(l, r) => Expr::times(desugar(l), desugar(r)),
        Expr::EqP(a, l, r) => Expr::Id(d(a), d(l), d(r)),
        _ => e.map_children(&mut desugar, &mut |bb| db(bb)),
    }
}

/// Checker configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub mode: SortMode,
    pub fuel: u64,
}

pub fn classify(mode: SortMode, ctx: &Ctx, ty: &Expr) -> DttResult<Sort> {
    Kernel { mode, fuel: crate::DEFAULT_FUEL }.classify(ctx, ty)
}

pub fn infer(mode: SortMode, ctx: &Ctx, e: &Expr) -> DttResult<Expr> {
    Kernel { mode, fuel: crate::DEFAULT_FUEL }.infer(ctx, e)
}

/// `A + (A → N₀)` in MLTT, `A ∨ ¬A` for propositions otherwise.
pub fn lem_type(mode: SortMode, ctx: &Ctx, a: &Expr) -> DttResult<Expr> {
    let k = Kernel { mode, fuel: crate::DEFAULT_FUEL };
    let s = k.classify(ctx, a)?;
    if mode == SortMode::Mltt {
        return Ok(Expr::sum(a.clone(), Expr::arrow(a.clone(), Expr::Empty)));
    }
    if !s.le(Sort::Prop) {
        return Err(DttError::LemRestricted(s));
    }
    Ok(Expr::or_p(a.clone(), Expr::imp_p(a.clone(), Expr::FalseP)))
}

fn is_type_former(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Fam(..)
            | Expr::Nat
            | Expr::Empty
            | Expr::Unit
            | Expr::Pi(..)
            | Expr::Sigma(..)
            | Expr::Sum(..)
            | Expr::Id(..)
            | Expr::ExistsP(..)
            | Expr::OrP(..)
            | Expr::FalseP
            | Expr::ForallP(..)
            | Expr::ImpP(..)
            | Expr::AndP(..)
            | Expr::EqP(..)
            | Expr::Trunc(..)
            | Expr::PowUnit
            | Expr::SmallProps
    )
}

/// Structural h-propositions: types with at most one element up to the
/// identifications the kernel makes.
pub fn is_hprop(ctx: &Ctx, ty: &Expr) -> bool {
    match ty {
        Expr::Trunc(_) | Expr::Empty | Expr::FalseP | Expr::Unit => true,
        Expr::Id(a, ..) | Expr::EqP(a, ..) => is_hset(ctx, a),
        Expr::Pi(_, bb) | Expr::ForallP(_, bb) => is_hprop(ctx, &bb.body),
        Expr::ImpP(_, b) => is_hprop(ctx, b),
        Expr::AndP(a, b) => is_hprop(ctx, a) && is_hprop(ctx, b),
        Expr::Fam(name, _) => ctx.family(name).is_some_and(|(_, s)| s.le(Sort::Prop)),
        Expr::Sigma(a, bb) => {
            let x = &bb.names[0];
            if !bb.body.has_free(x) {
                return is_hprop(ctx, a) && is_hprop(ctx, &bb.body);
            }
            is_hset(ctx, a) && is_unique_core(ctx, a, x, &bb.body)
        }
        _ => false,
    }
}

/// `P(x) × Π y. P(y) → Id(A, x, y)` with `P` a proposition.
fn is_unique_core(ctx: &Ctx, a: &Expr, x: &str, body: &Expr) -> bool {
    let (p, rest) = match body {
        Expr::Sigma(p, bb) if !bb.body.has_free(&bb.names[0]) => (p, &*bb.body),
        Expr::AndP(p, r) => (p, &**r),
        _ => return false,
    };
    let (a2, y, inner) = match rest {
        Expr::Pi(a2, bb) | Expr::ForallP(a2, bb) => (a2, &bb.names[0], &*bb.body),
        _ => return false,
    };
    if !a2.alpha_eq(a) || y == x {
        return false;
    }
    let (p2, eq) = match inner {
        Expr::Pi(p2, bb) if !bb.body.has_free(&bb.names[0]) => (p2, &*bb.body),
        Expr::ImpP(p2, eq) => (p2, &**eq),
        _ => return false,
    };
    let p_at_y = p.subst(x, &Expr::var(y));
    if !p2.alpha_eq(&p_at_y) || !is_hprop(ctx, p) {
        return false;
    }
    match eq {
        Expr::Id(a3, l, r) | Expr::EqP(a3, l, r) => {
            let (vx, vy) = (Expr::var(x), Expr::var(y));
            a3.alpha_eq(a) && ((**l == vx && **r == vy) || (**l == vy && **r == vx))
        }
        _ => false,
    }
}

fn is_hset(ctx: &Ctx, ty: &Expr) -> bool {
    match ty {
        Expr::Nat | Expr::Unit | Expr::Empty => true,
        Expr::Pi(_, bb) => is_hset(ctx, &bb.body),
        Expr::Sigma(a, bb) => is_hset(ctx, a) && is_hset(ctx, &bb.body),
        Expr::Sum(a, b) => is_hset(ctx, a) && is_hset(ctx, b),
        _ => is_hprop(ctx, ty),
    }
}

impl Kernel {
    pub fn new(mode: SortMode) -> Kernel {
        Kernel { mode, fuel: crate::DEFAULT_FUEL }
    }

    fn mltt(&self) -> bool {
        self.mode == SortMode::Mltt
    }

    fn whnf(&self, e: &Expr) -> DttResult<Expr> {
        whnf(e, &mut self.fuel.clone())
    }

    fn conv(&self, a: &Expr, b: &Expr) -> DttResult<bool> {
        convertible(a, b, self.fuel)
    }

    fn prepare(&self, e: &Expr) -> Expr {
        if self.mltt() {
            desugar(e)
        } else {
            e.clone()
        }
    }

    /// Sort of a type expression.
    pub fn classify(&self, ctx: &Ctx, ty: &Expr) -> DttResult<Sort> {
        let ty = self.prepare(ty);
        let s = self.sort_of(ctx, &ty)?;
        Ok(if self.mltt() { Sort::Set } else { s })
    }

    /// Checks `e` against the type `ty`, which must be well formed.
    pub fn check(&self, ctx: &Ctx, e: &Expr, ty: &Expr) -> DttResult<()> {
        let e = self.prepare(e);
        let ty = self.prepare(ty);
        self.sort_of(ctx, &ty)?;
        self.check_at(ctx, &e, &ty)
    }

    pub fn infer(&self, ctx: &Ctx, e: &Expr) -> DttResult<Expr> {
        self.infer_at(ctx, &self.prepare(e))
    }

    fn require_le(&self, position: &'static str, s: Sort, bound: Sort) -> DttResult<()> {
        if s.le(bound) {
            Ok(())
        } else {
            Err(DttError::BadSort { position, sort: s })
        }
    }

    fn unavailable(&self, former: &'static str) -> DttError {
        DttError::ModeUnavailable { former, mode: self.mode }
    }

    /// Opens a binder at a name fresh for `ctx`.
    fn open(&self, ctx: &Ctx, bb: &Binder, tys: &[Expr]) -> (Ctx, Vec<Expr>) {
        let mut inner = ctx.clone();
        let mut vars = Vec::new();
        let mut tys_done: Vec<(String, Expr)> = Vec::new();
        for (name, ty) in bb.names.iter().zip(tys) {
            let fresh = inner.fresh(name);
            let ty = ty.subst_many(&tys_done);
            inner = inner.with_term(&fresh, ty);
            tys_done.push((name.clone(), Expr::var(&fresh)));
            vars.push(Expr::Var(fresh));
        }
        (inner, vars)
    }

    fn sort_of(&self, ctx: &Ctx, ty: &Expr) -> DttResult<Sort> {
        let m = self.mltt();
        match ty {
            Expr::Nat | Expr::Empty | Expr::Unit => Ok(Sort::Set),
            Expr::FalseP => Ok(Sort::PropS),
            Expr::PowUnit => {
                if self.mode == SortMode::Emtt {
                    Ok(Sort::Coll)
                } else {
                    Err(self.unavailable("P1"))
                }
            }
            Expr::SmallProps => {
                if self.mode == SortMode::Mtt {
                    Ok(Sort::Coll)
                } else {
                    Err(self.unavailable("Props"))
                }
            }
            Expr::Fam(name, args) => {
                let (params, sort) = ctx.family(name).ok_or_else(|| DttError::UnknownFamily(name.clone()))?;
                if params.len() != args.len() {
                    return Err(DttError::FamilyArity {
                        name: name.clone(),
                        expected: params.len(),
                        found: args.len(),
                    });
                }
                let params = params.to_vec();
                let mut done: Vec<(String, Expr)> = Vec::new();
                for ((x, pty), a) in params.iter().zip(args) {
                    let pty = self.prepare(&pty.subst_many(&done));
                    self.check_at(ctx, a, &pty)?;
                    done.push((x.clone(), a.clone()));
                }
                Ok(if m { Sort::Set } else { sort })
            }
            Expr::Pi(a, bb) => {
                let sa = self.sort_of(ctx, a)?;
                let (inner, _) = self.open(ctx, bb, &[(**a).clone()]);
                let body = self.reopen(bb, &inner);
                let sb = self.sort_of(&inner, &body)?;
                if m {
                    return Ok(Sort::Set);
                }
                self.require_le("domain of a dependent product", sa, Sort::Set)?;
                Ok(if sb.le(Sort::Set) { Sort::Set } else { Sort::Coll })
            }
            Expr::Sigma(a, bb) => {
                let sa = self.sort_of(ctx, a)?;
                let (inner, _) = self.open(ctx, bb, &[(**a).clone()]);
                let sb = self.sort_of(&inner, &self.reopen(bb, &inner))?;
                Ok(if m || (sa.le(Sort::Set) && sb.le(Sort::Set)) { Sort::Set } else { Sort::Coll })
            }
            Expr::Sum(l, r) => {
                let sl = self.sort_of(ctx, l)?;
                let sr = self.sort_of(ctx, r)?;
                if !m {
                    self.require_le("summand", sl, Sort::Set)?;
                    self.require_le("summand", sr, Sort::Set)?;
                }
                Ok(Sort::Set)
            }
            Expr::Id(a, l, r) | Expr::EqP(a, l, r) => {
                let sa = self.sort_of(ctx, a)?;
                self.check_at(ctx, l, a)?;
                self.check_at(ctx, r, a)?;
                Ok(if m {
                    Sort::Set
                } else if sa.le(Sort::Set) {
                    Sort::PropS
                } else {
                    Sort::Prop
                })
            }
            Expr::ExistsP(a, bb) | Expr::ForallP(a, bb) => {
                let sa = self.sort_of(ctx, a)?;
                let (inner, _) = self.open(ctx, bb, &[(**a).clone()]);
                let sb = self.sort_of(&inner, &self.reopen(bb, &inner))?;
                self.require_le("body of a quantifier", sb, Sort::Prop)?;
                Ok(if sa.le(Sort::Set) && sb == Sort::PropS { Sort::PropS } else { Sort::Prop })
            }
            Expr::OrP(l, r) | Expr::AndP(l, r) | Expr::ImpP(l, r) => {
                let sl = self.sort_of(ctx, l)?;
                let sr = self.sort_of(ctx, r)?;
                self.require_le("operand of a connective", sl, Sort::Prop)?;
                self.require_le("operand of a connective", sr, Sort::Prop)?;
                Ok(if sl == Sort::PropS && sr == Sort::PropS { Sort::PropS } else { Sort::Prop })
            }
            Expr::Trunc(a) => {
                let sa = self.sort_of(ctx, a)?;
                Ok(if m {
                    Sort::Set
                } else if sa.le(Sort::Set) {
                    Sort::PropS
                } else {
                    Sort::Prop
                })
            }
            _ => {
                let head = self.whnf(ty)?;
                if head != *ty && is_type_former(&head) {
                    return self.sort_of(ctx, &head);
                }
                if let Expr::App(..) | Expr::Var(_) = &head {
                    if let Ok(t) = self.infer_at(ctx, &head) {
                        if let Expr::PowUnit | Expr::SmallProps = self.whnf(&t)? {
                            return Ok(Sort::PropS);
                        }
                    }
                }
                if head != *ty && !m {
                    if let Ok(s) = self.sort_of(ctx, &head) {
                        return Ok(s);
                    }
                }
                Err(DttError::NotAType(Box::new(ty.clone())))
            }
        }
    }

    /// The body of a one-name binder at the newest variable of `inner`.
    fn reopen(&self, bb: &Binder, inner: &Ctx) -> Expr {
        let Some(super::Entry::Term(x, _)) = inner.entries().last() else {
            return (*bb.body).clone();
        };
        bb.instantiate(&[Expr::var(x)])
    }

    fn prop_gate(&self, ctx: &Ctx, eliminator: &'static str, motive: &Expr) -> DttResult<()> {
        if self.mltt() {
            return Ok(());
        }
        let s = self.sort_of(ctx, motive)?;
        if s.le(Sort::Prop) {
            Ok(())
        } else {
            Err(DttError::SortViolation { eliminator, motive_sort: s })
        }
    }

    fn trunc_gate(&self, ctx: &Ctx, motive: &Expr) -> DttResult<()> {
        let s = self.sort_of(ctx, motive)?;
        let s = if self.mltt() { Sort::Set } else { s };
        let mut f = self.fuel;
        let nf = normalize(motive, &mut f)?;
        if s.le(Sort::Prop) || is_hprop(ctx, &nf) {
            Ok(())
        } else {
            Err(DttError::SortViolation { eliminator: "trunc-elim", motive_sort: s })
        }
    }

    fn mismatch(&self, expected: &Expr, found: &Expr) -> DttError {
        DttError::Mismatch { expected: Box::new(expected.clone()), found: Box::new(found.clone()) }
    }

    fn check_at(&self, ctx: &Ctx, e: &Expr, ty: &Expr) -> DttResult<()> {
        let t = self.whnf(ty)?;
        match (e, &t) {
            (Expr::Lam(bb), Expr::Pi(a, cb) | Expr::ForallP(a, cb)) => {
                let (inner, vars) = self.open(ctx, bb, &[(**a).clone()]);
                self.check_at(&inner, &bb.instantiate(&vars), &cb.instantiate(&vars))
            }
            (Expr::Lam(bb), Expr::ImpP(a, b)) => {
                let (inner, vars) = self.open(ctx, bb, &[(**a).clone()]);
                self.check_at(&inner, &bb.instantiate(&vars), b)
            }
            (Expr::PropLam(bb), Expr::Pi(a, cb)) => {
                if self.mltt() {
                    return Err(self.unavailable("plam"));
                }
                if !matches!(self.whnf(&cb.body)?, Expr::PowUnit | Expr::SmallProps) {
                    return Err(DttError::Shape {
                        expected: "a propositional-function collection",
                        found: Box::new(t.clone()),
                    });
                }
                let (inner, vars) = self.open(ctx, bb, &[(**a).clone()]);
                let body = bb.instantiate(&vars);
                match self.sort_of(&inner, &body)? {
                    Sort::PropS => Ok(()),
                    _ => Err(DttError::NotSmall(Box::new(body))),
                }
            }
            (Expr::Pair(l, r) | Expr::ExIntro(l, r), Expr::Sigma(a, cb) | Expr::ExistsP(a, cb)) => {
                self.check_at(ctx, l, a)?;
                self.check_at(ctx, r, &cb.instantiate(&[(**l).clone()]))
            }
            (Expr::Pair(l, r), Expr::AndP(a, b)) => {
                self.check_at(ctx, l, a)?;
                self.check_at(ctx, r, b)
            }
            (Expr::Inl(x), Expr::Sum(a, _) | Expr::OrP(a, _)) | (Expr::Inr(x), Expr::Sum(_, a) | Expr::OrP(_, a)) => {
                self.check_at(ctx, x, a)
            }
            (Expr::Case { scrut, motive: None, left, right }, _) => {
                let st = self.whnf(&self.infer_at(ctx, scrut)?)?;
                let (a, b) = match &st {
                    Expr::Sum(a, b) => (a, b),
                    Expr::OrP(a, b) => {
                        self.prop_gate(ctx, "case", ty)?;
                        (a, b)
                    }
                    _ => return Err(DttError::Shape { expected: "a sum or disjunction", found: Box::new(st.clone()) }),
                };
                let (inner, vars) = self.open(ctx, left, &[(**a).clone()]);
                self.check_at(&inner, &left.instantiate(&vars), ty)?;
                let (inner, vars) = self.open(ctx, right, &[(**b).clone()]);
                self.check_at(&inner, &right.instantiate(&vars), ty)
            }
            (Expr::TruncIntro(a), Expr::Trunc(at)) => self.check_at(ctx, a, at),
            (Expr::TruncElim { scrut, body }, _) => {
                let st = self.whnf(&self.infer_at(ctx, scrut)?)?;
                let Expr::Trunc(a) = &st else {
                    return Err(DttError::Shape { expected: "a truncation", found: Box::new(st.clone()) });
                };
                self.trunc_gate(ctx, ty)?;
                let (inner, vars) = self.open(ctx, body, &[(**a).clone()]);
                self.check_at(&inner, &body.instantiate(&vars), ty)
            }
            (Expr::ExElim { scrut, body }, _) => {
                let st = self.whnf(&self.infer_at(ctx, scrut)?)?;
                let (a, cb) = match &st {
                    Expr::Sigma(a, cb) => (a, cb),
                    Expr::ExistsP(a, cb) => {
                        self.prop_gate(ctx, "ex-elim", ty)?;
                        (a, cb)
                    }
                    _ => return Err(DttError::Shape { expected: "an existential", found: Box::new(st.clone()) }),
                };
                let (inner, vars) = self.open(ctx, &Binder::new(&[&body.names[0]], Expr::Unit), &[(**a).clone()]);
                let proof_ty = cb.instantiate(&vars);
                let label = Binder::new(&[&body.names[1]], Expr::Unit);
                let (inner, hv) = self.open(&inner, &label, &[proof_ty]);
                let b = body.instantiate(&[vars[0].clone(), hv[0].clone()]);
                self.check_at(&inner, &b, ty)
            }
            (Expr::Absurd(None, x), _) => {
                let xt = self.whnf(&self.infer_at(ctx, x)?)?;
                match xt {
                    Expr::Empty => Ok(()),
                    Expr::FalseP => self.prop_gate(ctx, "absurd", ty),
                    _ => Err(DttError::Shape { expected: "a proof of falsity", found: Box::new(xt) }),
                }
            }
            (Expr::Refl(a), Expr::Id(at, l, r) | Expr::EqP(at, l, r)) => {
                self.check_at(ctx, a, at)?;
                if self.conv(l, a)? && self.conv(a, r)? {
                    Ok(())
                } else {
                    Err(self.mismatch(&t, &Expr::Id(at.clone(), a.clone(), a.clone())))
                }
            }
            (Expr::Let(lt, v, bb), _) => {
                self.sort_of(ctx, lt)?;
                self.check_at(ctx, v, lt)?;
                let (inner, vars) = self.open(ctx, bb, &[(**lt).clone()]);
                self.check_at(&inner, &bb.instantiate(&vars), ty)
            }
            (Expr::True, _) => {
                if self.mode != SortMode::Emtt {
                    return Err(self.unavailable("true"));
                }
                let s = self.sort_of(ctx, ty)?;
                self.require_le("statement of a canonical proof", s, Sort::Prop)
            }
            (Expr::Star, Expr::Unit) => Ok(()),
            _ => {
                let found = self.infer_at(ctx, e)?;
                if self.conv(&found, ty)? {
                    Ok(())
                } else {
                    Err(self.mismatch(ty, &found))
                }
            }
        }
    }

    fn infer_at(&self, ctx: &Ctx, e: &Expr) -> DttResult<Expr> {
        match e {
            Expr::Var(x) => match ctx.term(x) {
                Some(t) => Ok(self.prepare(t)),
                None if ctx.family(x).is_some() => Err(DttError::NotATerm(Box::new(e.clone()))),
                None => Err(DttError::Unbound(x.clone())),
            },
            Expr::App(f, a) => {
                let ft = self.whnf(&self.infer_at(ctx, f)?)?;
                match &ft {
                    Expr::Pi(dom, bb) | Expr::ForallP(dom, bb) => {
                        self.check_at(ctx, a, dom)?;
                        Ok(bb.instantiate(&[(**a).clone()]))
                    }
                    Expr::ImpP(dom, cod) => {
                        self.check_at(ctx, a, dom)?;
                        Ok((**cod).clone())
                    }
                    _ => Err(DttError::Shape { expected: "a function", found: Box::new(ft.clone()) }),
                }
            }
            Expr::Fst(p) | Expr::Snd(p) => {
                let first = matches!(e, Expr::Fst(_));
                let name = if first { "fst" } else { "snd" };
                let pt = self.whnf(&self.infer_at(ctx, p)?)?;
                match &pt {
                    Expr::Sigma(a, bb) => {
                        Ok(if first { (**a).clone() } else { bb.instantiate(&[Expr::fst((**p).clone())]) })
                    }
                    Expr::AndP(a, b) => Ok(if first { (**a).clone() } else { (**b).clone() }),
                    Expr::ExistsP(a, bb) => {
                        let motive_sort = if first {
                            self.sort_of(ctx, a)?
                        } else {
                            let (inner, _) = self.open(ctx, bb, &[(**a).clone()]);
                            self.sort_of(&inner, &self.reopen(bb, &inner))?
                        };
                        Err(DttError::SortViolation { eliminator: name, motive_sort })
                    }
                    _ => Err(DttError::Shape { expected: "a pair type", found: Box::new(pt.clone()) }),
                }
            }
            Expr::Zero => Ok(Expr::Nat),
            Expr::Succ(n) => {
                self.check_at(ctx, n, &Expr::Nat)?;
                Ok(Expr::Nat)
            }
            Expr::NatRec { motive, base, step, target } => {
                let (inner, vars) = self.open(ctx, motive, &[Expr::Nat]);
                self.sort_of(&inner, &motive.instantiate(&vars))?;
                self.check_at(ctx, base, &motive.instantiate(&[Expr::Zero]))?;
                let (inner, mv) = self.open(ctx, &Binder::new(&[&step.names[0]], Expr::Unit), &[Expr::Nat]);
                let (inner, rv) =
                    self.open(&inner, &Binder::new(&[&step.names[1]], Expr::Unit), &[motive.instantiate(&mv)]);
                let goal = motive.instantiate(&[Expr::succ(mv[0].clone())]);
                self.check_at(&inner, &step.instantiate(&[mv[0].clone(), rv[0].clone()]), &goal)?;
                self.check_at(ctx, target, &Expr::Nat)?;
                Ok(motive.instantiate(&[(**target).clone()]))
            }
            Expr::IdPeel { motive, eq, refl } => {
                let et = self.whnf(&self.infer_at(ctx, eq)?)?;
                let (a, l, r, prop) = match &et {
                    Expr::Id(a, l, r) => (a, l, r, false),
                    Expr::EqP(a, l, r) => (a, l, r, true),
                    _ => return Err(DttError::Shape { expected: "an identity proof", found: Box::new(et.clone()) }),
                };
                let eq_former = |x: Expr, y: Expr| {
                    if prop {
                        Expr::eq_p((**a).clone(), x, y)
                    } else {
                        Expr::id((**a).clone(), x, y)
                    }
                };
                let tys =
                    [(**a).clone(), (**a).clone(), eq_former(Expr::var(&motive.names[0]), Expr::var(&motive.names[1]))];
                let (inner, vars) = self.open(ctx, motive, &tys);
                let c = motive.instantiate(&vars);
                let s = self.sort_of(&inner, &c)?;
                if !self.mltt() && !s.le(Sort::Prop) {
                    return Err(DttError::SortViolation { eliminator: "idpeel", motive_sort: s });
                }
                let (inner, wv) = self.open(ctx, refl, &[(**a).clone()]);
                let w = wv[0].clone();
                let goal = motive.instantiate(&[w.clone(), w.clone(), Expr::refl(w)]);
                self.check_at(&inner, &refl.instantiate(&wv), &goal)?;
                Ok(motive.instantiate(&[(**l).clone(), (**r).clone(), (**eq).clone()]))
            }
            Expr::Refl(a) => {
                let at = self.infer_at(ctx, a)?;
                Ok(Expr::id(at, (**a).clone(), (**a).clone()))
            }
            Expr::Ann(x, ty) => {
                self.sort_of(ctx, ty)?;
                self.check_at(ctx, x, ty)?;
                Ok((**ty).clone())
            }
            Expr::Absurd(Some(c), x) => {
                self.sort_of(ctx, c)?;
                self.check_at(ctx, &Expr::Absurd(None, x.clone()), c)?;
                Ok((**c).clone())
            }
            Expr::Case { scrut, motive: Some(m), left, right } => {
                let st = self.whnf(&self.infer_at(ctx, scrut)?)?;
                let (a, b, prop) = match &st {
                    Expr::Sum(a, b) => (a, b, false),
                    Expr::OrP(a, b) => (a, b, true),
                    _ => return Err(DttError::Shape { expected: "a sum or disjunction", found: Box::new(st.clone()) }),
                };
                let (inner, zv) = self.open(ctx, m, core::slice::from_ref(&st));
                let s = self.sort_of(&inner, &m.instantiate(&zv))?;
                if prop && !self.mltt() && !s.le(Sort::Prop) {
                    return Err(DttError::SortViolation { eliminator: "case", motive_sort: s });
                }
                let (inner, xv) = self.open(ctx, left, &[(**a).clone()]);
                let goal = m.instantiate(&[Expr::Inl(Box::new(xv[0].clone()))]);
                self.check_at(&inner, &left.instantiate(&xv), &goal)?;
                let (inner, yv) = self.open(ctx, right, &[(**b).clone()]);
                let goal = m.instantiate(&[Expr::Inr(Box::new(yv[0].clone()))]);
                self.check_at(&inner, &right.instantiate(&yv), &goal)?;
                Ok(m.instantiate(&[(**scrut).clone()]))
            }
            Expr::Let(lt, v, bb) => {
                self.sort_of(ctx, lt)?;
                self.check_at(ctx, v, lt)?;
                let (inner, vars) = self.open(ctx, bb, &[(**lt).clone()]);
                let t = self.infer_at(&inner, &bb.instantiate(&vars))?;
                let Expr::Var(x) = &vars[0] else { unreachable!() };
                Ok(t.subst(x, v))
            }
            Expr::TruncIntro(a) => Ok(Expr::trunc(self.infer_at(ctx, a)?)),
            Expr::Star => Ok(Expr::Unit),
            Expr::PowUnit | Expr::SmallProps if !self.mltt() => Err(DttError::NotATerm(Box::new(e.clone()))),
            _ if is_type_former(e) => Err(DttError::NotATerm(Box::new(e.clone()))),
            _ => Err(DttError::CannotInfer(Box::new(e.clone()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::Entry;

    fn k(mode: SortMode) -> Kernel {
        Kernel::new(mode)
    }

    fn nat_to_p1() -> Expr {
        Expr::arrow(Expr::Nat, Expr::PowUnit)
    }

    #[test]
    fn emtt_classifications() {
        let c = Ctx::new();
        assert_eq!(k(SortMode::Emtt).classify(&c, &Expr::Nat), Ok(Sort::Set));
        assert_eq!(k(SortMode::Emtt).classify(&c, &nat_to_p1()), Ok(Sort::Coll));
        assert!(matches!(k(SortMode::Mtt).classify(&c, &nat_to_p1()), Err(DttError::ModeUnavailable { .. })));
    }

    #[test]
    fn quantifying_over_a_collection_is_large() {
        let c = Ctx::new();
        let dom = Expr::arrow(Expr::Nat, Expr::SmallProps);
        let body = Expr::forall_p("x", Expr::Nat, Expr::app(Expr::var("X"), Expr::var("x")));
        let f = Expr::forall_p("X", dom, body.clone());
        assert_eq!(k(SortMode::Mtt).classify(&c, &f), Ok(Sort::Prop));
        let inner = c.with_term("X", Expr::arrow(Expr::Nat, Expr::SmallProps));
        assert_eq!(k(SortMode::Mtt).classify(&inner, &body), Ok(Sort::PropS));
    }

    #[test]
    fn identity_in_every_mode() {
        let id = Expr::lam("x", Expr::var("x"));
        let ty = Expr::arrow(Expr::Nat, Expr::Nat);
        for mode in [SortMode::Mltt, SortMode::Mtt, SortMode::Emtt] {
            assert_eq!(k(mode).check(&Ctx::new(), &id, &ty), Ok(()));
        }
    }

    #[test]
    fn lem_types() {
        let c = Ctx::new();
        let mltt = lem_type(SortMode::Mltt, &c, &Expr::Nat).unwrap();
        assert!(mltt.alpha_eq(&Expr::sum(Expr::Nat, Expr::arrow(Expr::Nat, Expr::Empty))));
        let eq = Expr::eq_p(Expr::Nat, Expr::Zero, Expr::Zero);
        assert_eq!(lem_type(SortMode::Mtt, &c, &eq).unwrap(), Expr::or_p(eq.clone(), Expr::imp_p(eq, Expr::FalseP)));
        assert_eq!(lem_type(SortMode::Mtt, &c, &Expr::Nat), Err(DttError::LemRestricted(Sort::Set)));
    }

    #[test]
    fn existential_projection_is_gated() {
        let ty = Expr::exists_p("y", Expr::Nat, Expr::eq_p(Expr::Nat, Expr::var("y"), Expr::Zero));
        let c = Ctx::new().with_term("h", ty);
        let e = Expr::fst(Expr::var("h"));
        assert_eq!(
            k(SortMode::Mtt).check(&c, &e, &Expr::Nat),
            Err(DttError::SortViolation { eliminator: "fst", motive_sort: Sort::Set })
        );
        assert_eq!(k(SortMode::Mltt).check(&c, &e, &Expr::Nat), Ok(()));
    }

    #[test]
    fn existential_elimination_into_a_proposition() {
        let ty = Expr::exists_p("y", Expr::Nat, Expr::eq_p(Expr::Nat, Expr::var("y"), Expr::Zero));
        let c = Ctx::new().with_term("h", ty.clone());
        // ex-elim h (y p. ex-intro y p) : ∃y (y = 0)
        let e = Expr::ExElim {
            scrut: Box::new(Expr::var("h")),
            body: Binder::new(&["y", "p"], Expr::ExIntro(Box::new(Expr::var("y")), Box::new(Expr::var("p")))),
        };
        assert_eq!(k(SortMode::Mtt).check(&c, &e, &ty), Ok(()));
        let into_set = Expr::ExElim { scrut: Box::new(Expr::var("h")), body: Binder::new(&["y", "p"], Expr::var("y")) };
        assert_eq!(
            k(SortMode::Mtt).check(&c, &into_set, &Expr::Nat),
            Err(DttError::SortViolation { eliminator: "ex-elim", motive_sort: Sort::Set })
        );
    }

    #[test]
    fn truncation_rules() {
        let c = Ctx::new();
        let e = Expr::TruncIntro(Box::new(Expr::Zero));
        assert_eq!(k(SortMode::Mltt).check(&c, &e, &Expr::trunc(Expr::Nat)), Ok(()));
        let c = c.with_term("t", Expr::trunc(Expr::Nat));
        let into_nat = Expr::TruncElim { scrut: Box::new(Expr::var("t")), body: Binder::one("z", Expr::var("z")) };
        assert_eq!(
            k(SortMode::Mtt).check(&c, &into_nat, &Expr::Nat),
            Err(DttError::SortViolation { eliminator: "trunc-elim", motive_sort: Sort::Set })
        );
        let into_trunc = Expr::TruncElim {
            scrut: Box::new(Expr::var("t")),
            body: Binder::one("z", Expr::TruncIntro(Box::new(Expr::succ(Expr::var("z"))))),
        };
        for mode in [SortMode::Mltt, SortMode::Mtt] {
            assert_eq!(k(mode).check(&c, &into_trunc, &Expr::trunc(Expr::Nat)), Ok(()));
        }
    }

    #[test]
    fn families_and_prop_lambdas() {
        let mut c = Ctx::new();
        c.push(Entry::Family {
            name: "R".into(),
            params: alloc::vec![("x".into(), Expr::Nat), ("y".into(), Expr::Nat)],
            sort: Sort::PropS,
        });
        let r = Expr::fam("R", [Expr::Zero, Expr::numeral(1)]);
        assert_eq!(k(SortMode::Mtt).classify(&c, &r), Ok(Sort::PropS));
        assert!(matches!(
            k(SortMode::Mtt).classify(&c, &Expr::fam("R", [Expr::Zero])),
            Err(DttError::FamilyArity { .. })
        ));
        let plam = Expr::PropLam(Binder::one("x", Expr::eq_p(Expr::Nat, Expr::var("x"), Expr::Zero)));
        assert_eq!(k(SortMode::Emtt).check(&c, &plam, &nat_to_p1()), Ok(()));
        let big = Expr::PropLam(Binder::one(
            "x",
            Expr::forall_p("X", nat_to_p1(), Expr::app(Expr::var("X"), Expr::var("x"))),
        ));
        assert!(matches!(k(SortMode::Emtt).check(&c, &big, &nat_to_p1()), Err(DttError::NotSmall(_))));
    }

    #[test]
    fn canonical_truth_in_emtt() {
        let eq = Expr::eq_p(Expr::Nat, Expr::Zero, Expr::Zero);
        assert_eq!(k(SortMode::Emtt).check(&Ctx::new(), &Expr::True, &eq), Ok(()));
        assert!(k(SortMode::Mtt).check(&Ctx::new(), &Expr::True, &eq).is_err());
        assert!(k(SortMode::Emtt).check(&Ctx::new(), &Expr::True, &Expr::Nat).is_err());
    }

    #[test]
    fn identity_elimination_gate() {
        let c = Ctx::new().with_term("e", Expr::id(Expr::Nat, Expr::Zero, Expr::var("n"))).with_term("n", Expr::Nat);
        let c = Ctx::new().with_term("n", Expr::Nat).with_term("e", c.term("e").unwrap().clone());
        let into_nat = Expr::IdPeel {
            motive: Binder::new(&["x", "y", "q"], Expr::Nat),
            eq: Box::new(Expr::var("e")),
            refl: Binder::one("w", Expr::var("w")),
        };
        assert_eq!(k(SortMode::Mltt).infer(&c, &into_nat), Ok(Expr::Nat));
        assert_eq!(
            k(SortMode::Mtt).infer(&c, &into_nat),
            Err(DttError::SortViolation { eliminator: "idpeel", motive_sort: Sort::Set })
        );
    }

    #[test]
    fn mltt_has_no_power_collections() {
        assert!(matches!(
            k(SortMode::Mltt).classify(&Ctx::new(), &Expr::PowUnit),
            Err(DttError::ModeUnavailable { .. })
        ));
    }
}
