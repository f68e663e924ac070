//! Finite types and combinator terms of HA^ω: typing, one-step reduction,
//! normalization and definitional equality.
//!
//! Reduction is leftmost-outermost over the six contraction rules
//!
//! ```text
//! k x y          ⊳ x
//! s x y z        ⊳ (x z) (y z)
//! rec a f 0      ⊳ a
//! rec a f (S n)  ⊳ f n (rec a f n)
//! fst (pair x y) ⊳ x
//! snd (pair x y) ⊳ y
//! ```
//!
//! The recursor's step function receives the predecessor first and the
//! recursive value second.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    N,
    Arrow(Box<FiniteType>, Box<FiniteType>),
    Prod(Box<FiniteType>, Box<FiniteType>),
}

impl FiniteType {
    pub fn arrow(dom: FiniteType, cod: FiniteType) -> FiniteType {
        FiniteType::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn prod(l: FiniteType, r: FiniteType) -> FiniteType {
        FiniteType::Prod(Box::new(l), Box::new(r))
    }

    /// `N → N`
    pub fn n_to_n() -> FiniteType {
        FiniteType::arrow(FiniteType::N, FiniteType::N)
    }

    pub fn size(&self) -> usize {
        match self {
            FiniteType::N => 1,
            FiniteType::Arrow(a, b) | FiniteType::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Combinator terms. Every constant carries its full type instantiation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    Succ,
    K(FiniteType, FiniteType),
    S(FiniteType, FiniteType, FiniteType),
    Rec(FiniteType),
    Pair(FiniteType, FiniteType),
    Fst(FiniteType, FiniteType),
    Snd(FiniteType, FiniteType),
    Ap(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(String::from(name))
    }

    pub fn ap(fun: Term, arg: Term) -> Term {
        Term::Ap(Box::new(fun), Box::new(arg))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::ap)
    }

    pub fn succ(t: Term) -> Term {
        Term::ap(Term::Succ, t)
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// Recognizes `succ^n zero`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Ap(f, a) if **f == Term::Succ => {
                    n += 1;
                    t = a;
                }
                _ => return None,
            }
        }
    }

    pub fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Ap(f, a) => {
                f.free_vars(out);
                a.free_vars(out);
            }
            _ => {}
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::Ap(f, a) => f.mentions(name) || a.mentions(name),
            _ => false,
        }
    }

    /// Terms have no binders, so substitution is plain replacement.
    pub fn subst(&self, name: &str, by: &Term) -> Term {
        match self {
            Term::Var(x) if x == name => by.clone(),
            Term::Ap(f, a) => Term::ap(f.subst(name, by), a.subst(name, by)),
            t => t.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Ap(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }

    /// Head constant and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::Ap(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }
}

/// Ordered variable typing, newest binding last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingContext {
    entries: Vec<(String, FiniteType)>,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    /// Builds a context from distinct names.
    pub fn from_entries(entries: impl IntoIterator<Item = (String, FiniteType)>) -> Result<TypingContext, TypeError> {
        let mut ctx = TypingContext::new();
        for (x, ty) in entries {
            ctx.insert(x, ty)?;
        }
        Ok(ctx)
    }

    pub fn get(&self, name: &str) -> Option<&FiniteType> {
        self.entries.iter().rev().find(|(x, _)| x == name).map(|(_, ty)| ty)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Adds a fresh variable; duplicates are rejected.
    pub fn insert(&mut self, name: String, ty: FiniteType) -> Result<(), TypeError> {
        if self.contains(&name) {
            return Err(TypeError::DuplicateVariable(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    /// Scoped push that permits shadowing; pair with [`TypingContext::pop`].
    pub fn push_shadowing(&mut self, name: String, ty: FiniteType) {
        self.entries.push((name, ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.entries.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FiniteType)> {
        self.entries.iter().map(|(x, t)| (x.as_str(), t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeError {
    UnboundVariable(String),
    DuplicateVariable(String),
    NotAFunction { fun: Term, fun_type: FiniteType },
    ArgumentMismatch { fun: Term, expected: FiniteType, found: FiniteType },
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::syntax::hao::{print_term, print_type};
        match self {
            TypeError::UnboundVariable(x) => write!(f, "unbound variable '{x}'"),
            TypeError::DuplicateVariable(x) => write!(f, "variable '{x}' already in scope"),
            TypeError::NotAFunction { fun, fun_type } => {
                write!(f, "{} has type {}, which is not an arrow", print_term(fun), print_type(fun_type))
            }
            TypeError::ArgumentMismatch { fun, expected, found } => write!(
                f,
                "argument of {} should have type {}, found {}",
                print_term(fun),
                print_type(expected),
                print_type(found)
            ),
        }
    }
}

/// Type of each constant, as an arrow chain.
pub fn constant_type(t: &Term) -> Option<FiniteType> {
    use FiniteType as T;
    let arr = T::arrow;
    Some(match t {
        Term::Zero => T::N,
        Term::Succ => T::n_to_n(),
        Term::K(s, t) => arr(s.clone(), arr(t.clone(), s.clone())),
        Term::S(s, t, r) => {
            arr(arr(s.clone(), arr(t.clone(), r.clone())), arr(arr(s.clone(), t.clone()), arr(s.clone(), r.clone())))
        }
        Term::Rec(s) => arr(s.clone(), arr(arr(T::N, arr(s.clone(), s.clone())), arr(T::N, s.clone()))),
        Term::Pair(s, t) => arr(s.clone(), arr(t.clone(), T::prod(s.clone(), t.clone()))),
        Term::Fst(s, t) => arr(T::prod(s.clone(), t.clone()), s.clone()),
        Term::Snd(s, t) => arr(T::prod(s.clone(), t.clone()), t.clone()),
        Term::Var(_) | Term::Ap(..) => return None,
    })
}

/// Syntax-directed typing.
pub fn infer_type(ctx: &TypingContext, t: &Term) -> Result<FiniteType, TypeError> {
    match t {
        Term::Var(x) => ctx.get(x).cloned().ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::Ap(fun, arg) => {
            let fun_type = infer_type(ctx, fun)?;
            let FiniteType::Arrow(dom, cod) = fun_type else {
                return Err(TypeError::NotAFunction { fun: (**fun).clone(), fun_type });
            };
            let arg_type = infer_type(ctx, arg)?;
            if arg_type != *dom {
                return Err(TypeError::ArgumentMismatch { fun: (**fun).clone(), expected: *dom, found: arg_type });
            }
            Ok(*cod)
        }
        c => Ok(constant_type(c).expect("constant")),
    }
}

fn arity(head: &Term) -> Option<usize> {
    match head {
        Term::K(..) => Some(2),
        Term::S(..) => Some(3),
        Term::Rec(_) => Some(3),
        Term::Fst(..) | Term::Snd(..) => Some(1),
        _ => None,
    }
}

/// Contracts `t` itself if it is a redex with exactly the constant's arity.
fn contract(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    if arity(head)? != args.len() {
        return None;
    }
    match head {
        Term::K(..) => Some(args[0].clone()),
        Term::S(..) => {
            let (x, y, z) = (args[0], args[1], args[2]);
            Some(Term::ap(Term::ap(x.clone(), z.clone()), Term::ap(y.clone(), z.clone())))
        }
        Term::Rec(_) => {
            let (a, f, n) = (args[0], args[1], args[2]);
            match n {
                Term::Zero => Some(a.clone()),
                Term::Ap(s, pred) if **s == Term::Succ => {
                    let rec_pred = Term::ap(Term::ap(Term::ap(head.clone(), a.clone()), f.clone()), (**pred).clone());
                    Some(Term::ap(Term::ap(f.clone(), (**pred).clone()), rec_pred))
                }
                _ => None,
            }
        }
        Term::Fst(..) | Term::Snd(..) => {
            let (pair_head, pair_args) = args[0].spine();
            if matches!(pair_head, Term::Pair(..)) && pair_args.len() == 2 {
                let pick = if matches!(head, Term::Fst(..)) { 0 } else { 1 };
                Some(pair_args[pick].clone())
            } else {
                None
            }
        }
        _ => None,
    }
}

/// One leftmost-outermost contraction; `None` iff `t` is normal.
pub fn step(t: &Term) -> Option<Term> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        Term::Ap(f, a) => {
            if let Some(f2) = step(f) {
                return Some(Term::Ap(Box::new(f2), a.clone()));
            }
            step(a).map(|a2| Term::Ap(f.clone(), Box::new(a2)))
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuelExhausted {
    pub last: Term,
    pub steps: u64,
}

impl fmt::Display for FuelExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "reduction fuel exhausted after {} steps at {}",
            self.steps,
            crate::syntax::hao::print_term(&self.last)
        )
    }
}

/// Iterates [`step`] to a normal form within `fuel` contractions.
pub fn normalize(t: &Term, fuel: u64) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        let Some(next) = step(&cur) else {
            return Ok(cur);
        };
        if steps == fuel {
            return Err(FuelExhausted { last: cur, steps });
        }
        steps += 1;
        cur = next;
    }
}

/// Normal forms are syntactically identical.
pub fn def_equal(t: &Term, u: &Term, fuel: u64) -> Result<bool, FuelExhausted> {
    if t == u {
        return Ok(true);
    }
    Ok(normalize(t, fuel)? == normalize(u, fuel)?)
}

/// Bracket abstraction: a combinator term `λx.body` with `x : dom`.
///
/// `ctx` must type the free variables of `body` other than `x`.
pub fn lambda(ctx: &TypingContext, x: &str, dom: &FiniteType, body: &Term) -> Result<Term, TypeError> {
    let mut inner = ctx.clone();
    inner.push_shadowing(String::from(x), dom.clone());
    abstract_var(&inner, x, dom, body)
}

fn abstract_var(ctx: &TypingContext, x: &str, dom: &FiniteType, body: &Term) -> Result<Term, TypeError> {
    use FiniteType as T;
    if !body.mentions(x) {
        let ty = infer_type(ctx, body)?;
        return Ok(Term::ap(Term::K(ty, dom.clone()), body.clone()));
    }
    match body {
        Term::Var(_) => {
            // s k k at the right instance
            let s = Term::S(dom.clone(), T::arrow(dom.clone(), dom.clone()), dom.clone());
            let k1 = Term::K(dom.clone(), T::arrow(dom.clone(), dom.clone()));
            let k2 = Term::K(dom.clone(), dom.clone());
            Ok(Term::apps(s, [k1, k2]))
        }
        Term::Ap(f, a) => {
            let a_ty = infer_type(ctx, a)?;
            let body_ty = infer_type(ctx, body)?;
            let lf = abstract_var(ctx, x, dom, f)?;
            let la = abstract_var(ctx, x, dom, a)?;
            Ok(Term::apps(Term::S(dom.clone(), a_ty, body_ty), [lf, la]))
        }
        _ => unreachable!("constants do not mention variables"),
    }
}

/// Addition by primitive recursion on the second argument.
pub fn add_term() -> Term {
    use FiniteType as T;
    // λm.λn. rec m (k succ) n
    let step_fn = Term::ap(Term::K(T::n_to_n(), T::N), Term::Succ);
    let body = Term::apps(Term::Rec(T::N), [Term::var("m"), step_fn, Term::var("n")]);
    let ctx = TypingContext::from_entries([(String::from("m"), T::N)]).unwrap();
    let inner = lambda(&ctx, "n", &T::N, &body).unwrap();
    lambda(&TypingContext::new(), "m", &T::N, &inner).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use FiniteType as T;

    fn k_nn() -> Term {
        Term::K(T::N, T::N)
    }

    #[test]
    fn zero_is_n() {
        assert_eq!(infer_type(&TypingContext::new(), &Term::Zero), Ok(T::N));
    }

    #[test]
    fn k_has_shape_sigma_tau_sigma() {
        let k = Term::K(T::N, T::n_to_n());
        assert_eq!(infer_type(&TypingContext::new(), &k), Ok(T::arrow(T::N, T::arrow(T::n_to_n(), T::N))));
    }

    #[test]
    fn applying_zero_is_ill_typed() {
        let t = Term::ap(Term::Zero, Term::Zero);
        assert!(matches!(infer_type(&TypingContext::new(), &t), Err(TypeError::NotAFunction { fun_type: T::N, .. })));
    }

    #[test]
    fn argument_mismatch() {
        let t = Term::ap(Term::Succ, Term::Succ);
        assert!(matches!(infer_type(&TypingContext::new(), &t), Err(TypeError::ArgumentMismatch { .. })));
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(infer_type(&TypingContext::new(), &Term::var("x")), Err(TypeError::UnboundVariable("x".into())));
    }

    #[test]
    fn duplicate_context_entries_rejected() {
        let mut ctx = TypingContext::new();
        ctx.insert("x".into(), T::N).unwrap();
        assert!(ctx.insert("x".into(), T::N).is_err());
    }

    #[test]
    fn k_rule() {
        let t = Term::apps(k_nn(), [Term::Zero, Term::numeral(1)]);
        assert_eq!(step(&t), Some(Term::Zero));
    }

    #[test]
    fn projection_rule() {
        let pair = Term::apps(Term::Pair(T::N, T::N), [Term::Zero, Term::numeral(1)]);
        assert_eq!(step(&Term::ap(Term::Fst(T::N, T::N), pair.clone())), Some(Term::Zero));
        assert_eq!(step(&Term::ap(Term::Snd(T::N, T::N), pair)), Some(Term::numeral(1)));
    }

    #[test]
    fn rec_on_two_unfolds_once() {
        let f = Term::var("f");
        let a = Term::var("a");
        let rec = |n: Term| Term::apps(Term::Rec(T::N), [a.clone(), f.clone(), n]);
        let expected = Term::apps(f.clone(), [Term::numeral(1), rec(Term::numeral(1))]);
        assert_eq!(step(&rec(Term::numeral(2))), Some(expected));
    }

    #[test]
    fn rec_stuck_on_variable() {
        let t = Term::apps(Term::Rec(T::N), [Term::Zero, Term::var("f"), Term::var("n")]);
        assert_eq!(step(&t), None);
    }

    #[test]
    fn over_applied_k_contracts_prefix() {
        let k = Term::K(T::n_to_n(), T::N);
        let t = Term::apps(k, [Term::Succ, Term::Zero, Term::Zero]);
        assert_eq!(step(&t), Some(Term::ap(Term::Succ, Term::Zero)));
    }

    #[test]
    fn normalize_variable_is_identity() {
        assert_eq!(normalize(&Term::var("x"), 0), Ok(Term::var("x")));
    }

    #[test]
    fn zero_fuel_on_redex() {
        let t = Term::apps(k_nn(), [Term::Zero, Term::Zero]);
        let err = normalize(&t, 0).unwrap_err();
        assert_eq!(err.last, t);
    }

    #[test]
    fn rec_with_successor_step_counts_up() {
        // f = k succ : N → (N → N), so f n m ⊳ succ m
        let f = Term::ap(Term::K(T::n_to_n(), T::N), Term::Succ);
        for n in 0..6 {
            let t = Term::apps(Term::Rec(T::N), [Term::Zero, f.clone(), Term::numeral(n)]);
            assert_eq!(normalize(&t, 10_000).unwrap(), Term::numeral(n));
        }
    }

    #[test]
    fn skk_is_identity() {
        let skk = Term::apps(Term::S(T::N, T::n_to_n(), T::N), [Term::K(T::N, T::n_to_n()), Term::K(T::N, T::N)]);
        assert_eq!(infer_type(&TypingContext::new(), &skk), Ok(T::n_to_n()));
        assert!(def_equal(&Term::ap(skk, Term::Zero), &Term::Zero, 100).unwrap());
    }

    #[test]
    fn k_x_y_equals_x() {
        let t = Term::apps(k_nn(), [Term::var("x"), Term::var("y")]);
        assert!(def_equal(&t, &Term::var("x"), 10).unwrap());
        assert!(!def_equal(&Term::Zero, &Term::numeral(1), 10).unwrap());
    }

    #[test]
    fn bracket_abstraction_types_and_computes() {
        let add = add_term();
        assert_eq!(infer_type(&TypingContext::new(), &add), Ok(T::arrow(T::N, T::n_to_n())));
        for (a, b) in [(0, 0), (2, 3), (4, 1)] {
            let t = Term::apps(add.clone(), [Term::numeral(a), Term::numeral(b)]);
            assert_eq!(normalize(&t, 100_000).unwrap(), Term::numeral(a + b));
        }
    }

    #[test]
    fn numerals_round_trip() {
        for n in 0..5 {
            assert_eq!(Term::numeral(n).as_numeral(), Some(n));
        }
        assert_eq!(Term::var("x").as_numeral(), None);
    }
}
