use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::names;

/// A scope: the names it binds, then the body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub names: Vec<String>,
    pub body: Box<Expr>,
}

impl Binder {
    pub fn new(names: &[&str], body: Expr) -> Binder {
        Binder { names: names.iter().map(|s| String::from(*s)).collect(), body: Box::new(body) }
    }

    pub fn one(x: &str, body: Expr) -> Binder {
        Binder::new(&[x], body)
    }

    /// The body with the bound names replaced, left to right.
    pub fn instantiate(&self, args: &[Expr]) -> Expr {
        debug_assert_eq!(args.len(), self.names.len());
        let pairs: Vec<(String, Expr)> = self.names.iter().cloned().zip(args.iter().cloned()).collect();
        self.body.subst_many(&pairs)
    }
}

/// Dependent-type expressions. Types and terms share one syntax but are
/// kept apart by the judgements; there are no universes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    /// Application of a declared type family.
    Fam(String, Vec<Expr>),
    Nat,
    Empty,
    Unit,
    Pi(Box<Expr>, Binder),
    Sigma(Box<Expr>, Binder),
    Sum(Box<Expr>, Box<Expr>),
    Id(Box<Expr>, Box<Expr>, Box<Expr>),
    ExistsP(Box<Expr>, Binder),
    OrP(Box<Expr>, Box<Expr>),
    FalseP,
    ForallP(Box<Expr>, Binder),
    ImpP(Box<Expr>, Box<Expr>),
    AndP(Box<Expr>, Box<Expr>),
    EqP(Box<Expr>, Box<Expr>, Box<Expr>),
    Trunc(Box<Expr>),
    /// The power collection of the singleton.
    PowUnit,
    /// The collection of small propositions.
    SmallProps,
    Lam(Binder),
    App(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Inl(Box<Expr>),
    Inr(Box<Expr>),
    Case {
        scrut: Box<Expr>,
        /// `z. C` for a dependent elimination.
        motive: Option<Binder>,
        left: Binder,
        right: Binder,
    },
    Zero,
    Succ(Box<Expr>),
    NatRec {
        motive: Binder,
        base: Box<Expr>,
        /// Binds the predecessor and the recursive result.
        step: Binder,
        target: Box<Expr>,
    },
    Refl(Box<Expr>),
    /// Identity elimination; the motive binds `x y e`, the reflexivity case `w`.
    IdPeel {
        motive: Binder,
        eq: Box<Expr>,
        refl: Binder,
    },
    ExIntro(Box<Expr>, Box<Expr>),
    /// Binds the witness and the proof.
    ExElim {
        scrut: Box<Expr>,
        body: Binder,
    },
    TruncIntro(Box<Expr>),
    TruncElim {
        scrut: Box<Expr>,
        body: Binder,
    },
    /// A small propositional function `λx.φ`.
    PropLam(Binder),
    /// The canonical proof of a true proposition.
    True,
    Star,
    Absurd(Option<Box<Expr>>, Box<Expr>),
    Let(Box<Expr>, Box<Expr>, Binder),
    Ann(Box<Expr>, Box<Expr>),
}

/// A child position: plain, or under binders.
pub enum Child<'a> {
    Plain(&'a Expr),
    Bound(&'a Binder),
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn var(x: &str) -> Expr {
        Expr::Var(String::from(x))
    }
    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(b(f), b(a))
    }
    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }
    pub fn lam(x: &str, body: Expr) -> Expr {
        Expr::Lam(Binder::one(x, body))
    }
    pub fn pi(x: &str, dom: Expr, cod: Expr) -> Expr {
        Expr::Pi(b(dom), Binder::one(x, cod))
    }
    pub fn sigma(x: &str, dom: Expr, cod: Expr) -> Expr {
        Expr::Sigma(b(dom), Binder::one(x, cod))
    }
    /// Non-dependent function type.
    pub fn arrow(dom: Expr, cod: Expr) -> Expr {
        let x = anon(&cod);
        Expr::pi(&x, dom, cod)
    }
    /// Non-dependent pair type.
    pub fn times(l: Expr, r: Expr) -> Expr {
        let x = anon(&r);
        Expr::sigma(&x, l, r)
    }
    pub fn sum(l: Expr, r: Expr) -> Expr {
        Expr::Sum(b(l), b(r))
    }
    pub fn id(ty: Expr, l: Expr, r: Expr) -> Expr {
        Expr::Id(b(ty), b(l), b(r))
    }
    pub fn eq_p(ty: Expr, l: Expr, r: Expr) -> Expr {
        Expr::EqP(b(ty), b(l), b(r))
    }
    pub fn exists_p(x: &str, dom: Expr, body: Expr) -> Expr {
        Expr::ExistsP(b(dom), Binder::one(x, body))
    }
    pub fn forall_p(x: &str, dom: Expr, body: Expr) -> Expr {
        Expr::ForallP(b(dom), Binder::one(x, body))
    }
    pub fn imp_p(l: Expr, r: Expr) -> Expr {
        Expr::ImpP(b(l), b(r))
    }
    pub fn and_p(l: Expr, r: Expr) -> Expr {
        Expr::AndP(b(l), b(r))
    }
    pub fn or_p(l: Expr, r: Expr) -> Expr {
        Expr::OrP(b(l), b(r))
    }
    pub fn pair(l: Expr, r: Expr) -> Expr {
        Expr::Pair(b(l), b(r))
    }
    pub fn fst(e: Expr) -> Expr {
        Expr::Fst(b(e))
    }
    pub fn snd(e: Expr) -> Expr {
        Expr::Snd(b(e))
    }
    pub fn succ(e: Expr) -> Expr {
        Expr::Succ(b(e))
    }
    pub fn numeral(n: u64) -> Expr {
        (0..n).fold(Expr::Zero, |acc, _| Expr::succ(acc))
    }
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Expr::Zero => Some(0),
            Expr::Succ(e) => e.as_numeral().map(|n| n + 1),
            _ => None,
        }
    }
    pub fn refl(e: Expr) -> Expr {
        Expr::Refl(b(e))
    }
    pub fn trunc(e: Expr) -> Expr {
        Expr::Trunc(b(e))
    }
    pub fn ann(e: Expr, ty: Expr) -> Expr {
        Expr::Ann(b(e), b(ty))
    }
    pub fn fam(name: &str, args: impl IntoIterator<Item = Expr>) -> Expr {
        Expr::Fam(String::from(name), args.into_iter().collect())
    }

    /// Children in a fixed order; binders are reported with their names.
    pub fn children(&self) -> Vec<Child<'_>> {
        use Child::{Bound as B, Plain as P};
        match self {
            Expr::Var(_)
            | Expr::Nat
            | Expr::Empty
            | Expr::Unit
            | Expr::FalseP
            | Expr::PowUnit
            | Expr::SmallProps
            | Expr::Zero
            | Expr::True
            | Expr::Star => Vec::new(),
            Expr::Fam(_, args) => args.iter().map(P).collect(),
            Expr::Pi(a, bb) | Expr::Sigma(a, bb) | Expr::ExistsP(a, bb) | Expr::ForallP(a, bb) => {
                alloc::vec![P(a), B(bb)]
            }
            Expr::Sum(l, r)
            | Expr::OrP(l, r)
            | Expr::ImpP(l, r)
            | Expr::AndP(l, r)
            | Expr::App(l, r)
            | Expr::Pair(l, r)
            | Expr::ExIntro(l, r)
            | Expr::Ann(l, r) => alloc::vec![P(l), P(r)],
            Expr::Id(a, l, r) | Expr::EqP(a, l, r) => alloc::vec![P(a), P(l), P(r)],
            Expr::Trunc(e)
            | Expr::Fst(e)
            | Expr::Snd(e)
            | Expr::Inl(e)
            | Expr::Inr(e)
            | Expr::Succ(e)
            | Expr::Refl(e)
            | Expr::TruncIntro(e) => alloc::vec![P(e)],
            Expr::Lam(bb) | Expr::PropLam(bb) => alloc::vec![B(bb)],
            Expr::Case { scrut, motive, left, right } => {
                let mut v = alloc::vec![P(scrut)];
                if let Some(m) = motive {
                    v.push(B(m));
                }
                v.push(B(left));
                v.push(B(right));
                v
            }
            Expr::NatRec { motive, base, step, target } => alloc::vec![B(motive), P(base), B(step), P(target)],
            Expr::IdPeel { motive, eq, refl } => alloc::vec![B(motive), P(eq), B(refl)],
            Expr::ExElim { scrut, body } | Expr::TruncElim { scrut, body } => alloc::vec![P(scrut), B(body)],
            Expr::Absurd(c, e) => match c {
                Some(c) => alloc::vec![P(c), P(e)],
                None => alloc::vec![P(e)],
            },
            Expr::Let(ty, val, body) => alloc::vec![P(ty), P(val), B(body)],
        }
    }

    /// Rebuilds the node with every child transformed. `plain` receives
    /// unbound children, `bound` receives binders.
    pub fn map_children(&self, plain: &mut dyn FnMut(&Expr) -> Expr, bound: &mut dyn FnMut(&Binder) -> Binder) -> Expr {
        let mut p = |e: &Expr| Box::new(plain(e));
        match self {
            Expr::Var(_)
            | Expr::Nat
            | Expr::Empty
            | Expr::Unit
            | Expr::FalseP
            | Expr::PowUnit
            | Expr::SmallProps
            | Expr::Zero
            | Expr::True
            | Expr::Star => self.clone(),
            Expr::Fam(n, args) => Expr::Fam(n.clone(), args.iter().map(|a| *p(a)).collect()),
            Expr::Pi(a, bb) => Expr::Pi(p(a), bound(bb)),
            Expr::Sigma(a, bb) => Expr::Sigma(p(a), bound(bb)),
            Expr::ExistsP(a, bb) => Expr::ExistsP(p(a), bound(bb)),
            Expr::ForallP(a, bb) => Expr::ForallP(p(a), bound(bb)),
            Expr::Sum(l, r) => Expr::Sum(p(l), p(r)),
            Expr::OrP(l, r) => Expr::OrP(p(l), p(r)),
            Expr::ImpP(l, r) => Expr::ImpP(p(l), p(r)),
            Expr::AndP(l, r) => Expr::AndP(p(l), p(r)),
            Expr::App(l, r) => Expr::App(p(l), p(r)),
            Expr::Pair(l, r) => Expr::Pair(p(l), p(r)),
            Expr::ExIntro(l, r) => Expr::ExIntro(p(l), p(r)),
            Expr::Ann(l, r) => Expr::Ann(p(l), p(r)),
            Expr::Id(a, l, r) => Expr::Id(p(a), p(l), p(r)),
            Expr::EqP(a, l, r) => Expr::EqP(p(a), p(l), p(r)),
            Expr::Trunc(e) => Expr::Trunc(p(e)),
            Expr::Fst(e) => Expr::Fst(p(e)),
            Expr::Snd(e) => Expr::Snd(p(e)),
            Expr::Inl(e) => Expr::Inl(p(e)),
            Expr::Inr(e) => Expr::Inr(p(e)),
            Expr::Succ(e) => Expr::Succ(p(e)),
            Expr::Refl(e) => Expr::Refl(p(e)),
            Expr::TruncIntro(e) => Expr::TruncIntro(p(e)),
            Expr::Lam(bb) => Expr::Lam(bound(bb)),
            Expr::PropLam(bb) => Expr::PropLam(bound(bb)),
            Expr::Case { scrut, motive, left, right } => {
                let scrut = p(scrut);
                let motive = motive.as_ref().map(&mut *bound);
                Expr::Case { scrut, motive, left: bound(left), right: bound(right) }
            }
            Expr::NatRec { motive, base, step, target } => {
                Expr::NatRec { motive: bound(motive), base: p(base), step: bound(step), target: p(target) }
            }
            Expr::IdPeel { motive, eq, refl } => Expr::IdPeel { motive: bound(motive), eq: p(eq), refl: bound(refl) },
            Expr::ExElim { scrut, body } => Expr::ExElim { scrut: p(scrut), body: bound(body) },
            Expr::TruncElim { scrut, body } => Expr::TruncElim { scrut: p(scrut), body: bound(body) },
            Expr::Absurd(c, e) => Expr::Absurd(c.as_ref().map(|c| p(c)), p(e)),
            Expr::Let(ty, val, body) => Expr::Let(p(ty), p(val), bound(body)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        if let Expr::Var(x) = self {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
            return;
        }
        for c in self.children() {
            match c {
                Child::Plain(e) => e.collect_free(bound, out),
                Child::Bound(bb) => {
                    let n = bound.len();
                    bound.extend(bb.names.iter().cloned());
                    bb.body.collect_free(bound, out);
                    bound.truncate(n);
                }
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        self.free_vars().contains(x)
    }

    /// Every variable name occurring, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        if let Expr::Var(x) = self {
            out.insert(x.clone());
        }
        for c in self.children() {
            match c {
                Child::Plain(e) => e.all_names(out),
                Child::Bound(bb) => {
                    out.extend(bb.names.iter().cloned());
                    bb.body.all_names(out);
                }
            }
        }
    }

    pub fn subst(&self, x: &str, by: &Expr) -> Expr {
        self.subst_many(&[(String::from(x), by.clone())])
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst_many(&self, pairs: &[(String, Expr)]) -> Expr {
        if pairs.is_empty() {
            return self.clone();
        }
        let mut fv = BTreeSet::new();
        for (_, e) in pairs {
            fv.extend(e.free_vars());
        }
        self.subst_rec(pairs, &fv)
    }

    fn subst_rec(&self, pairs: &[(String, Expr)], fv: &BTreeSet<String>) -> Expr {
        if let Expr::Var(x) = self {
            return pairs.iter().find(|(y, _)| y == x).map_or_else(|| self.clone(), |(_, e)| e.clone());
        }
        self.map_children(&mut |e| e.subst_rec(pairs, fv), &mut |bb| subst_binder(bb, pairs, fv))
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Binders renamed to `#0`, `#1`, ... by depth.
    pub fn canonical(&self) -> Expr {
        self.canonical_at(0)
    }

    fn canonical_at(&self, depth: usize) -> Expr {
        self.map_children(&mut |e| e.canonical_at(depth), &mut |bb| {
            let fresh: Vec<String> = (0..bb.names.len()).map(|i| alloc::format!("#{}", depth + i)).collect();
            let pairs: Vec<(String, Expr)> =
                bb.names.iter().cloned().zip(fresh.iter().map(|n| Expr::Var(n.clone()))).collect();
            let body = bb.body.subst_many(&pairs).canonical_at(depth + bb.names.len());
            Binder { names: fresh, body: Box::new(body) }
        })
    }

    pub fn size(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| match c {
                Child::Plain(e) => e.size(),
                Child::Bound(bb) => bb.body.size(),
            })
            .sum::<usize>()
    }
}

/// A name for a non-dependent binder that does not occur free in `body`.
pub fn anon(body: &Expr) -> String {
    let fv = body.free_vars();
    names::fresh("_", |c| fv.contains(c))
}

fn subst_binder(bb: &Binder, pairs: &[(String, Expr)], fv: &BTreeSet<String>) -> Binder {
    let live: Vec<(String, Expr)> = pairs.iter().filter(|(x, _)| !bb.names.contains(x)).cloned().collect();
    if live.is_empty() {
        return bb.clone();
    }
    let body_fv = bb.body.free_vars();
    if !live.iter().any(|(x, _)| body_fv.contains(x)) {
        return bb.clone();
    }
    let mut names = bb.names.clone();
    let mut renames = Vec::new();
    for i in 0..names.len() {
        if fv.contains(&names[i]) {
            let taken = |c: &str| {
                fv.contains(c)
                    || body_fv.contains(c)
                    || names.iter().any(|n| n == c)
                    || live.iter().any(|(x, _)| x == c)
            };
            let fresh = names::prime_away(&names[i], taken);
            renames.push((names[i].clone(), Expr::Var(fresh.clone())));
            names[i] = fresh;
        }
    }
    let body = if renames.is_empty() { (*bb.body).clone() } else { bb.body.subst_many(&renames) };
    let mut fv2 = fv.clone();
    for (_, e) in &renames {
        fv2.extend(e.free_vars());
    }
    Binder { names, body: Box::new(body.subst_rec(&live, &fv2)) }
}

fn alpha(a: &Expr, b: &Expr, env: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Expr::Fam(f, xs), Expr::Fam(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha(x, y, env))
        }
        _ => {
            if core::mem::discriminant(a) != core::mem::discriminant(b) {
                return false;
            }
            let (ca, cb) = (a.children(), b.children());
            if ca.len() != cb.len() {
                return false;
            }
            ca.iter().zip(cb.iter()).all(|pair| match pair {
                (Child::Plain(x), Child::Plain(y)) => alpha(x, y, env),
                (Child::Bound(x), Child::Bound(y)) => {
                    if x.names.len() != y.names.len() {
                        return false;
                    }
                    let n = env.len();
                    env.extend(x.names.iter().cloned().zip(y.names.iter().cloned()));
                    let r = alpha(&x.body, &y.body, env);
                    env.truncate(n);
                    r
                }
                _ => false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_avoids_capture() {
        // (λy. x y)[y/x] = λy'. y y'
        let e = Expr::lam("y", Expr::app(Expr::var("x"), Expr::var("y")));
        let r = e.subst("x", &Expr::var("y"));
        let expected = Expr::lam("z", Expr::app(Expr::var("y"), Expr::var("z")));
        assert!(r.alpha_eq(&expected));
        assert!(!r.alpha_eq(&Expr::lam("y", Expr::app(Expr::var("y"), Expr::var("y")))));
    }

    #[test]
    fn simultaneous_substitution() {
        let e = Expr::pair(Expr::var("a"), Expr::var("b"));
        let r = e.subst_many(&[("a".into(), Expr::var("b")), ("b".into(), Expr::var("a"))]);
        assert_eq!(r, Expr::pair(Expr::var("b"), Expr::var("a")));
    }

    #[test]
    fn alpha_respects_binding_structure() {
        let l = Expr::pi("x", Expr::Nat, Expr::id(Expr::Nat, Expr::var("x"), Expr::Zero));
        let r = Expr::pi("y", Expr::Nat, Expr::id(Expr::Nat, Expr::var("y"), Expr::Zero));
        assert!(l.alpha_eq(&r));
        assert_eq!(l.canonical(), r.canonical());
        let open = Expr::pi("y", Expr::Nat, Expr::id(Expr::Nat, Expr::var("x"), Expr::Zero));
        assert!(!l.alpha_eq(&open));
    }

    #[test]
    fn arrow_names_avoid_codomain() {
        let cod = Expr::id(Expr::Nat, Expr::var("_"), Expr::Zero);
        let Expr::Pi(_, bb) = Expr::arrow(Expr::Nat, cod) else { panic!() };
        assert_ne!(bb.names[0], "_");
    }
}
