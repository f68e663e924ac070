//! Untyped β-reduction and conversion.

use alloc::boxed::Box;
use core::cell::Cell;

use super::expr::{Binder, Expr};
use super::{DttError, DttResult};

fn spend(fuel: &mut u64) -> DttResult<()> {
    if *fuel == 0 {
        return Err(DttError::Fuel);
    }
    *fuel -= 1;
    Ok(())
}

/// Weak head normal form.
pub fn whnf(e: &Expr, fuel: &mut u64) -> DttResult<Expr> {
    let mut cur = e.clone();
    loop {
        let next = match &cur {
            Expr::Ann(e, _) => (**e).clone(),
            Expr::Let(_, v, body) => {
                spend(fuel)?;
                body.instantiate(&[(**v).clone()])
            }
            Expr::App(f, a) => match whnf(f, fuel)? {
                Expr::Lam(bb) | Expr::PropLam(bb) => {
                    spend(fuel)?;
                    bb.instantiate(&[(**a).clone()])
                }
                f => return Ok(Expr::App(Box::new(f), a.clone())),
            },
            Expr::Fst(p) | Expr::Snd(p) => {
                let first = matches!(cur, Expr::Fst(_));
                match whnf(p, fuel)? {
                    Expr::Pair(l, r) | Expr::ExIntro(l, r) => {
                        spend(fuel)?;
                        if first {
                            *l
                        } else {
                            *r
                        }
                    }
                    p => return Ok(if first { Expr::fst(p) } else { Expr::snd(p) }),
                }
            }
            Expr::Case { scrut, motive, left, right } => match whnf(scrut, fuel)? {
                Expr::Inl(a) => {
                    spend(fuel)?;
                    left.instantiate(&[*a])
                }
                Expr::Inr(a) => {
                    spend(fuel)?;
                    right.instantiate(&[*a])
                }
                s => {
                    return Ok(Expr::Case {
                        scrut: Box::new(s),
                        motive: motive.clone(),
                        left: left.clone(),
                        right: right.clone(),
                    })
                }
            },
            Expr::NatRec { motive, base, step, target } => match whnf(target, fuel)? {
                Expr::Zero => {
                    spend(fuel)?;
                    (**base).clone()
                }
                Expr::Succ(n) => {
                    spend(fuel)?;
                    let rec = Expr::NatRec {
                        motive: motive.clone(),
                        base: base.clone(),
                        step: step.clone(),
                        target: n.clone(),
                    };
                    step.instantiate(&[*n, rec])
                }
                t => {
                    return Ok(Expr::NatRec {
                        motive: motive.clone(),
                        base: base.clone(),
                        step: step.clone(),
                        target: Box::new(t),
                    })
                }
            },
            Expr::IdPeel { motive, eq, refl } => match whnf(eq, fuel)? {
                Expr::Refl(a) => {
                    spend(fuel)?;
                    refl.instantiate(&[*a])
                }
                q => return Ok(Expr::IdPeel { motive: motive.clone(), eq: Box::new(q), refl: refl.clone() }),
            },
            Expr::ExElim { scrut, body } => match whnf(scrut, fuel)? {
                Expr::ExIntro(w, p) | Expr::Pair(w, p) => {
                    spend(fuel)?;
                    body.instantiate(&[*w, *p])
                }
                s => return Ok(Expr::ExElim { scrut: Box::new(s), body: body.clone() }),
            },
            Expr::TruncElim { scrut, body } => match whnf(scrut, fuel)? {
                Expr::TruncIntro(a) => {
                    spend(fuel)?;
                    body.instantiate(&[*a])
                }
                s => return Ok(Expr::TruncElim { scrut: Box::new(s), body: body.clone() }),
            },
            _ => return Ok(cur),
        };
        cur = next;
    }
}

/// Full normal form: head reduction, then every child.
pub fn normalize(e: &Expr, fuel: &mut u64) -> DttResult<Expr> {
    let cell = Cell::new(*fuel);
    let r = norm(e, &cell);
    *fuel = cell.get();
    r
}

fn norm(e: &Expr, fuel: &Cell<u64>) -> DttResult<Expr> {
    let mut f = fuel.get();
    let head = whnf(e, &mut f);
    fuel.set(f);
    let head = head?;
    let err: Cell<Option<DttError>> = Cell::new(None);
    let run = |c: &Expr| -> Expr {
        let prev = err.take();
        if prev.is_some() {
            err.set(prev);
            return c.clone();
        }
        match norm(c, fuel) {
            Ok(n) => n,
            Err(e) => {
                err.set(Some(e));
                c.clone()
            }
        }
    };
    let out =
        head.map_children(&mut |c| run(c), &mut |bb| Binder { names: bb.names.clone(), body: Box::new(run(&bb.body)) });
    match err.take() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Erases the contents of truncation intros: all of them are equal.
fn squash(e: &Expr) -> Expr {
    match e {
        Expr::TruncIntro(_) => Expr::TruncIntro(Box::new(Expr::Star)),
        _ => {
            e.map_children(&mut squash, &mut |bb| Binder { names: bb.names.clone(), body: Box::new(squash(&bb.body)) })
        }
    }
}

/// β-convertibility, with every element of a truncation identified.
pub fn convertible(a: &Expr, b: &Expr, fuel: u64) -> DttResult<bool> {
    if a.alpha_eq(b) {
        return Ok(true);
    }
    let mut f = fuel;
    let na = squash(&normalize(a, &mut f)?);
    let nb = squash(&normalize(b, &mut f)?);
    Ok(na.alpha_eq(&nb))
}
