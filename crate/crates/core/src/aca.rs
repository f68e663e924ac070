//! Second-order arithmetic: number terms, formulas over numbers and sets,
//! and the declarations of `.aca` files.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::names;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AcaTerm {
    Var(String),
    Zero,
    Succ(Box<AcaTerm>),
    Add(Box<AcaTerm>, Box<AcaTerm>),
    Mul(Box<AcaTerm>, Box<AcaTerm>),
}

impl AcaTerm {
    pub fn var(x: &str) -> AcaTerm {
        AcaTerm::Var(String::from(x))
    }

    pub fn numeral(n: u64) -> AcaTerm {
        (0..n).fold(AcaTerm::Zero, |t, _| AcaTerm::Succ(Box::new(t)))
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            AcaTerm::Zero => Some(0),
            AcaTerm::Succ(t) => t.as_numeral().map(|n| n + 1),
            _ => None,
        }
    }

    fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            AcaTerm::Var(x) => {
                out.insert(x.clone());
            }
            AcaTerm::Zero => {}
            AcaTerm::Succ(t) => t.vars(out),
            AcaTerm::Add(a, b) | AcaTerm::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn subst(&self, x: &str, by: &AcaTerm) -> AcaTerm {
        match self {
            AcaTerm::Var(y) if y == x => by.clone(),
            AcaTerm::Var(_) | AcaTerm::Zero => self.clone(),
            AcaTerm::Succ(t) => AcaTerm::Succ(Box::new(t.subst(x, by))),
            AcaTerm::Add(a, b) => AcaTerm::Add(Box::new(a.subst(x, by)), Box::new(b.subst(x, by))),
            AcaTerm::Mul(a, b) => AcaTerm::Mul(Box::new(a.subst(x, by)), Box::new(b.subst(x, by))),
        }
    }
}

/// Number quantifiers range over `N`, set quantifiers over subsets of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AcaFormula {
    False,
    Eq(AcaTerm, AcaTerm),
    /// `t ∈ X`
    In(AcaTerm, String),
    And(Box<AcaFormula>, Box<AcaFormula>),
    Or(Box<AcaFormula>, Box<AcaFormula>),
    Imp(Box<AcaFormula>, Box<AcaFormula>),
    ForallN(String, Box<AcaFormula>),
    ExistsN(String, Box<AcaFormula>),
    ForallS(String, Box<AcaFormula>),
    ExistsS(String, Box<AcaFormula>),
}

/// Free variables split by sort.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub numbers: BTreeSet<String>,
    pub sets: BTreeSet<String>,
}

fn bx(f: AcaFormula) -> Box<AcaFormula> {
    Box::new(f)
}

impl AcaFormula {
    pub fn and(a: AcaFormula, b: AcaFormula) -> AcaFormula {
        AcaFormula::And(bx(a), bx(b))
    }
    pub fn or(a: AcaFormula, b: AcaFormula) -> AcaFormula {
        AcaFormula::Or(bx(a), bx(b))
    }
    pub fn imp(a: AcaFormula, b: AcaFormula) -> AcaFormula {
        AcaFormula::Imp(bx(a), bx(b))
    }
    pub fn not(a: AcaFormula) -> AcaFormula {
        AcaFormula::imp(a, AcaFormula::False)
    }
    pub fn iff(a: AcaFormula, b: AcaFormula) -> AcaFormula {
        AcaFormula::and(AcaFormula::imp(a.clone(), b.clone()), AcaFormula::imp(b, a))
    }
    pub fn forall_n(x: &str, body: AcaFormula) -> AcaFormula {
        AcaFormula::ForallN(String::from(x), bx(body))
    }
    pub fn exists_n(x: &str, body: AcaFormula) -> AcaFormula {
        AcaFormula::ExistsN(String::from(x), bx(body))
    }
    pub fn forall_s(x: &str, body: AcaFormula) -> AcaFormula {
        AcaFormula::ForallS(String::from(x), bx(body))
    }
    pub fn exists_s(x: &str, body: AcaFormula) -> AcaFormula {
        AcaFormula::ExistsS(String::from(x), bx(body))
    }

    /// No set quantifiers; set parameters are allowed.
    pub fn is_arithmetical(&self) -> bool {
        match self {
            AcaFormula::False | AcaFormula::Eq(..) | AcaFormula::In(..) => true,
            AcaFormula::And(a, b) | AcaFormula::Or(a, b) | AcaFormula::Imp(a, b) => {
                a.is_arithmetical() && b.is_arithmetical()
            }
            AcaFormula::ForallN(_, b) | AcaFormula::ExistsN(_, b) => b.is_arithmetical(),
            AcaFormula::ForallS(..) | AcaFormula::ExistsS(..) => false,
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, bound: &mut Vec<String>, out: &mut FreeVars) {
        let term = |t: &AcaTerm, bound: &[String], out: &mut FreeVars| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.numbers.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            AcaFormula::False => {}
            AcaFormula::Eq(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            AcaFormula::In(t, x) => {
                term(t, bound, out);
                if !bound.contains(x) {
                    out.sets.insert(x.clone());
                }
            }
            AcaFormula::And(a, b) | AcaFormula::Or(a, b) | AcaFormula::Imp(a, b) => {
                a.collect(bound, out);
                b.collect(bound, out);
            }
            AcaFormula::ForallN(x, b)
            | AcaFormula::ExistsN(x, b)
            | AcaFormula::ForallS(x, b)
            | AcaFormula::ExistsS(x, b) => {
                bound.push(x.clone());
                b.collect(bound, out);
                bound.pop();
            }
        }
    }

    /// Every name occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            AcaFormula::False => {}
            AcaFormula::Eq(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            AcaFormula::In(t, x) => {
                t.vars(out);
                out.insert(x.clone());
            }
            AcaFormula::And(a, b) | AcaFormula::Or(a, b) | AcaFormula::Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            AcaFormula::ForallN(x, b)
            | AcaFormula::ExistsN(x, b)
            | AcaFormula::ForallS(x, b)
            | AcaFormula::ExistsS(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of a number term.
    pub fn subst(&self, x: &str, by: &AcaTerm) -> AcaFormula {
        match self {
            AcaFormula::False => AcaFormula::False,
            AcaFormula::Eq(a, b) => AcaFormula::Eq(a.subst(x, by), b.subst(x, by)),
            AcaFormula::In(t, s) => AcaFormula::In(t.subst(x, by), s.clone()),
            AcaFormula::And(a, b) => AcaFormula::and(a.subst(x, by), b.subst(x, by)),
            AcaFormula::Or(a, b) => AcaFormula::or(a.subst(x, by), b.subst(x, by)),
            AcaFormula::Imp(a, b) => AcaFormula::imp(a.subst(x, by), b.subst(x, by)),
            AcaFormula::ForallN(y, b)
            | AcaFormula::ExistsN(y, b)
            | AcaFormula::ForallS(y, b)
            | AcaFormula::ExistsS(y, b) => {
                if y == x {
                    return self.clone();
                }
                let mut by_vars = BTreeSet::new();
                by.vars(&mut by_vars);
                let (y2, body) = if by_vars.contains(y) {
                    let mut taken = by_vars;
                    b.all_names(&mut taken);
                    taken.insert(String::from(x));
                    let y2 = names::prime_away(y, |c| taken.contains(c));
                    let renamed = match self {
                        AcaFormula::ForallN(..) | AcaFormula::ExistsN(..) => b.subst(y, &AcaTerm::var(&y2)),
                        _ => b.rename_set(y, &y2),
                    };
                    (y2, renamed)
                } else {
                    (y.clone(), (**b).clone())
                };
                let body = bx(body.subst(x, by));
                match self {
                    AcaFormula::ForallN(..) => AcaFormula::ForallN(y2, body),
                    AcaFormula::ExistsN(..) => AcaFormula::ExistsN(y2, body),
                    AcaFormula::ForallS(..) => AcaFormula::ForallS(y2, body),
                    _ => AcaFormula::ExistsS(y2, body),
                }
            }
        }
    }

    fn rename_set(&self, from: &str, to: &str) -> AcaFormula {
        let r = |f: &AcaFormula| bx(f.rename_set(from, to));
        match self {
            AcaFormula::In(t, s) if s == from => AcaFormula::In(t.clone(), String::from(to)),
            AcaFormula::False | AcaFormula::Eq(..) | AcaFormula::In(..) => self.clone(),
            AcaFormula::And(a, b) => AcaFormula::And(r(a), r(b)),
            AcaFormula::Or(a, b) => AcaFormula::Or(r(a), r(b)),
            AcaFormula::Imp(a, b) => AcaFormula::Imp(r(a), r(b)),
            AcaFormula::ForallS(y, _) | AcaFormula::ExistsS(y, _) if y == from => self.clone(),
            AcaFormula::ForallN(y, b) => AcaFormula::ForallN(y.clone(), r(b)),
            AcaFormula::ExistsN(y, b) => AcaFormula::ExistsN(y.clone(), r(b)),
            AcaFormula::ForallS(y, b) => AcaFormula::ForallS(y.clone(), r(b)),
            AcaFormula::ExistsS(y, b) => AcaFormula::ExistsS(y.clone(), r(b)),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&AcaFormula> {
        match self {
            AcaFormula::False | AcaFormula::Eq(..) | AcaFormula::In(..) => Vec::new(),
            AcaFormula::And(a, b) | AcaFormula::Or(a, b) | AcaFormula::Imp(a, b) => alloc::vec![&**a, &**b],
            AcaFormula::ForallN(_, b)
            | AcaFormula::ExistsN(_, b)
            | AcaFormula::ForallS(_, b)
            | AcaFormula::ExistsS(_, b) => alloc::vec![&**b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcaDecl {
    /// A closed formula.
    Formula(String, AcaFormula),
    /// `∃X ∀var (var ∈ X ⟺ body)`, closed over the other free variables.
    Comprehension { name: String, var: String, body: AcaFormula },
    /// `body[0] ∧ ∀var (body ⊃ body[var+1]) ⊃ ∀var body`, closed over the
    /// other free variables.
    Induction { name: String, var: String, body: AcaFormula },
}

impl AcaDecl {
    pub fn name(&self) -> &str {
        match self {
            AcaDecl::Formula(n, _) | AcaDecl::Comprehension { name: n, .. } | AcaDecl::Induction { name: n, .. } => n,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AcaDecl::Formula(..) => "formula",
            AcaDecl::Comprehension { .. } => "comprehension",
            AcaDecl::Induction { .. } => "induction",
        }
    }

    /// Parameters of a schema instance: free numbers, then free sets, each
    /// sorted by name.
    pub fn parameters(&self) -> FreeVars {
        match self {
            AcaDecl::Formula(_, f) => f.free_vars(),
            AcaDecl::Comprehension { var, body, .. } | AcaDecl::Induction { var, body, .. } => {
                let mut fv = body.free_vars();
                fv.numbers.remove(var);
                fv
            }
        }
    }

    /// The matrix of a schema instance, before closing over parameters.
    pub fn matrix(&self) -> AcaFormula {
        match self {
            AcaDecl::Formula(_, f) => f.clone(),
            AcaDecl::Comprehension { var, body, .. } => {
                let mut taken = BTreeSet::new();
                body.all_names(&mut taken);
                let x = names::fresh("X", |c| taken.contains(c));
                AcaFormula::exists_s(
                    &x,
                    AcaFormula::forall_n(
                        var,
                        AcaFormula::iff(AcaFormula::In(AcaTerm::var(var), x.clone()), body.clone()),
                    ),
                )
            }
            AcaDecl::Induction { var, body, .. } => {
                let step = body.subst(var, &AcaTerm::Succ(Box::new(AcaTerm::var(var))));
                AcaFormula::imp(
                    AcaFormula::and(
                        body.subst(var, &AcaTerm::Zero),
                        AcaFormula::forall_n(var, AcaFormula::imp(body.clone(), step)),
                    ),
                    AcaFormula::forall_n(var, body.clone()),
                )
            }
        }
    }

    /// The closed statement.
    pub fn statement(&self) -> AcaFormula {
        let ps = self.parameters();
        let m = self.matrix();
        let m = ps.sets.iter().rev().fold(m, |acc, s| AcaFormula::forall_s(s, acc));
        ps.numbers.iter().rev().fold(m, |acc, n| AcaFormula::forall_n(n, acc))
    }
}
