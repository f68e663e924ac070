use predicheck_core::aca::{AcaFormula, AcaTerm};
use predicheck_core::derivations::derive_ca;
use predicheck_core::dtt::{desugar, Ctx, Expr, Kernel, Sort, SortMode};
use predicheck_core::hao::{def_equal, infer_type, normalize, step, FiniteType, Term, TypingContext};
use predicheck_core::logic::{check_proof, expand_exists_unique, AxiomProfile, Formula, LemmaEnv, Proof, ProofEnv};
use predicheck_core::sexp::read_all;
use predicheck_core::syntax::aca::print_aca_formula;
use predicheck_core::syntax::dtt::print_expr;
use predicheck_core::syntax::hao::{parse_theory, print_formula, print_term, TheoryDecl};
use predicheck_core::syntax::{alpha_eq, parse, Category, Payload};
use predicheck_core::translate::emtt::{arithmetic_context, expected_sort, formula_to_emtt, set_type, term_to_emtt};
use predicheck_core::translate::fol::is_relativized;
use predicheck_core::translate::{formula_to_fol, formula_to_mltt, formula_to_trunc, term_to_mltt, type_to_mltt};
use predicheck_core::DEFAULT_FUEL;
use proptest::prelude::*;

const BASICS: &str = include_str!("../../../corpus/basics.hao");

fn n() -> FiniteType {
    FiniteType::N
}

fn nn() -> FiniteType {
    FiniteType::n_to_n()
}

// generators ---------------------------------------------------------------

fn pool() -> Vec<FiniteType> {
    vec![n(), nn(), FiniteType::prod(n(), n())]
}

fn leaf(ty: &FiniteType) -> Term {
    match ty {
        FiniteType::N => Term::Zero,
        FiniteType::Arrow(a, b) => Term::ap(Term::K((**b).clone(), (**a).clone()), leaf(b)),
        FiniteType::Prod(a, b) => Term::apps(Term::Pair((**a).clone(), (**b).clone()), [leaf(a), leaf(b)]),
    }
}

/// Closed terms of `ty`, except for `v : N`.
fn term_of(ty: FiniteType, depth: u32) -> BoxedStrategy<Term> {
    let mut leaves = vec![Just(leaf(&ty)).boxed()];
    if ty == n() {
        leaves.push(Just(Term::var("v")).boxed());
        leaves.push((0u64..3).prop_map(Term::numeral).boxed());
    }
    if ty == nn() {
        leaves.push(Just(Term::Succ).boxed());
    }
    let base = proptest::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return base;
    }
    let d = depth - 1;
    let side = proptest::sample::select(pool());
    let t = ty.clone();
    let k = (term_of(ty.clone(), d), side.clone())
        .prop_flat_map(move |(a, s)| {
            let t = t.clone();
            term_of(s.clone(), 0).prop_map(move |b| Term::apps(Term::K(t.clone(), s.clone()), [a.clone(), b]))
        })
        .boxed();
    let t = ty.clone();
    let s = side
        .prop_flat_map(move |r| {
            let t = t.clone();
            let arr = FiniteType::arrow;
            (term_of(arr(r.clone(), arr(n(), t.clone())), d), term_of(arr(r.clone(), n()), d), term_of(r.clone(), d))
                .prop_map(move |(x, y, z)| Term::apps(Term::S(r.clone(), n(), t.clone()), [x, y, z]))
        })
        .boxed();
    let t = ty.clone();
    let rec = (
        term_of(ty.clone(), d),
        term_of(FiniteType::arrow(n(), FiniteType::arrow(ty.clone(), ty.clone())), d),
        term_of(n(), d),
    )
        .prop_map(move |(a, f, k)| Term::apps(Term::Rec(t.clone()), [a, f, k]))
        .boxed();
    let t = ty.clone();
    let proj =
        term_of(FiniteType::prod(ty.clone(), n()), d).prop_map(move |p| Term::ap(Term::Fst(t.clone(), n()), p)).boxed();
    let mut arms = vec![base.clone(), base, k, s, rec, proj];
    if ty == n() {
        arms.push(term_of(n(), d).prop_map(Term::succ).boxed());
    }
    proptest::strategy::Union::new(arms).boxed()
}

fn typed_term() -> impl Strategy<Value = (FiniteType, Term)> {
    proptest::sample::select(pool()).prop_flat_map(|ty| term_of(ty.clone(), 3).prop_map(move |t| (ty.clone(), t)))
}

fn term_ctx() -> TypingContext {
    TypingContext::from_entries([(String::from("v"), n())]).unwrap()
}

/// Number terms over the variables in `scope` and `g : N → N`.
fn small_term(scope: Vec<String>) -> BoxedStrategy<Term> {
    let var = proptest::sample::select(scope);
    prop_oneof![
        (0u64..3).prop_map(Term::numeral),
        var.clone().prop_map(|x| Term::var(&x)),
        var.clone().prop_map(|x| Term::succ(Term::var(&x))),
        var.prop_map(|x| Term::ap(Term::var("g"), Term::var(&x))),
    ]
    .boxed()
}

/// Formulas with free variables among `x`, `w` and `g`.
fn formula_in(scope: Vec<String>, depth: u32) -> BoxedStrategy<Formula> {
    let atom = (small_term(scope.clone()), small_term(scope.clone())).prop_map(|(a, b)| Formula::eq_n(a, b));
    let base = prop_oneof![4 => atom, 1 => Just(Formula::False)].boxed();
    if depth == 0 {
        return base;
    }
    let sub = || formula_in(scope.clone(), depth - 1);
    let bound = format!("b{}", scope.len());
    let mut inner = scope.clone();
    inner.push(bound.clone());
    let (b1, b2, b3) = (bound.clone(), bound.clone(), bound);
    prop_oneof![
        2 => base,
        1 => (sub(), sub()).prop_map(|(a, b)| Formula::and(a, b)),
        1 => (sub(), sub()).prop_map(|(a, b)| Formula::or(a, b)),
        1 => (sub(), sub()).prop_map(|(a, b)| Formula::imp(a, b)),
        1 => formula_in(inner.clone(), depth - 1).prop_map(move |f| Formula::forall(&b1, n(), f)),
        1 => formula_in(inner, depth - 1).prop_map(move |f| Formula::exists(&b2, n(), f)),
        1 => sub().prop_map(move |f| Formula::forall(&b3, nn(), f)),
    ]
    .boxed()
}

fn formula() -> BoxedStrategy<Formula> {
    formula_in(vec![String::from("x"), String::from("w")], 4)
}

fn formula_ctx() -> TypingContext {
    TypingContext::from_entries([(String::from("x"), n()), (String::from("w"), n()), (String::from("g"), nn())])
        .unwrap()
}

fn dtt_ctx() -> Ctx {
    Ctx::new().with_term("x", Expr::Nat).with_term("w", Expr::Nat).with_term("g", Expr::arrow(Expr::Nat, Expr::Nat))
}

fn aca_term(nums: Vec<String>) -> BoxedStrategy<AcaTerm> {
    let var = proptest::sample::select(nums);
    prop_oneof![
        (0u64..3).prop_map(AcaTerm::numeral),
        var.clone().prop_map(|x| AcaTerm::var(&x)),
        var.clone().prop_map(|x| AcaTerm::Succ(Box::new(AcaTerm::var(&x)))),
        (var.clone(), var).prop_map(|(a, b)| AcaTerm::Add(Box::new(AcaTerm::var(&a)), Box::new(AcaTerm::var(&b)))),
    ]
    .boxed()
}

/// ACA formulas over number variables `nums` and set variables `sets`.
fn aca_formula(nums: Vec<String>, sets: Vec<String>, depth: u32) -> BoxedStrategy<AcaFormula> {
    let set = proptest::sample::select(sets.clone());
    let base = prop_oneof![
        (aca_term(nums.clone()), aca_term(nums.clone())).prop_map(|(a, b)| AcaFormula::Eq(a, b)),
        (aca_term(nums.clone()), set).prop_map(|(t, x)| AcaFormula::In(t, x)),
    ]
    .boxed();
    if depth == 0 {
        return base;
    }
    let sub = || aca_formula(nums.clone(), sets.clone(), depth - 1);
    let nb = format!("m{}", nums.len());
    let sb = format!("S{}", sets.len());
    let (mut n2, mut s2) = (nums.clone(), sets.clone());
    n2.push(nb.clone());
    s2.push(sb.clone());
    let (nb2, sb2) = (nb.clone(), sb.clone());
    prop_oneof![
        2 => base,
        1 => (sub(), sub()).prop_map(|(a, b)| AcaFormula::and(a, b)),
        1 => (sub(), sub()).prop_map(|(a, b)| AcaFormula::or(a, b)),
        1 => (sub(), sub()).prop_map(|(a, b)| AcaFormula::imp(a, b)),
        1 => aca_formula(n2.clone(), sets.clone(), depth - 1).prop_map(move |f| AcaFormula::forall_n(&nb, f)),
        1 => aca_formula(n2, sets.clone(), depth - 1).prop_map(move |f| AcaFormula::exists_n(&nb2, f)),
        1 => aca_formula(nums.clone(), s2.clone(), depth - 1).prop_map(move |f| AcaFormula::forall_s(&sb, f)),
        1 => aca_formula(nums.clone(), s2, depth - 1).prop_map(move |f| AcaFormula::exists_s(&sb2, f)),
    ]
    .boxed()
}

fn aca() -> BoxedStrategy<AcaFormula> {
    aca_formula(vec![String::from("k")], vec![String::from("X")], 3)
}

fn aca_ctx(f: &AcaFormula) -> Ctx {
    let fv = f.free_vars();
    let mut ctx = arithmetic_context();
    for x in &fv.numbers {
        ctx = ctx.with_term(x, Expr::Nat);
    }
    for x in &fv.sets {
        ctx = ctx.with_term(x, set_type());
    }
    ctx
}

fn basics() -> Vec<(String, Formula, Proof)> {
    parse_theory(&read_all(BASICS).unwrap())
        .into_iter()
        .filter_map(|i| match i.decl {
            Ok(TheoryDecl::Lemma(n, f, p)) => Some((n, f, p)),
            _ => None,
        })
        .collect()
}

fn check_with(profile: AxiomProfile, hyps: &[(String, Formula)], f: &Formula, p: &Proof, lemmas: &LemmaEnv) -> bool {
    let env = ProofEnv { profile, lemmas, fuel: DEFAULT_FUEL };
    check_proof(&env, &TypingContext::new(), hyps, p, f).is_ok()
}

/// Checks every basics lemma in order under `profile`, passing extra hypotheses.
fn basics_check(profile: AxiomProfile, hyps: &[(String, Formula)], rename: bool) -> bool {
    let mut lemmas = LemmaEnv::new();
    for (name, f, p) in basics() {
        let goal = if rename { f.canonical() } else { f.clone() };
        if !check_with(profile, hyps, &goal, &p, &lemmas) {
            return false;
        }
        lemmas.insert(name, f);
    }
    true
}

fn profile() -> impl Strategy<Value = AxiomProfile> {
    any::<[bool; 5]>().prop_map(|[lem, ac, ac_bang, irc_nn, irc_all]| AxiomProfile {
        lem,
        ac,
        ac_bang,
        irc_nn,
        irc_all,
    })
}

fn node<'a>(p: &'a Proof, path: &[usize]) -> &'a Proof {
    path.iter().fold(p, |acc, i| acc.children()[*i])
}

// syntax -------------------------------------------------------------------

const CATEGORIES: [Category; 9] = [
    Category::Type,
    Category::Term,
    Category::Formula,
    Category::Proof,
    Category::Dtt,
    Category::Aca,
    Category::TheoryFile,
    Category::DttFile,
    Category::AcaFile,
];

proptest! {
    #[test]
    fn parser_is_total(text in "[()a-z0-9 =;!>*NX\\-\n]{0,48}") {
        for c in CATEGORIES {
            if let Err(e) = parse(&text, c) {
                prop_assert!(e.span.start <= e.span.end && e.span.end <= text.len(), "{:?} {:?}", c, e);
            }
        }
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let node = parse(&print_formula(&f), Category::Formula).unwrap();
        prop_assert!(alpha_eq(&node.payload, &Payload::Formula(f)));
    }

    #[test]
    fn terms_round_trip((_, t) in typed_term()) {
        let node = parse(&print_term(&t), Category::Term).unwrap();
        prop_assert_eq!(node.payload, Payload::Term(t));
    }

    #[test]
    fn dtt_round_trip(f in formula()) {
        for e in [formula_to_mltt(&f), formula_to_trunc(&f)] {
            let node = parse(&print_expr(&e), Category::Dtt).unwrap();
            prop_assert!(alpha_eq(&node.payload, &Payload::Dtt(e)));
        }
    }

    #[test]
    fn aca_round_trip(f in aca()) {
        let node = parse(&print_aca_formula(&f), Category::Aca).unwrap();
        prop_assert!(alpha_eq(&node.payload, &Payload::Aca(f)));
    }
}

// reduction ----------------------------------------------------------------

fn contractible(t: &Term) -> bool {
    let (head, args) = t.spine();
    let redex = match (head, args.as_slice()) {
        (Term::K(..), [_, _]) | (Term::S(..), [_, _, _]) => true,
        (Term::Rec(_), [_, _, Term::Zero]) => true,
        (Term::Rec(_), [_, _, Term::Ap(s, _)]) => **s == Term::Succ,
        (Term::Fst(..) | Term::Snd(..), [p]) => {
            let (h, a) = p.spine();
            matches!(h, Term::Pair(..)) && a.len() == 2
        }
        _ => false,
    };
    redex || matches!(t, Term::Ap(f, a) if contractible(f) || contractible(a))
}

proptest! {
    #[test]
    fn subject_reduction((ty, t) in typed_term()) {
        let ctx = term_ctx();
        prop_assert_eq!(infer_type(&ctx, &t), Ok(ty.clone()));
        let mut cur = t;
        while let Some(next) = step(&cur) {
            prop_assert_eq!(infer_type(&ctx, &next), Ok(ty.clone()));
            cur = next;
        }
    }

    #[test]
    fn normal_forms_have_no_redex((_, t) in typed_term()) {
        prop_assert_eq!(step(&t), step(&t));
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        prop_assert!(!contractible(&nf), "{}", print_term(&nf));
        prop_assert_eq!(step(&t).is_none(), !contractible(&t));
    }

    #[test]
    fn def_equal_is_an_equivalence((ty, t) in typed_term(), seed in term_of(n(), 2)) {
        prop_assert!(def_equal(&t, &t, DEFAULT_FUEL).unwrap());
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        let mid = step(&t).unwrap_or_else(|| t.clone());
        prop_assert!(def_equal(&t, &mid, DEFAULT_FUEL).unwrap());
        prop_assert!(def_equal(&mid, &t, DEFAULT_FUEL).unwrap());
        prop_assert!(def_equal(&mid, &nf, DEFAULT_FUEL).unwrap());
        prop_assert!(def_equal(&t, &nf, DEFAULT_FUEL).unwrap());
        // congruence under application
        if ty == nn() {
            let nf_seed = normalize(&seed, DEFAULT_FUEL).unwrap();
            prop_assert!(def_equal(&Term::ap(t.clone(), seed), &Term::ap(nf, nf_seed), DEFAULT_FUEL).unwrap());
        }
    }
}

// natural deduction --------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weakening(extra in proptest::collection::vec(formula_in(vec![String::from("c")], 2).prop_filter("closed", |f| !f.has_free("g")), 0..3)) {
        let closed: Vec<(String, Formula)> = extra
            .into_iter()
            .enumerate()
            .map(|(i, f)| (format!("extra{i}"), f.subst("c", &Term::Zero)))
            .collect();
        prop_assert!(basics_check(AxiomProfile::INTUITIONISTIC, &closed, false));
    }

    #[test]
    fn profiles_are_monotone(p in profile()) {
        prop_assert!(basics_check(p, &[], false));
        let inst = derive_ca(&Formula::eq_n(Term::var("x"), Term::Zero)).unwrap();
        let more = AxiomProfile { lem: true, irc_nn: true, ..p };
        prop_assert!(inst.check(more).is_ok());
    }

    #[test]
    fn refl_goals_up_to_reduction(t in term_of(n(), 3)) {
        let t = t.subst("v", &Term::numeral(2));
        let nf = normalize(&t, DEFAULT_FUEL).unwrap();
        let goal = Formula::eq_n(t.clone(), nf.clone());
        let lemmas = LemmaEnv::new();
        prop_assert!(check_with(AxiomProfile::INTUITIONISTIC, &[], &goal, &Proof::Refl(t), &lemmas));
        prop_assert!(check_with(AxiomProfile::INTUITIONISTIC, &[], &goal, &Proof::Refl(nf), &lemmas));
    }
}

#[test]
fn checking_ignores_binder_names() {
    assert!(basics_check(AxiomProfile::INTUITIONISTIC, &[], true));
}

// dependent types ----------------------------------------------------------

proptest! {
    #[test]
    fn mtt_acceptance_implies_mltt(f in formula()) {
        let e = formula_to_trunc(&f);
        let mtt = Kernel::new(SortMode::Mtt).classify(&dtt_ctx(), &e);
        prop_assert!(matches!(mtt, Ok(Sort::PropS | Sort::Prop)), "{:?} {}", mtt, print_expr(&e));
        prop_assert!(Kernel::new(SortMode::Mltt).classify(&dtt_ctx(), &e).is_ok());
    }

    #[test]
    fn desugaring_is_faithful(f in formula()) {
        let k = Kernel::new(SortMode::Mltt);
        let e = formula_to_trunc(&f);
        prop_assert_eq!(k.classify(&dtt_ctx(), &e).is_ok(), k.classify(&dtt_ctx(), &desugar(&e)).is_ok());
        // λh.h : A → A, through the P formers or after desugaring
        let id = Expr::lam("h", Expr::var("h"));
        let a = Expr::imp_p(e.clone(), e);
        prop_assert_eq!(k.check(&dtt_ctx(), &id, &a).is_ok(), k.check(&dtt_ctx(), &id, &desugar(&a)).is_ok());
    }

    #[test]
    fn small_propositions_pass_prop_gates(f in aca()) {
        let k = Kernel::new(SortMode::Emtt);
        let ctx = aca_ctx(&f);
        let e = formula_to_emtt(&f);
        if k.classify(&ctx, &e) == Ok(Sort::PropS) {
            prop_assert!(matches!(k.classify(&ctx, &Expr::exists_p("fresh", Expr::Nat, e.clone())), Ok(Sort::PropS | Sort::Prop)));
            let elim = Expr::lam("t", Expr::TruncElim {
                scrut: Box::new(Expr::var("t")),
                body: predicheck_core::dtt::Binder::one("z", Expr::var("z")),
            });
            let mtt = Kernel::new(SortMode::Mtt);
            prop_assert!(mtt.check(&ctx, &elim, &Expr::arrow(Expr::trunc(e.clone()), e.clone())).is_ok());
        }
    }

    #[test]
    fn truncation_introduces((ty, t) in typed_term()) {
        let ctx = Ctx::new().with_term("v", Expr::Nat);
        let k = Kernel::new(SortMode::Mtt);
        let a = type_to_mltt(&ty);
        prop_assert!(k.check(&ctx, &Expr::TruncIntro(Box::new(term_to_mltt(&t))), &Expr::trunc(a)).is_ok());
    }
}

// translations -------------------------------------------------------------

proptest! {
    #[test]
    fn translations_commute_with_substitution(f in formula(), t in small_term(vec![String::from("w")])) {
        let sub = f.subst("x", &t);
        let t_star = term_to_mltt(&t);
        prop_assert!(formula_to_mltt(&sub).alpha_eq(&formula_to_mltt(&f).subst("x", &t_star)));
        prop_assert!(formula_to_trunc(&sub).alpha_eq(&formula_to_trunc(&f).subst("x", &t_star)));
    }

    #[test]
    fn emtt_commutes_with_substitution(f in aca(), t in aca_term(vec![String::from("j")])) {
        let sub = f.subst("k", &t);
        prop_assert!(formula_to_emtt(&sub).alpha_eq(&formula_to_emtt(&f).subst("k", &term_to_emtt(&t))));
    }

    #[test]
    fn emtt_sorts_are_correct(f in aca()) {
        let s = Kernel::new(SortMode::Emtt).classify(&aca_ctx(&f), &formula_to_emtt(&f));
        prop_assert_eq!(s, Ok(expected_sort(&f)));
    }

    #[test]
    fn fol_is_relativized(f in formula()) {
        prop_assert!(is_relativized(&formula_to_fol(&f)));
    }
}

#[test]
fn well_formed_generators() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..64 {
        let f = formula().new_tree(&mut runner).unwrap().current();
        f.check_well_formed(&mut formula_ctx()).unwrap();
    }
}

// derivations --------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ca_is_schematic(f in formula_in(vec![String::from("x")], 5)) {
        prop_assume!(!f.has_free("g"));
        let inst = derive_ca(&f).unwrap();
        prop_assert!(inst.check(AxiomProfile::CLASSICAL_IRC).is_ok());
        let irc = inst.proof.find_paths(&|p| matches!(p, Proof::Irc { .. }));
        prop_assert_eq!(irc.len(), 1);
        // the iRC! premise is a closed theorem on its own
        let Proof::Irc { x, x_ty, y, y_ty, body, proof } = node(&inst.proof, &irc[0]) else { unreachable!() };
        let premise = Formula::forall(x, x_ty.clone(), expand_exists_unique(y, y_ty, body));
        prop_assert!(check_with(AxiomProfile::CLASSICAL_IRC, &[], &premise, proof, &LemmaEnv::new()));
    }
}
