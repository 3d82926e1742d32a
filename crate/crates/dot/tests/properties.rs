//! Property tests over randomly generated syntax: alpha-equivalence laws,
//! print-then-parse stability, inertness reporting, search determinism,
//! validated arities, and evaluation trace consistency.

use proptest::prelude::*;

use dot::eval::{run, step, StepResult};
use dot::gen::Gen;
use dot::inert::is_inert_type;
use dot::proof::{search_typ, SearchConfig};
use dot::rules::{lookup, validate, Derivation};
use dot::surface::{parse_term_with, parse_type_with, print_term, print_type, Resolver};
use dot::syntax::{Syntax, VarName};

fn pool() -> Vec<VarName> {
    ["qa", "qb", "qc"].iter().map(|n| VarName::fresh(*n)).collect()
}

fn cfg() -> SearchConfig {
    SearchConfig {
        max_depth: 6,
        node_budget: 2_000,
    }
}

// equality up to the uids drawn for fresh binders along the way
fn alpha_same(a: &Derivation, b: &Derivation) -> bool {
    a.rule == b.rule
        && a.conclusion.alpha_eq(&b.conclusion)
        && a.premises.len() == b.premises.len()
        && a.premises.iter().zip(&b.premises).all(|(x, y)| alpha_same(x, y))
}

fn arities_match(d: &Derivation) {
    let schema = lookup(&d.rule).unwrap_or_else(|| panic!("unknown rule {}", d.rule));
    assert_eq!(d.premises.len(), schema.arity(), "arity of {}", d.rule);
    for p in &d.premises {
        arities_match(p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fresh_variables_are_distinct(name in "[a-z]{1,6}") {
        let a = VarName::fresh(&name);
        let b = VarName::fresh(&name);
        prop_assert_ne!(&a, &b, "equality is by uid, not name");
        prop_assert_ne!(&a.refreshed(), &a);
    }

    #[test]
    fn alpha_equivalence_is_reflexive_and_survives_renaming(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let mut vars = pool();
        let ty = g.ty(&mut vars, 3);
        prop_assert!(ty.alpha_eq(&ty));
        let t = g.term(&mut vars, 3);
        prop_assert!(t.alpha_eq(&t));
        // renaming a binder does not change the term up to alpha
        let x = VarName::fresh("rn");
        let w = x.refreshed();
        let lam = dot::syntax::Term::lambda(x.clone(), ty.clone(), t.clone());
        let lam2 = dot::syntax::Term::lambda(w.clone(), ty, t.subst_var(&x, &w));
        prop_assert!(lam.alpha_eq(&lam2));
    }

    #[test]
    fn printed_syntax_parses_back(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let shared = pool();
        let mut vars = shared.clone();
        let ty = g.ty(&mut vars, 3);
        let back = parse_type_with(&print_type(&ty), &mut Resolver::seeded(shared.clone()))
            .expect("printed type parses");
        prop_assert!(ty.alpha_eq(&back));
        let t = g.term(&mut vars, 3);
        let back = parse_term_with(&print_term(&t), &mut Resolver::seeded(shared))
            .expect("printed term parses");
        prop_assert!(t.alpha_eq(&back));
    }

    #[test]
    fn non_inert_verdicts_carry_a_violation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let ty = g.ty(&mut pool(), 3);
        for strict in [false, true] {
            let report = is_inert_type(&ty, strict);
            prop_assert_eq!(report.inert, report.first_violation.is_none());
        }
        // generated inert bindings really are inert
        let report = is_inert_type(&g.inert_binding(), true);
        prop_assert!(report.inert);
    }

    #[test]
    fn evaluation_traces_are_step_consistent(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let t = g.term(&mut pool(), 3);
        let trace = run(&t, 50);
        prop_assert_eq!(trace.rules.len() + 1, trace.steps.len());
        for (i, pair) in trace.steps.windows(2).enumerate() {
            prop_assert_eq!(
                step(&pair[0]),
                StepResult::Stepped(trace.rules[i], pair[1].clone())
            );
        }
    }
}

proptest! {
    // searches are costlier, so fewer cases
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_is_deterministic_and_validates_with_matching_arities(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let cfg = cfg();
        let ctx = g.inert_context(2);
        if let Some(d) = g.derivable_typing(&ctx, &cfg) {
            prop_assert!(validate(&d).is_ok());
            arities_match(&d);
            let (gctx, subject, ty) = match &d.conclusion {
                dot::rules::Judgment::Typ { ctx, subject, ty, .. } => (ctx, subject, ty),
                other => panic!("typing conclusion expected, got {other:?}"),
            };
            let again = search_typ(gctx, subject, Some(ty), &cfg)
                .expect("the same query succeeds again");
            prop_assert_eq!(&again.conclusion, &d.conclusion);
            prop_assert!(alpha_same(&again, &d), "repeat search drifted");
            let third = search_typ(gctx, subject, Some(ty), &cfg)
                .expect("the same query succeeds a third time");
            prop_assert!(alpha_same(&third, &again), "third search drifted");
        }
    }
}
