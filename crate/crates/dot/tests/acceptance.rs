//! End-to-end acceptance checks: rule coverage with mutation rejection,
//! the bad-bounds counterexample, transformer replays over fuzzed
//! derivations, canonical-forms decompositions, inertness, the soundness
//! harness over the program corpus, evaluator laws, and printer
//! round-trips. Each check reports a single pass line with its runtime.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dot::eval::{is_answer, run, step, Outcome, StepResult};
use dot::gen::Gen;
use dot::inert::{is_inert_type, record_members};
use dot::proof::{
    canon_fun_val, canon_fun_var, canon_obj_val, canon_obj_var, general_to_tight, search_typ,
    sel_premise, tight_to_invertible, value_precise, SearchConfig,
};
use dot::rules::{
    precise_types_of_var, rule_registry, validate, Derivation, Judgment, SubSystem, TypSystem,
};
use dot::surface::{
    derivation_from_json, parse_term_with, parse_type_with, print_term, print_type, Resolver,
};
use dot::syntax::{Context, Syntax, Term, Type, TypeLabel, Value, VarName};

fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

fn load_deriv(path: &Path) -> Derivation {
    derivation_from_json(&read(path))
        .unwrap_or_else(|e| panic!("{} does not decode: {e:?}", path.display()))
}

fn sorted_files(dir: &Path, suffix: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("cannot list {}: {e}", dir.display()))
        .map(|e| e.expect("directory entry is readable").path())
        .filter(|p| p.to_string_lossy().ends_with(suffix))
        .collect();
    out.sort();
    out
}

fn all_corpus_derivations() -> Vec<(String, Derivation)> {
    let root = corpus_root();
    let mut docs = vec![
        ("bad_bounds".to_string(), load_deriv(&root.join("bad_bounds.deriv.json"))),
        ("lattice".to_string(), load_deriv(&root.join("lattice.deriv.json"))),
    ];
    for dir in ["programs", "coverage"] {
        for p in sorted_files(&root.join(dir), ".deriv.json") {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            docs.push((name, load_deriv(&p)));
        }
    }
    docs
}

fn typ_conclusion(d: &Derivation) -> (&Context, &Term, &Type) {
    match &d.conclusion {
        Judgment::Typ { ctx, subject, ty, .. } => (ctx, subject, ty),
        other => panic!("expected a typing conclusion, got {other:?}"),
    }
}

fn find_rule(d: &Derivation, rule: &str, path: &mut Vec<usize>) -> bool {
    if d.rule == rule {
        return true;
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        if find_rule(p, rule, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn within(start: Instant, budget: Duration, what: &str) -> Duration {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{what} took {elapsed:?}, budget {budget:?}"
    );
    elapsed
}

fn rule_coverage_and_mutation_rejection() {
    let start = Instant::now();
    let names: Vec<&str> = rule_registry().iter().map(|s| s.name).collect();
    assert_eq!(names.len(), 66, "registry holds 66 rule schemas");
    let count = |kind: dot::rules::JudgmentKind| {
        rule_registry().iter().filter(|s| s.system == kind).count()
    };
    use dot::rules::JudgmentKind as K;
    assert_eq!(count(K::Typ), 10);
    assert_eq!(count(K::Subtyp), 12);
    assert_eq!(count(K::Defs), 3);
    assert_eq!(count(K::TypTight), 10);
    assert_eq!(count(K::SubtypTight), 12);
    assert_eq!(count(K::TypPrecise), 6);
    assert_eq!(count(K::TypInvertible), 13);

    let docs = all_corpus_derivations();
    for (name, d) in &docs {
        validate(d).unwrap_or_else(|e| panic!("corpus derivation {name} invalid: {e:?}"));
    }

    // the entangled-bounds lambda parses, and its derivation chains the
    // two member selections through the middle one
    let lattice_src = read(&corpus_root().join("lattice.dot"));
    let lattice = parse_term_with(lattice_src.trim(), &mut Resolver::new())
        .expect("entangled-bounds lambda parses");
    assert!(matches!(lattice, Term::Val(_)));
    let chain = &docs.iter().find(|(n, _)| n == "lattice").expect("chain derivation present").1;
    match &chain.conclusion {
        Judgment::Subtyp { lhs, rhs, .. } => {
            assert!(matches!(lhs, Type::Sel(_, _)) && matches!(rhs, Type::Sel(_, _)));
        }
        other => panic!("expected a subtyping conclusion, got {other:?}"),
    }
    assert!(chain.rule_names().contains(&"Trans"));

    for rule in &names {
        let mut hit = None;
        for (name, d) in &docs {
            let mut path = Vec::new();
            if find_rule(d, rule, &mut path) {
                hit = Some((name, d, path));
                break;
            }
        }
        let (name, d, path) = hit.unwrap_or_else(|| panic!("no corpus derivation uses {rule}"));
        // corrupt the conclusion at the node using the rule: every schema
        // rejects a typing of an unbound variable at a dangling selection
        let mut mutated = d.clone();
        let node = mutated.node_at_mut(&path).expect("path addresses a node");
        node.conclusion = Judgment::typ(
            TypSystem::General,
            Context::empty(),
            Term::Var(VarName::fresh("mutant")),
            Type::Sel(VarName::fresh("mutant"), TypeLabel("Z".to_string())),
        );
        assert!(
            validate(&mutated).is_err(),
            "mutation of {rule} in {name} was not rejected"
        );
    }
    let elapsed = within(start, Duration::from_secs(10), "rule coverage");
    println!("PASS rule coverage ({elapsed:?}): 66 schemas, each validated and mutation-rejected");
}

fn bad_bounds_counterexample() {
    let start = Instant::now();
    let root = corpus_root();
    let src = read(&root.join("bad_bounds.dot"));
    let term = parse_term_with(src.trim(), &mut Resolver::new()).expect("counterexample parses");
    let d = load_deriv(&root.join("bad_bounds.deriv.json"));
    validate(&d).expect("counterexample derivation validates");
    let (ctx, subject, _) = typ_conclusion(&d);
    assert!(ctx.is_empty() && subject.alpha_eq(&term));
    for rule in ["Sub", "<:-Sel", "Sel-<:", "Trans", "All-I", "{}-I", "Def-Trm", "Let"] {
        assert!(d.rule_names().contains(&rule), "derivation misses {rule}");
    }

    // the body is closed, untypable on its own, and stuck at the
    // self-application
    let body = match &term {
        Term::Val(v) => match v.as_ref() {
            Value::Lambda(_, _, b) => b.as_ref().clone(),
            _ => panic!("counterexample is a lambda"),
        },
        _ => panic!("counterexample is a value"),
    };
    assert!(body.free_vars().is_empty());
    let trace = run(&body, 1000);
    assert!(
        matches!(trace.outcome, Outcome::Stuck(_, _)),
        "body must get stuck, got {:?}",
        trace.outcome
    );
    let cfg = SearchConfig::default();
    assert!(
        search_typ(&Context::empty(), &body, None, &cfg).is_none(),
        "the body must not type in the empty (inert) context"
    );

    // the self-application types only under the bad bound
    let mut r = Resolver::new();
    let inert_ctx = dot::surface::parse_context_with("y: mu(y: {a: Top})", &mut r)
        .expect("inert context parses");
    let app = parse_term_with("y y", &mut r).expect("self-application parses");
    assert!(
        search_typ(&inert_ctx, &app, None, &cfg).is_none(),
        "the self-application must not type in the inert context"
    );
    let mut r2 = Resolver::new();
    let bad_ctx = dot::surface::parse_context_with(
        "x: {A: {a: Top} .. all(z: Top) Top}; y: mu(y: {a: Top})",
        &mut r2,
    )
    .expect("bad-bounds context parses");
    let app2 = parse_term_with("y y", &mut r2).expect("self-application parses");
    let found = search_typ(&bad_ctx, &app2, None, &cfg)
        .expect("the self-application types under the bad bound");
    for rule in ["Sub", "<:-Sel", "Sel-<:", "Trans"] {
        assert!(found.rule_names().contains(&rule), "chain misses {rule}");
    }
    validate(&found).expect("found derivation validates");
    let elapsed = within(start, Duration::from_secs(30), "bad bounds");
    println!("PASS bad bounds ({elapsed:?}): derivation checks, body stuck, chain found only under the bad bound");
}

// a shallower, tighter-budgeted search keeps fuzzing within the runtime
// budgets; generated typings are shallow by construction
fn fuzz_cfg() -> SearchConfig {
    SearchConfig {
        max_depth: 6,
        node_budget: 2_000,
    }
}

fn fuzzed_typings(seed: u64, want: usize, keep: impl Fn(&Term) -> bool) -> Vec<Derivation> {
    let mut g = Gen::new(seed);
    let cfg = fuzz_cfg();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < want {
        attempts += 1;
        assert!(attempts < want * 20, "generator starves at {} typings", out.len());
        let ctx = g.inert_context(3);
        if let Some(d) = g.derivable_typing(&ctx, &cfg) {
            let (_, subject, _) = typ_conclusion(&d);
            if keep(subject) {
                out.push(d);
            }
        }
    }
    out
}

fn tightening_replays_fuzzed_derivations() {
    let start = Instant::now();
    let docs = fuzzed_typings(11, 500, |_| true);
    for d in &docs {
        validate(d).expect("fuzzed derivation validates");
        let t = general_to_tight(d).expect("tightening succeeds in an inert context");
        validate(&t).expect("tight replay validates");
        let (gc, gs, gt) = typ_conclusion(d);
        let (tc, ts, tt) = typ_conclusion(&t);
        assert!(gc.alpha_eq(tc));
        assert!((gs.clone(), gt.clone()).alpha_eq(&(ts.clone(), tt.clone())));
    }
    let elapsed = within(start, Duration::from_secs(60), "tightening");
    println!("PASS tightening ({elapsed:?}): 500 fuzzed derivations replay tightly, conclusions preserved");
}

fn invertible_replays_and_selection_premises() {
    let start = Instant::now();
    let docs = fuzzed_typings(13, 500, |s| matches!(s, Term::Var(_) | Term::Val(_)));
    for d in &docs {
        let t = general_to_tight(d).expect("tightening succeeds");
        let inv = tight_to_invertible(&t).expect("invertible replay succeeds");
        validate(&inv).expect("invertible replay validates");
        let (gc, gs, gt) = typ_conclusion(d);
        let (ic, is, it) = typ_conclusion(&inv);
        assert!(gc.alpha_eq(ic));
        assert!((gs.clone(), gt.clone()).alpha_eq(&(is.clone(), it.clone())));
    }

    // tight typings at type declarations split into a precise declaration
    // with a bound-widening leg on each side
    let mut g = Gen::new(17);
    let cfg = fuzz_cfg();
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 3000, "generator starves at {done} selection premises");
        let ctx = g.inert_context(2);
        let (x, _) = ctx.bindings()[0].clone();
        let closure = precise_types_of_var(&ctx, &x);
        let Some(entry) = closure.iter().find(|e| matches!(e.ty, Type::TypDec(_, _, _)))
        else {
            continue;
        };
        let target = g.widen(&entry.ty);
        if !matches!(target, Type::TypDec(_, _, _)) {
            continue;
        }
        let Some(d) = search_typ(&ctx, &Term::Var(x), Some(&target), &cfg) else {
            continue;
        };
        let t = general_to_tight(&d).expect("tightening succeeds");
        let (prec, leg_lo, leg_hi) = sel_premise(&t).expect("selection premise splits");
        for part in [&prec, &leg_lo, &leg_hi] {
            validate(part).expect("selection premise part validates");
        }
        done += 1;
    }
    let elapsed = within(start, Duration::from_secs(60), "invertible replays");
    println!("PASS invertible ({elapsed:?}): 500 replays and 100 selection premises check");
}

fn canonical_forms_decompose() {
    let start = Instant::now();
    let cfg = fuzz_cfg();

    // variables at function types
    let mut g = Gen::new(23);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 3000, "function-variable cases starve at {done}");
        let ty = g.inert_binding();
        if !matches!(ty, Type::All(_, _, _)) {
            continue;
        }
        let target = g.widen(&ty);
        if !matches!(target, Type::All(_, _, _)) {
            continue;
        }
        let x = VarName::fresh("v0");
        let mut ctx = Context::empty();
        ctx.push(x.clone(), ty).expect("fresh binder");
        let Some(d) = search_typ(&ctx, &Term::Var(x), Some(&target), &cfg) else {
            continue;
        };
        let cf = canon_fun_var(&d).expect("function variable decomposes");
        for part in [&cf.precise, &cf.dom_sub, &cf.cod_sub] {
            validate(part).expect("decomposition part validates");
        }
        done += 1;
    }

    // variables at field types
    done = 0;
    attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 3000, "field-variable cases starve at {done}");
        let ty = g.inert_binding();
        if !matches!(ty, Type::Rec(_, _)) {
            continue;
        }
        let x = VarName::fresh("v0");
        let mut ctx = Context::empty();
        ctx.push(x.clone(), ty).expect("fresh binder");
        let closure = precise_types_of_var(&ctx, &x);
        let Some(entry) = closure.iter().find(|e| matches!(e.ty, Type::Fld(_, _))) else {
            continue;
        };
        let target = g.widen(&entry.ty);
        if !matches!(target, Type::Fld(_, _)) {
            continue;
        }
        let Some(d) = search_typ(&ctx, &Term::Var(x), Some(&target), &cfg) else {
            continue;
        };
        let co = canon_obj_var(&d).expect("field variable decomposes");
        for part in [&co.precise, &co.sub] {
            validate(part).expect("decomposition part validates");
        }
        done += 1;
    }

    // lambdas at their function types
    done = 0;
    attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 5000, "lambda cases starve at {done}");
        let v = g.wf_value(1);
        if !matches!(v, Value::Lambda(_, _, _)) {
            continue;
        }
        let Some(d) = search_typ(&Context::empty(), &Term::val(v), None, &cfg) else {
            continue;
        };
        let cv = canon_fun_val(&d).expect("lambda decomposes");
        for part in [&cv.dom_sub, &cv.body_typing] {
            validate(part).expect("decomposition part validates");
        }
        done += 1;
    }

    // objects at their recursive types, one field each
    done = 0;
    attempts = 0;
    while done < 100 {
        attempts += 1;
        assert!(attempts < 5000, "object cases starve at {done}");
        let v = g.wf_value(1);
        let Value::Nu(_, record, _) = &v else { continue };
        let Some(label) = record_members(record).and_then(|ms| {
            ms.iter().find_map(|m| match m {
                Type::Fld(a, _) => Some(a.clone()),
                _ => None,
            })
        }) else {
            continue;
        };
        let Some(d) = search_typ(&Context::empty(), &Term::val(v.clone()), None, &cfg) else {
            continue;
        };
        let ov = canon_obj_val(&d, &label).expect("object decomposes");
        validate(&ov.field_typing).expect("field typing validates");
        done += 1;
    }
    let elapsed = within(start, Duration::from_secs(120), "canonical forms");
    println!("PASS canonical forms ({elapsed:?}): 100 decompositions in each of the four shapes");
}

fn inertness_properties() {
    let start = Instant::now();

    // the precise type of every typable generated value is inert
    let mut g = Gen::new(29);
    let cfg = fuzz_cfg();
    let mut done = 0;
    let mut attempts = 0;
    while done < 1000 {
        attempts += 1;
        assert!(attempts < 10_000, "value generator starves at {done}");
        let v = g.wf_value(1);
        let Some(d) = search_typ(&Context::empty(), &Term::val(v), None, &cfg) else {
            continue;
        };
        let (prec, _) = value_precise(&d).expect("value typing peels to an introduction");
        let (_, _, ty) = typ_conclusion(&prec);
        let report = is_inert_type(ty, true);
        assert!(report.inert, "precise value type not inert: {ty:?}");
        done += 1;
    }

    // the recursive types with loose or entangled bounds are rejected
    for path in sorted_files(&corpus_root().join("inert_vectors"), ".dot") {
        let src = read(&path);
        let ty = parse_type_with(src.trim(), &mut Resolver::new()).expect("vector parses");
        let report = is_inert_type(&ty, true);
        assert!(!report.inert, "{} must not be inert", path.display());
        assert!(report.first_violation.is_some());
    }

    // runtime is linear in the record width: doubling the member count
    // roughly doubles the check time
    let ratio = std::thread::Builder::new()
        .stack_size(64 * 1024 * 1024)
        .spawn(|| {
            let mut g = Gen::new(31);
            let s = VarName::fresh("s");
            let small = Type::rec(s.clone(), g.inert_record(&s, 20_000));
            let big = Type::rec(s.clone(), g.inert_record(&s, 40_000));
            let time = |ty: &Type| {
                let mut best = Duration::MAX;
                for _ in 0..7 {
                    let t0 = Instant::now();
                    assert!(is_inert_type(ty, true).inert);
                    best = best.min(t0.elapsed());
                }
                best
            };
            time(&big).as_secs_f64() / time(&small).as_secs_f64()
        })
        .expect("timing thread spawns")
        .join()
        .expect("timing thread finishes");
    assert!(
        (1.5..=2.5).contains(&ratio),
        "doubling ratio {ratio:.2} outside 2.0 +/- 0.5"
    );
    let elapsed = within(start, Duration::from_secs(120), "inertness");
    println!("PASS inertness ({elapsed:?}): 1000 precise value types inert, vectors rejected, ratio {ratio:.2}");
}

fn soundness_over_program_corpus() {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let dir = corpus_root().join("programs");
    let programs = sorted_files(&dir, ".dot");
    assert!(programs.len() >= 20, "program corpus holds at least 20 programs");
    for path in &programs {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let src = read(path);
        let term = parse_term_with(src.trim(), &mut Resolver::new())
            .unwrap_or_else(|e| panic!("{name} does not parse: {e}"));
        let d = load_deriv(&dir.join(format!("{name}.deriv.json")));
        validate(&d).unwrap_or_else(|e| panic!("{name} derivation invalid: {e:?}"));
        let (ctx, subject, target) = typ_conclusion(&d);
        assert!(ctx.is_empty() && subject.alpha_eq(&term), "{name} derivation mismatch");

        let trace = run(&term, 1000);
        assert!(
            matches!(trace.outcome, Outcome::Answer(_)),
            "{name} did not reach an answer: {:?}",
            trace.outcome
        );
        // preservation: every intermediate term keeps the original type
        for t in trace.steps.iter().skip(1) {
            assert!(
                search_typ(&Context::empty(), t, Some(target), &cfg).is_some(),
                "{name}: an intermediate term loses its type"
            );
        }
    }
    let elapsed = within(start, Duration::from_secs(120), "soundness");
    println!(
        "PASS soundness ({elapsed:?}): {} programs reach answers, types preserved at every step",
        programs.len()
    );
}

fn evaluator_laws() {
    let start = Instant::now();
    let mut g = Gen::new(37);
    let pool: Vec<VarName> = ["ea", "eb", "ec"].iter().map(|n| VarName::fresh(*n)).collect();
    for _ in 0..10_000 {
        let mut vars = pool.clone();
        let t = g.term(&mut vars, 3);
        let first = step(&t);
        assert_eq!(first, step(&t), "stepping is deterministic");
        assert_eq!(
            is_answer(&t),
            matches!(first, StepResult::Answer),
            "answer predicate disagrees with the stepper on {t:?}"
        );
    }
    let elapsed = within(start, Duration::from_secs(60), "evaluator laws");
    println!("PASS evaluator ({elapsed:?}): 10000 terms, deterministic stepping, answers agree");
}

fn printer_round_trips() {
    let start = Instant::now();
    let mut g = Gen::new(41);
    let pool: Vec<VarName> = ["pa", "pb", "pc"].iter().map(|n| VarName::fresh(*n)).collect();
    for i in 0..10_000 {
        let mut vars = pool.clone();
        if i % 2 == 0 {
            let ty = g.ty(&mut vars, 3);
            let printed = print_type(&ty);
            let back = parse_type_with(&printed, &mut Resolver::seeded(pool.clone()))
                .unwrap_or_else(|e| panic!("printed type does not parse: {printed}: {e}"));
            assert!(ty.alpha_eq(&back), "type round-trip drifts: {printed}");
        } else {
            let t = g.term(&mut vars, 3);
            let printed = print_term(&t);
            let back = parse_term_with(&printed, &mut Resolver::seeded(pool.clone()))
                .unwrap_or_else(|e| panic!("printed term does not parse: {printed}: {e}"));
            assert!(t.alpha_eq(&back), "term round-trip drifts: {printed}");
        }
    }
    let elapsed = within(start, Duration::from_secs(60), "printer round-trips");
    println!("PASS printer ({elapsed:?}): 10000 ASTs survive print-then-parse up to renaming");
}

// the criteria run serially so the per-criterion runtime budgets are
// measured without contention
#[test]
fn acceptance_criteria() {
    rule_coverage_and_mutation_rejection();
    bad_bounds_counterexample();
    tightening_replays_fuzzed_derivations();
    invertible_replays_and_selection_premises();
    canonical_forms_decompose();
    inertness_properties();
    soundness_over_program_corpus();
    evaluator_laws();
    printer_round_trips();
}
