//! Regenerates the committed corpus: the bad-bounds and lattice examples,
//! the inertness test vectors, twenty closed well-typed programs with
//! their derivations, and coverage derivations that collectively exercise
//! every rule schema. Run from the package root; output is deterministic.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use dot::eval::{run, Outcome};
use dot::inert::is_inert_context;
use dot::proof::{general_to_tight, tight_to_invertible, value_precise, SearchConfig};
use dot::proof::{search_sub, search_typ};
use dot::rules::{precise_types_of_var, rule_registry, validate, Derivation};
use dot::surface::{
    derivation_to_json, parse_context_with, parse_term_with, parse_type_with, Resolver,
};
use dot::syntax::{Context, Term, Type};

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for sub in ["programs", "coverage", "inert_vectors"] {
        fs::create_dir_all(root.join(sub)).expect("corpus directories are writable");
    }
    let cfg = SearchConfig::default();
    let mut all_rules: BTreeSet<String> = BTreeSet::new();

    write_bad_bounds(&root, &cfg, &mut all_rules);
    write_lattice(&root, &cfg, &mut all_rules);
    write_inert_vectors(&root);
    write_programs(&root, &cfg, &mut all_rules);
    write_coverage(&root, &cfg, &mut all_rules);

    let expected: BTreeSet<String> = rule_registry()
        .iter()
        .map(|s| s.name.to_string())
        .collect();
    let missing: Vec<&String> = expected.difference(&all_rules).collect();
    assert!(
        missing.is_empty(),
        "corpus misses rule schemas: {missing:?}"
    );
    println!(
        "corpus complete: {} rule schemas covered",
        all_rules.len()
    );
}

fn record(d: &Derivation, all_rules: &mut BTreeSet<String>) {
    validate(d).unwrap_or_else(|e| panic!("corpus derivation invalid: {e:?}"));
    for r in d.rule_names() {
        all_rules.insert(r.to_string());
    }
}

fn save(path: &Path, content: &str) {
    let mut text = content.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).unwrap_or_else(|e| panic!("cannot write {}: {e}", path.display()));
}

fn write_bad_bounds(root: &Path, cfg: &SearchConfig, all_rules: &mut BTreeSet<String>) {
    let src = "lambda(x: {A: {a: Top} .. all(z: Top) Top}) \
               let y = nu(y: {a: Top}) {a = y.a} in y y";
    let term = parse_term_with(src, &mut Resolver::new()).expect("bad-bounds term parses");
    let d = search_typ(&Context::empty(), &term, None, cfg)
        .expect("bad-bounds term types in the empty context");
    for needed in ["Sub", "<:-Sel", "Sel-<:", "Trans", "All-I", "{}-I", "Def-Trm", "Let"] {
        assert!(
            d.rule_names().contains(&needed),
            "bad-bounds derivation misses {needed}"
        );
    }
    record(&d, all_rules);
    save(&root.join("bad_bounds.dot"), src);
    save(&root.join("bad_bounds.deriv.json"), &derivation_to_json(&d));
}

fn write_lattice(root: &Path, cfg: &SearchConfig, all_rules: &mut BTreeSet<String>) {
    // the custom-lattice lambda; its annotation mentions the parameter, so
    // the typable rendition binds it in the context instead
    let src = "lambda(x: {A: Bot .. Top} & {B: x.A .. x.C} & {C: Bot .. Top}) x";
    save(&root.join("lattice.dot"), src);
    let mut r = Resolver::new();
    let ctx = parse_context_with(
        "x: {A: Bot .. Top} & {B: x.A .. x.C} & {C: Bot .. Top}",
        &mut r,
    )
    .expect("lattice context parses");
    let lhs = parse_type_with("x.A", &mut r).expect("projection parses");
    let rhs = parse_type_with("x.C", &mut r).expect("projection parses");
    let d = search_sub(&ctx, &lhs, &rhs, cfg).expect("the lattice chain A <: B <: C derives");
    record(&d, all_rules);
    save(&root.join("lattice.deriv.json"), &derivation_to_json(&d));
}

fn write_inert_vectors(root: &Path) {
    // recursive types whose loose bounds make them non-inert
    let vectors = [
        (
            "lattice_members.dot",
            "mu(x: {A: Bot .. Top} & {B: x.A .. x.C} & {C: Bot .. Top})",
        ),
        (
            "function_members.dot",
            "mu(x: {A: Bot .. all(y: Bot) Top} & {B: x.A .. all(y: Bot) Top})",
        ),
        (
            "aliases.dot",
            "mu(x: {A: Top .. Top} & {B: Bot .. Bot} & {C: x.B .. x.A})",
        ),
    ];
    for (name, src) in vectors {
        parse_type_with(src, &mut Resolver::new()).expect("vector parses");
        save(&root.join("inert_vectors").join(name), src);
    }
}

fn programs() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        (
            "identity_apply",
            "let f = lambda(x: Top) x in let u = lambda(y: Top) y in f u",
            "Top",
        ),
        ("project_self", "let o = nu(s: {a: Top}) {a = s} in o.a", "Top"),
        (
            "object_with_alias",
            "let o = nu(s: {a: Top} & {A: Top .. Top}) {a = s} /\\ {A = Top} in o.a",
            "Top",
        ),
        (
            "let_reassociate",
            "let x = let y = lambda(z: Top) z in y in x",
            "all(z: Top) Top",
        ),
        (
            "apply_object",
            "let f = lambda(x: Top) x in let o = nu(s: {a: Top}) {a = s} in f o",
            "Top",
        ),
        (
            "curried",
            "let f = lambda(x: Top) lambda(y: Top) y in f f",
            "all(y: Top) Top",
        ),
        (
            "field_function",
            "let o = nu(s: {f: all(x: Top) Top}) {f = lambda(x: Top) x} in o.f",
            "all(x: Top) Top",
        ),
        (
            "field_function_apply",
            "let o = nu(s: {f: all(x: Top) Top}) {f = lambda(x: Top) x} in \
             let u = lambda(y: Top) y in let g = o.f in g u",
            "Top",
        ),
        (
            "two_objects",
            "let a = nu(s: {a: Top}) {a = s} in let b = nu(t: {b: Top}) {b = t} in b.b",
            "Top",
        ),
        (
            "sibling_fields",
            "let o = nu(s: {a: Top} & {b: Top}) {a = s} /\\ {b = s.a} in o.b",
            "Top",
        ),
        (
            "shadowed_binder",
            "let x = lambda(y: Top) y in let x = lambda(z: Top) z in x x",
            "Top",
        ),
        (
            "type_member_object",
            "let o = nu(s: {A: Top .. Top} & {a: Top}) {A = Top} /\\ {a = s} in o",
            "mu(s: {A: Top .. Top} & {a: Top})",
        ),
        ("self_apply_identity", "let i = lambda(x: Top) x in i i", "Top"),
        (
            "aliased_let",
            "let a = lambda(x: Top) x in let b = a in let c = b in c c",
            "Top",
        ),
        (
            "field_then_var",
            "let o = nu(s: {a: Top}) {a = s} in let p = o.a in p",
            "Top",
        ),
        (
            "apply_twice",
            "let f = lambda(x: Top) x in let a = f f in let b = f a in b",
            "Top",
        ),
        (
            "annotated_field_reader",
            "let f = lambda(x: {a: Top}) x.a in let o = nu(s: {a: Top}) {a = s} in f o",
            "Top",
        ),
        (
            "member_then_apply",
            "let o = nu(s: {A: Top .. Top}) {A = Top} in let f = lambda(x: Top) x in f o",
            "Top",
        ),
        (
            "wide_object",
            "let o = nu(s: {a: Top} & {b: Top} & {c: Top}) {a = s} /\\ {b = s} /\\ {c = s} in o.c",
            "Top",
        ),
        (
            "returned_object",
            "let f = lambda(x: Top) x in let o = nu(s: {a: Top}) {a = s} in \
             let r = f o in r",
            "Top",
        ),
    ]
}

fn write_programs(root: &Path, cfg: &SearchConfig, all_rules: &mut BTreeSet<String>) {
    let dir = root.join("programs");
    for (name, src, target_src) in programs() {
        let mut r = Resolver::new();
        let term = parse_term_with(src, &mut r)
            .unwrap_or_else(|e| panic!("{name} does not parse: {e}"));
        assert!(
            dot::syntax::Syntax::free_vars(&term).is_empty(),
            "{name} is not closed"
        );
        let target = parse_type_with(target_src, &mut r)
            .unwrap_or_else(|e| panic!("{name} target does not parse: {e}"));
        let d = search_typ(&Context::empty(), &term, Some(&target), cfg)
            .unwrap_or_else(|| panic!("{name} does not type at {target_src}"));
        record(&d, all_rules);
        let trace = run(&term, 1000);
        match trace.outcome {
            Outcome::Answer(_) => {}
            other => panic!("{name} does not reach an answer: {other:?}"),
        }
        for t in trace.steps.iter().skip(1) {
            assert!(
                search_typ(&Context::empty(), t, Some(&target), cfg).is_some(),
                "{name}: an intermediate term loses its type"
            );
        }
        save(&dir.join(format!("{name}.dot")), src);
        save(
            &dir.join(format!("{name}.deriv.json")),
            &derivation_to_json(&d),
        );
    }
}

fn rich_ctx(r: &mut Resolver) -> Context {
    let ctx = parse_context_with(
        "f: all(s: Top) Top; \
         o: mu(o: {A: Top .. Top} & {a: Top} & {B: Bot .. Bot} \
         & {F: all(s: Top) Top .. all(s: Top) Top} & {b: {a: Top}})",
        r,
    )
    .expect("coverage context parses");
    assert!(is_inert_context(&ctx, true).is_none(), "coverage context must be inert");
    ctx
}

fn write_coverage(root: &Path, cfg: &SearchConfig, all_rules: &mut BTreeSet<String>) {
    let dir = root.join("coverage");
    let mut r = Resolver::new();
    let ctx = rich_ctx(&mut r);
    let o = ctx.bindings()[1].0.clone();
    let f = ctx.bindings()[0].0.clone();
    let mut docs: Vec<(String, Derivation)> = Vec::new();

    // general typings of the context variables
    let var_goals = [
        ("var_top", &o, "Top"),
        (
            "var_open",
            &o,
            "{A: Top .. Top} & {a: Top} & {B: Bot .. Bot} \
             & {F: all(s: Top) Top .. all(s: Top) Top} & {b: {a: Top}}",
        ),
        ("var_proj", &o, "{a: Top}"),
        ("var_and", &o, "{a: Top} & {A: Top .. Top}"),
        ("var_rec", &o, "mu(z: {a: Top})"),
        ("var_sel", &o, "o.A"),
        ("var_fun", &f, "all(s: Bot) Top"),
    ];
    for (name, subject, target_src) in var_goals {
        let target = parse_type_with(target_src, &mut r).expect("coverage target parses");
        let d = search_typ(&ctx, &Term::Var(subject.clone()), Some(&target), cfg)
            .unwrap_or_else(|| panic!("coverage goal {name} fails"));
        docs.push((format!("general_{name}"), d));
    }

    // application and selection at top level, so their tight replays
    // exercise the elimination rules directly
    for (name, src, target_src) in [("apply", "f o", "Top"), ("select", "o.a", "Top")] {
        let term = parse_term_with(src, &mut r).expect("coverage term parses");
        let target = parse_type_with(target_src, &mut r).expect("coverage target parses");
        let d = search_typ(&ctx, &term, Some(&target), cfg)
            .unwrap_or_else(|| panic!("coverage goal {name} fails"));
        docs.push((format!("general_{name}"), d));
    }

    // general subtyping
    let sub_goals = [
        ("fld", "{a: Bot}", "{a: Top}"),
        ("typdec", "{A: Bot .. Bot}", "{A: Bot .. Top}"),
        ("fun", "all(s: Top) Bot", "all(s: Bot) Top"),
        ("and_intro", "{a: Top}", "{a: Top} & Top"),
        ("and_left", "{a: Top} & {A: Top .. Top}", "{a: Top}"),
        ("and_right", "{a: Top} & {A: Top .. Top}", "{A: Top .. Top}"),
        ("sel_upper", "o.B", "Bot"),
        ("sel_lower", "Top", "o.A"),
        ("sel_chain", "{a: Top} & Top", "o.A"),
        ("bot", "Bot", "{a: Top}"),
    ];
    for (name, lhs_src, rhs_src) in sub_goals {
        let lhs = parse_type_with(lhs_src, &mut r).expect("coverage type parses");
        let rhs = parse_type_with(rhs_src, &mut r).expect("coverage type parses");
        let d = search_sub(&ctx, &lhs, &rhs, cfg)
            .unwrap_or_else(|| panic!("coverage subtyping {name} fails"));
        docs.push((format!("general_sub_{name}"), d));
    }

    // general value and program typings in the empty context
    let term_goals = [
        ("lambda", "lambda(x: Top) x", "all(x: Top) Top"),
        (
            "object",
            "nu(s: {a: Top} & {A: Top .. Top} & {b: {a: Top}}) \
             {a = s.a} /\\ {A = Top} /\\ {b = s}",
            "mu(s: {a: Top} & {A: Top .. Top} & {b: {a: Top}})",
        ),
        (
            "program",
            "let f = lambda(x: Top) x in let o = nu(s: {a: Top}) {a = s} in \
             let g = o.a in f g",
            "Top",
        ),
    ];
    for (name, src, target_src) in term_goals {
        let mut r2 = Resolver::new();
        let term = parse_term_with(src, &mut r2).expect("coverage term parses");
        let target = parse_type_with(target_src, &mut r2).expect("coverage target parses");
        let d = search_typ(&Context::empty(), &term, Some(&target), cfg)
            .unwrap_or_else(|| panic!("coverage term {name} fails"));
        docs.push((format!("general_{name}"), d));
    }

    // tight replays of every general document
    let tight_docs: Vec<(String, Derivation)> = docs
        .iter()
        .map(|(name, d)| {
            let t = general_to_tight(d)
                .unwrap_or_else(|e| panic!("tightening {name} fails: {e}"));
            (name.replace("general", "tight"), t)
        })
        .collect();
    docs.extend(tight_docs);

    // precise closure of the object variable, and of value introductions
    for (i, entry) in precise_types_of_var(&ctx, &o).into_iter().enumerate() {
        docs.push((format!("precise_closure_{i}"), entry.derivation));
    }
    for (name, src, target_src) in [
        ("precise_lambda", "lambda(x: Top) x", "all(x: Top) Top"),
        (
            "precise_object",
            "nu(s: {a: Top}) {a = s.a}",
            "mu(s: {a: Top})",
        ),
    ] {
        let mut r2 = Resolver::new();
        let term = parse_term_with(src, &mut r2).expect("coverage term parses");
        let target = parse_type_with(target_src, &mut r2).expect("coverage target parses");
        let d = search_typ(&Context::empty(), &term, Some(&target), cfg)
            .unwrap_or_else(|| panic!("coverage value {name} fails"));
        let (prec, _) = value_precise(&d).expect("value introductions peel");
        docs.push((name.to_string(), prec));
    }

    // invertible replays, one per invertible rule
    let and_fun = Type::and(
        parse_type_with("all(x: Top) Top", &mut r).expect("type parses"),
        Type::Top,
    );
    let inv_goal = |name: &str,
                        subject: Term,
                        target: Type,
                        docs: &mut Vec<(String, Derivation)>| {
        let in_ctx = if dot::syntax::Syntax::free_vars(&subject).is_empty()
            && dot::syntax::Syntax::free_vars(&target).is_empty()
        {
            Context::empty()
        } else {
            ctx.clone()
        };
        let d = search_typ(&in_ctx, &subject, Some(&target), cfg)
            .unwrap_or_else(|| panic!("invertible goal {name} fails"));
        let t = general_to_tight(&d).unwrap_or_else(|e| panic!("{name}: {e}"));
        let inv = tight_to_invertible(&t).unwrap_or_else(|e| panic!("{name}: {e}"));
        docs.push((format!("invertible_{name}"), inv));
    };
    let lam = parse_term_with("lambda(x: Top) x", &mut Resolver::new()).expect("term parses");
    let lam_f = parse_term_with("lambda(s: Top) s", &mut r).expect("term parses");
    let goals: Vec<(&str, Term, Type)> = vec![
        ("var_top", Term::Var(o.clone()), parse_type_with("Top", &mut r).unwrap()),
        ("var_fld", Term::Var(o.clone()), parse_type_with("{b: Top}", &mut r).unwrap()),
        (
            "var_typdec",
            Term::Var(o.clone()),
            parse_type_with("{A: Bot .. Top}", &mut r).unwrap(),
        ),
        (
            "var_rec",
            Term::Var(o.clone()),
            parse_type_with("mu(z: {a: Top})", &mut r).unwrap(),
        ),
        (
            "var_and",
            Term::Var(o.clone()),
            parse_type_with("{a: Top} & {A: Top .. Top}", &mut r).unwrap(),
        ),
        ("var_sel", Term::Var(o.clone()), parse_type_with("o.A", &mut r).unwrap()),
        (
            "var_fun",
            Term::Var(f.clone()),
            parse_type_with("all(s: Bot) Top", &mut r).unwrap(),
        ),
        (
            "val_exact",
            lam.clone(),
            parse_type_with("all(x: Top) Top", &mut Resolver::new()).unwrap(),
        ),
        ("val_top", lam.clone(), Type::Top),
        ("val_and", lam.clone(), and_fun),
        (
            "val_fun",
            lam.clone(),
            parse_type_with("all(x: Bot) Top", &mut Resolver::new()).unwrap(),
        ),
        ("val_sel", lam_f, parse_type_with("o.F", &mut r).unwrap()),
    ];
    for (name, subject, target) in goals {
        inv_goal(name, subject, target, &mut docs);
    }

    for (name, d) in &docs {
        record(d, all_rules);
        save(
            &dir.join(format!("{name}.deriv.json")),
            &derivation_to_json(d),
        );
    }
}
