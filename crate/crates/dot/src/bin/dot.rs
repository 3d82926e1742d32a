//! Batch command-line front end: parsing, printing, inertness checks,
//! derivation validation, bounded search, proof transformers, and the
//! small-step evaluator. Exit codes: 0 success, 1 domain failure,
//! 2 usage or IO errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dot::eval::{is_answer, run, Outcome};
use dot::inert::{is_inert_context, is_inert_type};
use dot::proof::{
    canon_fun_val, canon_fun_var, canon_obj_val, canon_obj_var, general_to_tight, narrow,
    search_sub, search_typ, subst_deriv, tight_to_invertible, SearchConfig,
};
use dot::rules::{precise_types_of_var, validate, Derivation, Judgment};
use dot::surface::{
    derivation_from_json, derivation_to_json, parse_context_with, parse_defs_with,
    parse_term_with, parse_type_with, print_context, print_defs, print_judgment, print_term,
    print_type, Resolver,
};
use dot::syntax::{Context, Term, TermLabel, VarName};

#[derive(Parser)]
#[command(name = "dot", about = "A workbench for the DOT calculus")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a type, term, definition list, or context and echo it back.
    Parse {
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long)]
        term: Option<String>,
        #[arg(long)]
        defs: Option<String>,
        #[arg(long)]
        context: Option<String>,
    },
    /// Pretty-print a derivation file as an indented proof tree.
    Print {
        #[arg(long)]
        deriv: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide inertness of a type or of every binding of a context.
    Inert {
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long)]
        ctx: Option<PathBuf>,
        #[arg(long)]
        loose_inert: bool,
    },
    /// List the precise types of a context variable.
    Precise {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long)]
        var: String,
    },
    /// Validate a derivation file against the rule registry.
    Check {
        #[arg(long)]
        deriv: PathBuf,
    },
    /// Search for a typing of a term, optionally at a target type.
    Infer {
        #[arg(long)]
        term: String,
        #[arg(long)]
        ctx: Option<PathBuf>,
        #[arg(long = "type")]
        target: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Replay a derivation in another rule system.
    Transform {
        mode: TransformMode,
        #[arg(long)]
        deriv: PathBuf,
    },
    /// Decompose a typing by one of the canonical-forms lemmas.
    Canon {
        mode: CanonMode,
        #[arg(long)]
        deriv: PathBuf,
        #[arg(long)]
        label: Option<String>,
    },
    /// Narrow a context binding using a subtyping derivation.
    Narrow {
        #[arg(long)]
        deriv: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long)]
        sub: PathBuf,
    },
    /// Substitute away the last context binding using a variable typing.
    Subst {
        #[arg(long)]
        deriv: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long)]
        evidence: PathBuf,
    },
    /// Perform a single evaluation step.
    Step {
        #[arg(long)]
        term: String,
    },
    /// Run a term to an answer or failure.
    Run {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Run every corpus program and re-derive its type after each step.
    Soundness {
        dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Walk through a built-in example end to end.
    Demo { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformMode {
    Tight,
    Invertible,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonMode {
    FunVar,
    FunVal,
    ObjVar,
    ObjVal,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            println!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_deriv(path: &Path) -> Result<Derivation, Failure> {
    derivation_from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_ctx(path: Option<&PathBuf>, r: &mut Resolver) -> Result<Context, Failure> {
    match path {
        None => Ok(Context::empty()),
        Some(p) => parse_context_with(read(p)?.trim(), r)
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
    }
}

fn ctx_var(ctx: &Context, name: &str) -> Result<VarName, Failure> {
    ctx.bindings()
        .iter()
        .map(|(x, _)| x)
        .find(|x| x.name == name)
        .cloned()
        .ok_or_else(|| usage(format!("variable {name} is not bound in the context")))
}

fn print_tree(d: &Derivation, indent: usize) {
    println!("{}{}  {}", "  ".repeat(indent), d.rule, print_judgment(&d.conclusion));
    for p in &d.premises {
        print_tree(p, indent + 1);
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Parse {
            ty,
            term,
            defs,
            context,
        } => {
            let mut r = Resolver::new();
            let mut printed = 0;
            if let Some(src) = context {
                let c = parse_context_with(&src, &mut r).map_err(|e| domain(e.to_string()))?;
                println!("{}", print_context(&c));
                printed += 1;
            }
            if let Some(src) = ty {
                let t = parse_type_with(&src, &mut r).map_err(|e| domain(e.to_string()))?;
                println!("{}", print_type(&t));
                printed += 1;
            }
            if let Some(src) = term {
                let t = parse_term_with(&src, &mut r).map_err(|e| domain(e.to_string()))?;
                println!("{}", print_term(&t));
                printed += 1;
            }
            if let Some(src) = defs {
                let d = parse_defs_with(&src, &mut r).map_err(|e| domain(e.to_string()))?;
                println!("{}", print_defs(&d));
                printed += 1;
            }
            if printed == 0 {
                return Err(usage("nothing to parse: pass --type, --term, --defs, or --context"));
            }
            Ok(())
        }
        Cmd::Print { deriv, json } => {
            let d = load_deriv(&deriv)?;
            if json {
                println!("{}", derivation_to_json(&d));
            } else {
                print_tree(&d, 0);
            }
            Ok(())
        }
        Cmd::Inert {
            ty,
            ctx,
            loose_inert,
        } => {
            let strict = !loose_inert;
            if let Some(src) = ty {
                let t = parse_type_with(&src, &mut Resolver::new())
                    .map_err(|e| usage(e.to_string()))?;
                let report = is_inert_type(&t, strict);
                if report.inert {
                    println!("inert");
                    return Ok(());
                }
                let v = report.first_violation.expect("non-inert types carry a violation");
                return Err(domain(format!("not inert: {v}")));
            }
            if let Some(p) = ctx {
                let c = load_ctx(Some(&p), &mut Resolver::new())?;
                return match is_inert_context(&c, strict) {
                    None => {
                        println!("inert");
                        Ok(())
                    }
                    Some((x, v)) => Err(domain(format!("not inert: binding {x}: {v}"))),
                };
            }
            Err(usage("pass --type or --ctx"))
        }
        Cmd::Precise { ctx, var } => {
            let c = load_ctx(Some(&ctx), &mut Resolver::new())?;
            let x = ctx_var(&c, &var)?;
            for entry in precise_types_of_var(&c, &x) {
                println!("{}", print_type(&entry.ty));
            }
            Ok(())
        }
        Cmd::Check { deriv } => {
            let d = load_deriv(&deriv)?;
            match validate(&d) {
                Ok(()) => {
                    println!("ok: {} nodes", d.node_count());
                    Ok(())
                }
                Err(errors) => {
                    let mut out = String::new();
                    for e in &errors {
                        out.push_str(&format!("{e}\n"));
                    }
                    Err(domain(out.trim_end().to_string()))
                }
            }
        }
        Cmd::Infer {
            term,
            ctx,
            target,
            depth,
            json,
        } => {
            let mut r = Resolver::new();
            let c = load_ctx(ctx.as_ref(), &mut r)?;
            let t = parse_term_with(&term, &mut r).map_err(|e| usage(e.to_string()))?;
            let target = match target {
                None => None,
                Some(src) => {
                    Some(parse_type_with(&src, &mut r).map_err(|e| usage(e.to_string()))?)
                }
            };
            let cfg = SearchConfig {
                max_depth: depth,
                ..SearchConfig::default()
            };
            match search_typ(&c, &t, target.as_ref(), &cfg) {
                Some(d) => {
                    if json {
                        println!("{}", derivation_to_json(&d));
                    } else {
                        println!("{}", print_judgment(&d.conclusion));
                    }
                    Ok(())
                }
                None => Err(domain("not-found")),
            }
        }
        Cmd::Transform { mode, deriv } => {
            let d = load_deriv(&deriv)?;
            let out = match mode {
                TransformMode::Tight => general_to_tight(&d),
                TransformMode::Invertible => tight_to_invertible(&d),
            }
            .map_err(|e| domain(e.to_string()))?;
            println!("{}", derivation_to_json(&out));
            Ok(())
        }
        Cmd::Canon { mode, deriv, label } => {
            let d = load_deriv(&deriv)?;
            match mode {
                CanonMode::FunVar => {
                    let cf = canon_fun_var(&d).map_err(|e| domain(e.to_string()))?;
                    println!("precise: {}", print_judgment(&cf.precise.conclusion));
                    println!("domain: {}", print_judgment(&cf.dom_sub.conclusion));
                    println!("codomain: {}", print_judgment(&cf.cod_sub.conclusion));
                }
                CanonMode::FunVal => {
                    let cv = canon_fun_val(&d).map_err(|e| domain(e.to_string()))?;
                    println!("parameter: {} at {}", cv.param, print_type(&cv.ann));
                    println!("domain: {}", print_judgment(&cv.dom_sub.conclusion));
                    println!("body: {}", print_judgment(&cv.body_typing.conclusion));
                }
                CanonMode::ObjVar => {
                    let co = canon_obj_var(&d).map_err(|e| domain(e.to_string()))?;
                    println!("precise: {}", print_judgment(&co.precise.conclusion));
                    println!("field: {}", print_judgment(&co.sub.conclusion));
                }
                CanonMode::ObjVal => {
                    let a = TermLabel(label.ok_or_else(|| usage("obj-val needs --label"))?);
                    let co = canon_obj_val(&d, &a).map_err(|e| domain(e.to_string()))?;
                    println!(
                        "self: {} at {}",
                        co.self_var,
                        print_type(&co.self_ty)
                    );
                    println!("body: {}", print_term(&co.field_body));
                    println!("typing: {}", print_judgment(&co.field_typing.conclusion));
                }
            }
            Ok(())
        }
        Cmd::Narrow { deriv, var, sub } => {
            let d = load_deriv(&deriv)?;
            let s = load_deriv(&sub)?;
            let x = ctx_var(d.conclusion.ctx(), &var)?;
            let out = narrow(&d, &x, &s).map_err(|e| domain(e.to_string()))?;
            println!("{}", derivation_to_json(&out));
            Ok(())
        }
        Cmd::Subst {
            deriv,
            var,
            evidence,
        } => {
            let d = load_deriv(&deriv)?;
            let dy = load_deriv(&evidence)?;
            let y = ctx_var(dy.conclusion.ctx(), &var).or_else(|_| {
                // the evidence may type a variable absent from its own
                // context prefix only if it appears in its subject
                match &dy.conclusion {
                    Judgment::Typ {
                        subject: Term::Var(v),
                        ..
                    } if v.name == var => Ok(v.clone()),
                    _ => Err(usage(format!("variable {var} not found in the evidence"))),
                }
            })?;
            let out = subst_deriv(&d, &y, &dy).map_err(|e| domain(e.to_string()))?;
            println!("{}", derivation_to_json(&out));
            Ok(())
        }
        Cmd::Step { term } => {
            let t = parse_term_with(&term, &mut Resolver::new())
                .map_err(|e| usage(e.to_string()))?;
            match dot::eval::step(&t) {
                dot::eval::StepResult::Answer => {
                    println!("answer: {}", print_term(&t));
                    Ok(())
                }
                dot::eval::StepResult::Stepped(rule, t2) => {
                    println!("{rule}: {}", print_term(&t2));
                    Ok(())
                }
                dot::eval::StepResult::Stuck(r) => Err(domain(format!("stuck: {r}"))),
            }
        }
        Cmd::Run { term, fuel } => {
            let t = parse_term_with(&term, &mut Resolver::new())
                .map_err(|e| usage(e.to_string()))?;
            let trace = run(&t, fuel);
            println!("0: {}", print_term(&trace.steps[0]));
            for (i, s) in trace.steps.iter().enumerate().skip(1) {
                println!("{i} [{}]: {}", trace.rules[i - 1], print_term(s));
            }
            match trace.outcome {
                Outcome::Answer(t) => {
                    println!("answer: {}", print_term(&t));
                    Ok(())
                }
                Outcome::Stuck(r, t) => {
                    Err(domain(format!("stuck at {}: {r}", print_term(&t))))
                }
                Outcome::OutOfFuel(_) => Err(domain("out of fuel")),
            }
        }
        Cmd::Soundness { dir, fuel, depth } => soundness(&dir, fuel, depth),
        Cmd::Demo { name } => demo(&name),
    }
}

fn soundness(dir: &Path, fuel: usize, depth: usize) -> Result<(), Failure> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| usage(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && p.file_name().is_some_and(|n| n.to_string_lossy().ends_with(".deriv.json"))
        })
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(usage(format!("no .deriv.json files in {}", dir.display())));
    }
    let cfg = SearchConfig {
        max_depth: depth,
        ..SearchConfig::default()
    };
    let mut failures = 0;
    for path in &entries {
        let name = path
            .file_name()
            .expect("directory entries have names")
            .to_string_lossy()
            .replace(".deriv.json", "");
        match soundness_one(path, fuel, &cfg) {
            Ok(steps) => println!("PASS {name} ({steps} steps)"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(domain(format!("{failures} program(s) failed")))
    }
}

fn soundness_one(path: &Path, fuel: usize, cfg: &SearchConfig) -> Result<usize, String> {
    let d = derivation_from_json(&fs::read_to_string(path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    validate(&d).map_err(|es| format!("derivation invalid: {}", es.len()))?;
    let (term, ty) = match &d.conclusion {
        Judgment::Typ { ctx, subject, ty, .. } if ctx.is_empty() => (subject.clone(), ty.clone()),
        _ => return Err("expected an empty-context typing".to_string()),
    };
    let trace = run(&term, fuel);
    for t in trace.steps.iter().skip(1) {
        if search_typ(&Context::empty(), t, Some(&ty), cfg).is_none() {
            return Err(format!("no derivation for intermediate {}", print_term(t)));
        }
    }
    match trace.outcome {
        Outcome::Answer(_) => Ok(trace.steps.len() - 1),
        Outcome::Stuck(r, t) => Err(format!("stuck at {}: {r}", print_term(&t))),
        Outcome::OutOfFuel(_) => Err("out of fuel".to_string()),
    }
}

fn demo(name: &str) -> Result<(), Failure> {
    if name != "bad-bounds" {
        return Err(usage(format!("unknown demo {name}; try bad-bounds")));
    }
    let src = include_str!("../../corpus/bad_bounds.dot").trim();
    let deriv_src = include_str!("../../corpus/bad_bounds.deriv.json");
    println!("term:");
    println!("  {src}");
    let d = derivation_from_json(deriv_src).expect("built-in derivation parses");
    validate(&d).expect("built-in derivation validates");
    println!("derivation: {} nodes, rules used:", d.node_count());
    let mut rules: Vec<&str> = d.rule_names();
    rules.sort();
    rules.dedup();
    println!("  {}", rules.join(", "));
    println!("conclusion:");
    println!("  {}", print_judgment(&d.conclusion));

    // the body only types because the parameter's bounds are not inert
    let mut r = Resolver::new();
    let bad_ctx =
        parse_context_with("x: {A: {a: Top} .. all(z: Top) Top}", &mut r).expect("context parses");
    let (x, xt) = &bad_ctx.bindings()[0];
    let report = is_inert_type(xt, true);
    println!("witness: binding {x} is not inert:");
    println!(
        "  {}",
        report.first_violation.expect("loose bounds violate inertness")
    );

    // extracting the body into an inert context strands the application
    let mut r2 = Resolver::new();
    let inert_ctx = parse_context_with("y: mu(y: {a: Top})", &mut r2).expect("context parses");
    let y = inert_ctx.bindings()[0].0.clone();
    let app = Term::App(y.clone(), y.clone());
    let cfg = SearchConfig::default();
    let found = search_typ(&inert_ctx, &app, None, &cfg);
    println!(
        "in the inert context {}: search for {} finds {}",
        print_context(&inert_ctx),
        print_term(&app),
        if found.is_none() { "nothing" } else { "a typing" },
    );
    let body = parse_term_with("let y = nu(y: {a: Top}) {a = y.a} in y y", &mut Resolver::new())
        .expect("body parses");
    let trace = run(&body, 100);
    println!("running the extracted body:");
    println!("  0: {}", print_term(&trace.steps[0]));
    for (i, s) in trace.steps.iter().enumerate().skip(1) {
        println!("  {i} [{}]: {}", trace.rules[i - 1], print_term(s));
    }
    match trace.outcome {
        Outcome::Stuck(reason, t) => {
            println!("  stuck at {}: {reason}", print_term(&t));
            assert!(!is_answer(&t));
            // the chain only exists under the bad bounds
            let s = parse_type_with("{a: Top}", &mut r).expect("type parses");
            let u = parse_type_with("all(z: Top) Top", &mut r).expect("type parses");
            let chain = search_sub(&bad_ctx, &s, &u, &cfg).expect("the subtyping chain derives");
            println!(
                "under the bad bounds the chain derives: {}",
                print_judgment(&chain.conclusion)
            );
            Ok(())
        }
        other => Err(domain(format!("expected the body to get stuck, got {other:?}"))),
    }
}
