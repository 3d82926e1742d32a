//! A small-step evaluator for the operational semantics.
//!
//! Terms evaluate inside a stack of `let x = v in []` frames, which act
//! as the runtime store. Answers are a variable or value under such
//! frames. Every term is either an answer, steps deterministically, or
//! is stuck for one of a closed set of reasons.

use std::fmt;

use crate::syntax::{Def, Syntax, Term, TermLabel, Value, VarName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StuckReason {
    /// An application or selection receiver with no binding in scope.
    UnboundVariable(VarName),
    /// Applied a variable bound to an object.
    NotAFunction(VarName),
    /// Selected a field on a variable bound to a lambda.
    NotAnObject(VarName),
    /// Selected a field the object does not define.
    NoSuchField(VarName, TermLabel),
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::UnboundVariable(x) => {
                write!(f, "variable {x} is not bound to a value")
            }
            StuckReason::NotAFunction(x) => {
                write!(f, "variable {x} is bound to an object, not a function")
            }
            StuckReason::NotAnObject(x) => {
                write!(f, "variable {x} is bound to a function, not an object")
            }
            StuckReason::NoSuchField(x, a) => {
                write!(f, "object {x} has no field {a}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    /// The term is an answer; no step applies.
    Answer,
    /// One step fired; named after the reduction rule at its root.
    /// Apply and Project match through evaluation contexts; Let-Var and
    /// Let-Let lifted under a frame report the Term congruence.
    Stepped(&'static str, Term),
    Stuck(StuckReason),
}

/// Whether the term is an answer: a variable or value under
/// `let x = v in` frames.
pub fn is_answer(t: &Term) -> bool {
    let mut cur = t;
    loop {
        match cur {
            Term::Var(_) | Term::Val(_) => return true,
            Term::Let(_, rhs, body) if matches!(rhs.as_ref(), Term::Val(_)) => {
                cur = body;
            }
            _ => return false,
        }
    }
}

/// Performs one step of the unique decomposition, if any.
pub fn step(t: &Term) -> StepResult {
    step_env(t, &mut Vec::new())
}

// Apply and Project carry their evaluation context, so they keep their
// names when lifted; anything else lifted under a frame is the Term
// congruence
fn lift(rule: &'static str) -> &'static str {
    match rule {
        "Apply" | "Project" => rule,
        _ => "Term",
    }
}

fn lookup<'e>(env: &'e [(VarName, Value)], x: &VarName) -> Option<&'e Value> {
    env.iter().rev().find(|(v, _)| v == x).map(|(_, val)| val)
}

fn step_env(t: &Term, env: &mut Vec<(VarName, Value)>) -> StepResult {
    match t {
        Term::Var(_) | Term::Val(_) => StepResult::Answer,
        Term::App(f, y) => match lookup(env, f) {
            None => StepResult::Stuck(StuckReason::UnboundVariable(f.clone())),
            Some(Value::Lambda(z, _, body)) => StepResult::Stepped("Apply", body.subst_var(z, y)),
            Some(Value::Nu(_, _, _)) => StepResult::Stuck(StuckReason::NotAFunction(f.clone())),
        },
        Term::SelTrm(x, a) => match lookup(env, x) {
            None => StepResult::Stuck(StuckReason::UnboundVariable(x.clone())),
            Some(Value::Lambda(_, _, _)) => {
                StepResult::Stuck(StuckReason::NotAnObject(x.clone()))
            }
            Some(Value::Nu(s, _, defs)) => {
                // the object's self variable is identified with the
                // let-bound variable it evaluates under
                let opened = defs.subst_var(s, x);
                let field = opened.conjuncts().into_iter().find_map(|d| match d {
                    Def::Fld(b, body) if b == a => Some(body.clone()),
                    _ => None,
                });
                match field {
                    Some(body) => StepResult::Stepped("Project", body),
                    None => StepResult::Stuck(StuckReason::NoSuchField(x.clone(), a.clone())),
                }
            }
        },
        Term::Let(x, rhs, body) => match rhs.as_ref() {
            Term::Var(y) => StepResult::Stepped("Let-Var", body.subst_var(x, y)),
            Term::Val(v) => {
                env.push((x.clone(), v.as_ref().clone()));
                let r = step_env(body, env);
                env.pop();
                match r {
                    StepResult::Stepped(rule, b2) => StepResult::Stepped(
                        lift(rule),
                        Term::let_in(x.clone(), rhs.as_ref().clone(), b2),
                    ),
                    other => other,
                }
            }
            Term::Let(y, s, u) => StepResult::Stepped(
                "Let-Let",
                Term::let_in(
                    y.clone(),
                    s.as_ref().clone(),
                    Term::let_in(x.clone(), u.as_ref().clone(), body.as_ref().clone()),
                ),
            ),
            Term::App(_, _) | Term::SelTrm(_, _) => match step_env(rhs, env) {
                StepResult::Stepped(rule, r2) => StepResult::Stepped(
                    lift(rule),
                    Term::let_in(x.clone(), r2, body.as_ref().clone()),
                ),
                StepResult::Answer => unreachable!("applications and selections never answer"),
                stuck => stuck,
            },
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Answer(Term),
    Stuck(StuckReason, Term),
    OutOfFuel(Term),
}

/// The sequence of terms visited while running, starting with the input.
#[derive(Clone, Debug)]
pub struct Trace {
    pub steps: Vec<Term>,
    /// Rule fired between consecutive steps; one shorter than `steps`.
    pub rules: Vec<&'static str>,
    pub outcome: Outcome,
}

/// Runs for at most `fuel` steps.
pub fn run(t: &Term, fuel: usize) -> Trace {
    let mut steps = vec![t.clone()];
    let mut rules = Vec::new();
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step(&cur) {
            StepResult::Answer => {
                return Trace {
                    steps,
                    rules,
                    outcome: Outcome::Answer(cur),
                }
            }
            StepResult::Stuck(r) => {
                return Trace {
                    steps,
                    rules,
                    outcome: Outcome::Stuck(r, cur),
                }
            }
            StepResult::Stepped(rule, next) => {
                steps.push(next.clone());
                rules.push(rule);
                cur = next;
            }
        }
    }
    if matches!(step(&cur), StepResult::Answer) {
        Trace {
            steps,
            rules,
            outcome: Outcome::Answer(cur),
        }
    } else {
        Trace {
            steps,
            rules,
            outcome: Outcome::OutOfFuel(cur),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_term, print_term};

    fn run_src(src: &str, fuel: usize) -> Trace {
        run(&parse_term(src).unwrap(), fuel)
    }

    #[test]
    fn identity_application_answers() {
        let trace = run_src("let f = lambda(x: Top) x in let y = f in f y", 100);
        match trace.outcome {
            Outcome::Answer(t) => assert!(is_answer(&t)),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn projection_substitutes_self() {
        // o.a returns the object itself via its self variable
        let trace = run_src(
            "let o = nu(s: {a: Top}) {a = s} in o.a",
            100,
        );
        match &trace.outcome {
            Outcome::Answer(t) => assert_eq!(print_term(t), "let o = nu(s: {a: Top}) {a = s} in o"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn let_let_reassociates() {
        let t = parse_term("let x = (let y = lambda(z: Top) z in y) in x").unwrap();
        match step(&t) {
            StepResult::Stepped(rule, t2) => {
                assert_eq!(rule, "Let-Let");
                assert_eq!(print_term(&t2), "let y = lambda(z: Top) z in let x = y in x");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn unbound_application_is_stuck() {
        let trace = run_src("x y", 10);
        assert!(matches!(
            trace.outcome,
            Outcome::Stuck(StuckReason::UnboundVariable(_), _)
        ));
    }

    #[test]
    fn applying_an_object_is_stuck() {
        let trace = run_src("let o = nu(s: {a: Top}) {a = s} in o o", 10);
        assert!(matches!(
            trace.outcome,
            Outcome::Stuck(StuckReason::NotAFunction(_), _)
        ));
    }

    #[test]
    fn selecting_a_missing_field_is_stuck() {
        let trace = run_src("let o = nu(s: {a: Top}) {a = s} in o.b", 10);
        assert!(matches!(
            trace.outcome,
            Outcome::Stuck(StuckReason::NoSuchField(_, _), _)
        ));
    }

    #[test]
    fn answers_do_not_step() {
        for src in ["x", "lambda(x: Top) x", "let v = lambda(x: Top) x in v"] {
            let t = parse_term(src).unwrap();
            assert!(is_answer(&t), "{src}");
            assert_eq!(step(&t), StepResult::Answer, "{src}");
        }
    }

    #[test]
    fn divergence_runs_out_of_fuel() {
        // the field selects itself through the self variable
        let trace = run_src("let o = nu(s: {a: Top}) {a = s.a} in o.a", 50);
        assert!(matches!(trace.outcome, Outcome::OutOfFuel(_)));
    }
}
