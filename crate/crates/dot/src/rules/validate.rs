//! The derivation validator: checks that every node of a derivation tree
//! is a correct instance of its named rule schema, including context
//! threading, premise systems, and side conditions.
//!
//! All comparisons across nodes are alpha-based: contexts are matched as
//! telescopes and the resulting binder correspondence is used to compare
//! subjects and types, so derivations built programmatically and ones
//! reloaded from documents validate identically.

use std::fmt;

use super::judgment::{Derivation, Judgment, TypSystem};
use super::registry::{lookup, RuleSchema};
use crate::syntax::{AlphaEnv, Context, Def, Syntax, Term, Type, Value, VarName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    UnknownRule,
    SystemMismatch,
    ShapeMismatch,
    SideConditionFailed,
    ContextMismatch,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::UnknownRule => "unknown-rule",
            Reason::SystemMismatch => "system-mismatch",
            Reason::ShapeMismatch => "shape-mismatch",
            Reason::SideConditionFailed => "side-condition-failed",
            Reason::ContextMismatch => "context-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct ValidationError {
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: Reason,
    pub detail: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: {}: {}",
            if self.path.is_empty() {
                "root".to_string()
            } else {
                self.path
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(".")
            },
            self.reason,
            self.detail
        )
    }
}

type Check = Result<(), (Reason, String)>;

fn fail(reason: Reason, detail: impl Into<String>) -> Check {
    Err((reason, detail.into()))
}

/// Validates an entire derivation, reporting every failing node.
pub fn validate(d: &Derivation) -> Result<(), Vec<ValidationError>> {
    let mut errors = Vec::new();
    walk(d, &mut Vec::new(), &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn walk(d: &Derivation, path: &mut Vec<usize>, errors: &mut Vec<ValidationError>) {
    if let Err((reason, detail)) = check_node(d) {
        errors.push(ValidationError {
            path: path.clone(),
            reason,
            detail,
        });
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, path, errors);
        path.pop();
    }
}

fn check_node(d: &Derivation) -> Check {
    let schema = match lookup(&d.rule) {
        Some(s) => s,
        None => return fail(Reason::UnknownRule, format!("no rule named {:?}", d.rule)),
    };
    check_discipline(&d.conclusion)?;
    if d.conclusion.kind() != schema.system {
        return fail(
            Reason::SystemMismatch,
            format!(
                "rule {} concludes {} judgments, found {}",
                schema.name,
                schema.system,
                d.conclusion.kind()
            ),
        );
    }
    if d.premises.len() != schema.arity() {
        return fail(
            Reason::ShapeMismatch,
            format!(
                "rule {} takes {} premises, found {}",
                schema.name,
                schema.arity(),
                d.premises.len()
            ),
        );
    }
    for (i, (p, want)) in d
        .premises
        .iter()
        .zip(schema.premise_kinds.iter())
        .enumerate()
    {
        if p.conclusion.kind() != *want {
            return fail(
                Reason::SystemMismatch,
                format!(
                    "premise {} of {} must be a {} judgment, found {}",
                    i,
                    schema.name,
                    want,
                    p.conclusion.kind()
                ),
            );
        }
    }
    let premises: Vec<&Judgment> = d.premises.iter().map(|p| &p.conclusion).collect();
    check_shape(schema, &d.conclusion, &premises)
}

/// Precise and invertible typing speak only about variables and values.
fn check_discipline(j: &Judgment) -> Check {
    if let Judgment::Typ {
        system: TypSystem::Precise | TypSystem::Invertible,
        subject,
        ..
    } = j
    {
        if !matches!(subject, Term::Var(_) | Term::Val(_)) {
            return fail(
                Reason::ShapeMismatch,
                "precise/invertible subjects must be variables or values",
            );
        }
    }
    Ok(())
}

// ---- deconstruction helpers -------------------------------------------------

fn as_typ(j: &Judgment) -> (&Context, &Term, &Type) {
    match j {
        Judgment::Typ {
            ctx, subject, ty, ..
        } => (ctx, subject, ty),
        _ => unreachable!("premise kinds already checked"),
    }
}

fn as_sub(j: &Judgment) -> (&Context, &Type, &Type) {
    match j {
        Judgment::Subtyp { ctx, lhs, rhs, .. } => (ctx, lhs, rhs),
        _ => unreachable!("premise kinds already checked"),
    }
}

fn as_defs(j: &Judgment) -> (&Context, &Def, &Type) {
    match j {
        Judgment::Defs { ctx, defs, ty } => (ctx, defs, ty),
        _ => unreachable!("premise kinds already checked"),
    }
}

/// Correspondence from `a`'s variables to `b`'s; contexts must agree as
/// telescopes.
fn env_between(a: &Context, b: &Context) -> Result<AlphaEnv, (Reason, String)> {
    a.telescope_env(b).ok_or_else(|| {
        (
            Reason::ContextMismatch,
            "premise context does not match the conclusion context".to_string(),
        )
    })
}

/// Premise context must be `base` extended by exactly one binding.
fn env_extended<'a>(
    premise: &'a Context,
    base: &Context,
) -> Result<(AlphaEnv, &'a VarName, &'a Type), (Reason, String)> {
    match premise.telescope_env_prefix(base) {
        Some((env, [(x, t)])) => Ok((env, x, t)),
        _ => Err((
            Reason::ContextMismatch,
            "premise context must extend the conclusion context by one binding".to_string(),
        )),
    }
}

fn eq_or(cond: bool, what: &str) -> Check {
    if cond {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, what)
    }
}

// ---- per-rule shape checks --------------------------------------------------

fn check_shape(schema: &RuleSchema, concl: &Judgment, ps: &[&Judgment]) -> Check {
    match schema.name {
        "Var" | "Var-#" | "Var!" => check_var(concl),
        "All-I" | "All-I-#" | "All-I!" => check_all_i(concl, ps[0]),
        "All-E" | "All-E-#" => check_all_e(concl, ps[0], ps[1]),
        "{}-I" | "{}-I-#" | "{}-I!" => check_new_i(concl, ps[0]),
        "{}-E" | "{}-E-#" => check_fld_e(concl, ps[0]),
        "Let" | "Let-#" => check_let(concl, ps[0], ps[1]),
        "Rec-I" | "Rec-I-#" => check_rec_i(concl, ps[0]),
        "Rec-E" | "Rec-E-#" | "Rec-E!" => check_rec_e(concl, ps[0]),
        "And-I" | "And-I-#" => check_and_i(concl, ps[0], ps[1]),
        "And1-E!" => check_and_e(concl, ps[0], false),
        "And2-E!" => check_and_e(concl, ps[0], true),
        "Sub" | "Sub-#" => check_sub_rule(concl, ps[0], ps[1]),
        "Top" | "Top-#" => {
            let (_, _, rhs) = as_sub(concl);
            eq_or(matches!(rhs, Type::Top), "right-hand side must be Top")
        }
        "Bot" | "Bot-#" => {
            let (_, lhs, _) = as_sub(concl);
            eq_or(matches!(lhs, Type::Bot), "left-hand side must be Bot")
        }
        "Refl" | "Refl-#" => {
            let (_, lhs, rhs) = as_sub(concl);
            eq_or(lhs.alpha_eq(rhs), "sides of Refl must be alpha-equal")
        }
        "Trans" | "Trans-#" => check_trans(concl, ps[0], ps[1]),
        "And1-<:" | "And1-<:-#" => check_and_sub(concl, false),
        "And2-<:" | "And2-<:-#" => check_and_sub(concl, true),
        "<:-And" | "<:-And-#" => check_sub_and(concl, ps[0], ps[1]),
        "Fld-<:-Fld" | "Fld-<:-Fld-#" => check_fld_sub(concl, ps[0]),
        "Typ-<:-Typ" | "Typ-<:-Typ-#" => check_typ_sub(concl, ps[0], ps[1]),
        "All-<:-All" | "All-<:-All-#" => check_all_sub(concl, ps[0], ps[1]),
        "<:-Sel" => check_sel_intro(concl, ps[0], false, false),
        "Sel-<:" => check_sel_intro(concl, ps[0], true, false),
        "<:-Sel-#" => check_sel_intro(concl, ps[0], false, true),
        "Sel-<:-#" => check_sel_intro(concl, ps[0], true, true),
        "Def-Trm" => check_def_trm(concl, ps[0]),
        "Def-Typ" => check_def_typ(concl),
        "AndDef-I" => check_anddef_i(concl, ps[0], ps[1]),
        "Var-##" | "Val-##" => check_inv_base(concl, ps[0], schema.name == "Var-##"),
        "Fld-<:-##" => check_inv_fld(concl, ps[0], ps[1]),
        "Typ-<:-##" => check_inv_typ(concl, ps[0], ps[1], ps[2]),
        "Rec-I-##" => check_rec_i(concl, ps[0]),
        "All-I-##" | "All-v-##" => check_inv_all(concl, ps[0], ps[1], ps[2], schema.name),
        "And-I-##" | "And-v-##" => check_inv_and(concl, ps[0], ps[1], schema.name),
        "Sel-##" | "Sel-v-##" => check_inv_sel(concl, ps[0], ps[1], schema.name),
        "Top-##" | "Top-v-##" => check_inv_top(concl, ps[0], schema.name),
        other => fail(Reason::UnknownRule, format!("no shape check for {other}")),
    }
}

fn check_var(concl: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let x = match subject {
        Term::Var(x) => x,
        _ => return fail(Reason::ShapeMismatch, "subject must be a variable"),
    };
    match ctx.lookup(x) {
        Some(t) if t.alpha_eq(ty) => Ok(()),
        Some(_) => fail(
            Reason::ShapeMismatch,
            format!("type does not match the context binding of {x}"),
        ),
        None => fail(
            Reason::ContextMismatch,
            format!("variable {x} is not bound in the context"),
        ),
    }
}

fn check_all_i(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (x, t_ann, body) = match subject {
        Term::Val(v) => match v.as_ref() {
            Value::Lambda(x, t, body) => (x, t, body),
            _ => return fail(Reason::ShapeMismatch, "subject must be a lambda"),
        },
        _ => return fail(Reason::ShapeMismatch, "subject must be a lambda"),
    };
    let (z, dom, cod) = match ty {
        Type::All(z, s, u) => (z, s, u),
        _ => return fail(Reason::ShapeMismatch, "type must be a function type"),
    };
    if !dom.alpha_eq(t_ann) {
        return fail(
            Reason::ShapeMismatch,
            "function domain must equal the parameter annotation",
        );
    }
    if t_ann.free_vars().contains(x) {
        return fail(
            Reason::SideConditionFailed,
            "parameter must not occur free in its own annotation",
        );
    }
    let (pctx, psubj, pty) = as_typ(p);
    let (mut env, xp, tp) = env_extended(pctx, ctx)?;
    if !tp.alpha_eq_in(t_ann, &mut env) {
        return fail(
            Reason::ContextMismatch,
            "premise binding must carry the parameter type",
        );
    }
    env.push(xp.clone(), x.clone());
    if !psubj.alpha_eq_in(body, &mut env) {
        return fail(Reason::ShapeMismatch, "premise subject must be the body");
    }
    env.pop();
    env.push(xp.clone(), z.clone());
    if !pty.alpha_eq_in(cod, &mut env) {
        return fail(
            Reason::ShapeMismatch,
            "premise type must be the codomain",
        );
    }
    Ok(())
}

fn check_all_e(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (f, y) = match subject {
        Term::App(f, y) => (f, y),
        _ => return fail(Reason::ShapeMismatch, "subject must be an application"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let (c2, s2, t2) = as_typ(p2);
    let env1 = env_between(c1, ctx)?;
    let env2 = env_between(c2, ctx)?;
    let f1 = match s1 {
        Term::Var(v) => v,
        _ => return fail(Reason::ShapeMismatch, "function premise subject must be a variable"),
    };
    let y2 = match s2 {
        Term::Var(v) => v,
        _ => return fail(Reason::ShapeMismatch, "argument premise subject must be a variable"),
    };
    if !env1.var_eq(f1, f) || !env2.var_eq(y2, y) {
        return fail(Reason::ShapeMismatch, "premise subjects must match the application");
    }
    let (z, s_dom, t_cod) = match t1 {
        Type::All(z, s, t) => (z, s, t),
        _ => return fail(Reason::ShapeMismatch, "function premise must have a function type"),
    };
    let mut env12 = env_between(c1, c2)?;
    if !s_dom.alpha_eq_in(t2, &mut env12) {
        return fail(
            Reason::ShapeMismatch,
            "argument type must equal the function domain",
        );
    }
    let pos = match ctx.position(y) {
        Some(i) => i,
        None => {
            return fail(
                Reason::ContextMismatch,
                "application argument must be bound in the context",
            )
        }
    };
    let y1 = &c1.bindings()[pos].0;
    let mut env1 = env1;
    let expected = t_cod.subst_var(z, y1);
    if !expected.alpha_eq_in(ty, &mut env1) {
        return fail(
            Reason::ShapeMismatch,
            "result type must be the codomain with the argument substituted",
        );
    }
    Ok(())
}

fn check_new_i(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (x, t_self, defs) = match subject {
        Term::Val(v) => match v.as_ref() {
            Value::Nu(x, t, d) => (x, t, d),
            _ => return fail(Reason::ShapeMismatch, "subject must be an object"),
        },
        _ => return fail(Reason::ShapeMismatch, "subject must be an object"),
    };
    let (z, body) = match ty {
        Type::Rec(z, b) => (z, b),
        _ => return fail(Reason::ShapeMismatch, "type must be a recursive type"),
    };
    let mut self_env = AlphaEnv::from_pairs(vec![(x.clone(), z.clone())]);
    if !t_self.alpha_eq_in(body, &mut self_env) {
        return fail(
            Reason::ShapeMismatch,
            "recursive type body must equal the declared object type",
        );
    }
    let (pctx, pdefs, pty) = as_defs(p);
    let (mut env, xp, tp) = env_extended(pctx, ctx)?;
    env.push(xp.clone(), x.clone());
    if !tp.alpha_eq_in(t_self, &mut env) {
        return fail(
            Reason::ContextMismatch,
            "premise must bind the self variable at the declared type",
        );
    }
    if !pdefs.alpha_eq_in(defs, &mut env) {
        return fail(Reason::ShapeMismatch, "premise must type the object's definitions");
    }
    if !pty.alpha_eq_in(t_self, &mut env) {
        return fail(
            Reason::ShapeMismatch,
            "definitions must be typed at the declared object type",
        );
    }
    Ok(())
}

fn check_fld_e(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (x, a) = match subject {
        Term::SelTrm(x, a) => (x, a),
        _ => return fail(Reason::ShapeMismatch, "subject must be a selection"),
    };
    let (c1, s1, t1) = as_typ(p);
    let mut env = env_between(c1, ctx)?;
    let x1 = match s1 {
        Term::Var(v) => v,
        _ => return fail(Reason::ShapeMismatch, "premise subject must be a variable"),
    };
    if !env.var_eq(x1, x) {
        return fail(Reason::ShapeMismatch, "premise subject must be the receiver");
    }
    match t1 {
        Type::Fld(a1, t) if a1 == a => {
            if t.alpha_eq_in(ty, &mut env) {
                Ok(())
            } else {
                fail(Reason::ShapeMismatch, "selection type must match the field declaration")
            }
        }
        _ => fail(
            Reason::ShapeMismatch,
            "premise must type the receiver at a declaration of the selected field",
        ),
    }
}

fn check_let(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (x, rhs, body) = match subject {
        Term::Let(x, rhs, body) => (x, rhs, body),
        _ => return fail(Reason::ShapeMismatch, "subject must be a let"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(rhs, &mut env1) {
        return fail(Reason::ShapeMismatch, "first premise must type the bound term");
    }
    let (c2, s2, t2) = as_typ(p2);
    let (mut env2, xp, tp) = env_extended(c2, ctx)?;
    let prefix = Context::from_bindings(c2.bindings()[..ctx.len()].to_vec())
        .expect("prefix of a valid context");
    let mut env21 = env_between(&prefix, c1)?;
    if !tp.alpha_eq_in(t1, &mut env21) {
        return fail(
            Reason::ContextMismatch,
            "let binding must carry the bound term's type",
        );
    }
    if t2.free_vars().contains(xp) {
        return fail(
            Reason::SideConditionFailed,
            "let-bound variable must not occur free in the result type",
        );
    }
    if !t2.alpha_eq_in(ty, &mut env2) {
        return fail(Reason::ShapeMismatch, "body type must be the let's type");
    }
    env2.push(xp.clone(), x.clone());
    if !s2.alpha_eq_in(body, &mut env2) {
        return fail(Reason::ShapeMismatch, "second premise must type the body");
    }
    Ok(())
}

fn check_rec_i(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let x = match subject {
        Term::Var(x) => x,
        _ => return fail(Reason::ShapeMismatch, "subject must be a variable"),
    };
    let (c1, s1, t1) = as_typ(p);
    let mut env = env_between(c1, ctx)?;
    match s1 {
        Term::Var(x1) if env.var_eq(x1, x) => {}
        _ => return fail(Reason::ShapeMismatch, "premise subject must be the same variable"),
    }
    let (z, body) = match ty {
        Type::Rec(z, b) => (z, b),
        _ => return fail(Reason::ShapeMismatch, "type must be a recursive type"),
    };
    let opened = body.subst_var(z, x);
    if t1.alpha_eq_in(&opened, &mut env) {
        Ok(())
    } else {
        fail(
            Reason::ShapeMismatch,
            "premise type must be the recursive body opened with the variable",
        )
    }
}

fn check_rec_e(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let x = match subject {
        Term::Var(x) => x,
        _ => return fail(Reason::ShapeMismatch, "subject must be a variable"),
    };
    let (c1, s1, t1) = as_typ(p);
    let mut env = env_between(c1, ctx)?;
    let x1 = match s1 {
        Term::Var(x1) if env.var_eq(x1, x) => x1,
        _ => return fail(Reason::ShapeMismatch, "premise subject must be the same variable"),
    };
    let (z, body) = match t1 {
        Type::Rec(z, b) => (z, b),
        _ => return fail(Reason::ShapeMismatch, "premise type must be a recursive type"),
    };
    let opened = body.subst_var(z, x1);
    if opened.alpha_eq_in(ty, &mut env) {
        Ok(())
    } else {
        fail(
            Reason::ShapeMismatch,
            "type must be the recursive body opened with the variable",
        )
    }
}

fn check_and_i(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let x = match subject {
        Term::Var(x) => x,
        _ => return fail(Reason::ShapeMismatch, "subject must be a variable"),
    };
    let (l, r) = match ty {
        Type::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "type must be an intersection"),
    };
    for (p, side, what) in [(p1, l, "left"), (p2, r, "right")] {
        let (c, s, t) = as_typ(p);
        let mut env = env_between(c, ctx)?;
        match s {
            Term::Var(x1) if env.var_eq(x1, x) => {}
            _ => return fail(Reason::ShapeMismatch, "premise subject must be the same variable"),
        }
        if !t.alpha_eq_in(side, &mut env) {
            return fail(
                Reason::ShapeMismatch,
                format!("{what} premise type must be the {what} conjunct"),
            );
        }
    }
    Ok(())
}

fn check_and_e(concl: &Judgment, p: &Judgment, right: bool) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let x = match subject {
        Term::Var(x) => x,
        _ => return fail(Reason::ShapeMismatch, "subject must be a variable"),
    };
    let (c1, s1, t1) = as_typ(p);
    let mut env = env_between(c1, ctx)?;
    match s1 {
        Term::Var(x1) if env.var_eq(x1, x) => {}
        _ => return fail(Reason::ShapeMismatch, "premise subject must be the same variable"),
    }
    let (l, r) = match t1 {
        Type::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "premise type must be an intersection"),
    };
    let picked = if right { r } else { l };
    if picked.alpha_eq_in(ty, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "type must be the selected conjunct")
    }
}

fn check_sub_rule(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    let (c1, s1, t1) = as_typ(p1);
    let (c2, lhs, rhs) = as_sub(p2);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(subject, &mut env1) {
        return fail(Reason::ShapeMismatch, "typing premise must type the subject");
    }
    let mut env12 = env_between(c1, c2)?;
    if !t1.alpha_eq_in(lhs, &mut env12) {
        return fail(
            Reason::ShapeMismatch,
            "subtyping premise must start at the premise type",
        );
    }
    let mut env2 = env_between(c2, ctx)?;
    if !rhs.alpha_eq_in(ty, &mut env2) {
        return fail(
            Reason::ShapeMismatch,
            "subtyping premise must end at the conclusion type",
        );
    }
    Ok(())
}

fn check_trans(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (c1, l1, r1) = as_sub(p1);
    let (c2, l2, r2) = as_sub(p2);
    let mut env1 = env_between(c1, ctx)?;
    let mut env2 = env_between(c2, ctx)?;
    let mut env12 = env_between(c1, c2)?;
    if !l1.alpha_eq_in(lhs, &mut env1) {
        return fail(Reason::ShapeMismatch, "first premise must start at the left side");
    }
    if !r2.alpha_eq_in(rhs, &mut env2) {
        return fail(Reason::ShapeMismatch, "second premise must end at the right side");
    }
    if !r1.alpha_eq_in(l2, &mut env12) {
        return fail(Reason::ShapeMismatch, "middle types of Trans must agree");
    }
    Ok(())
}

fn check_and_sub(concl: &Judgment, right: bool) -> Check {
    let (_, lhs, rhs) = as_sub(concl);
    let (l, r) = match lhs {
        Type::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "left side must be an intersection"),
    };
    let picked = if right { r } else { l };
    eq_or(
        picked.alpha_eq(rhs),
        "right side must be the selected conjunct",
    )
}

fn check_sub_and(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (t, u) = match rhs {
        Type::And(t, u) => (t, u),
        _ => return fail(Reason::ShapeMismatch, "right side must be an intersection"),
    };
    for (p, side, what) in [(p1, t, "left"), (p2, u, "right")] {
        let (c, l, r) = as_sub(p);
        let mut env = env_between(c, ctx)?;
        if !l.alpha_eq_in(lhs, &mut env) {
            return fail(Reason::ShapeMismatch, "premises must start at the left side");
        }
        if !r.alpha_eq_in(side, &mut env) {
            return fail(
                Reason::ShapeMismatch,
                format!("{what} premise must end at the {what} conjunct"),
            );
        }
    }
    Ok(())
}

fn check_fld_sub(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (a1, t) = match lhs {
        Type::Fld(a, t) => (a, t),
        _ => return fail(Reason::ShapeMismatch, "left side must be a field declaration"),
    };
    let (a2, u) = match rhs {
        Type::Fld(a, t) => (a, t),
        _ => return fail(Reason::ShapeMismatch, "right side must be a field declaration"),
    };
    if a1 != a2 {
        return fail(Reason::ShapeMismatch, "field labels must agree");
    }
    let (c, l, r) = as_sub(p);
    let mut env = env_between(c, ctx)?;
    if l.alpha_eq_in(t, &mut env) && r.alpha_eq_in(u, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "premise must relate the field types")
    }
}

fn check_typ_sub(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (a1, s1, t1) = match lhs {
        Type::TypDec(a, s, t) => (a, s, t),
        _ => return fail(Reason::ShapeMismatch, "left side must be a type declaration"),
    };
    let (a2, s2, t2) = match rhs {
        Type::TypDec(a, s, t) => (a, s, t),
        _ => return fail(Reason::ShapeMismatch, "right side must be a type declaration"),
    };
    if a1 != a2 {
        return fail(Reason::ShapeMismatch, "type labels must agree");
    }
    let (c1, l1, r1) = as_sub(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !(l1.alpha_eq_in(s2, &mut env1) && r1.alpha_eq_in(s1, &mut env1)) {
        return fail(
            Reason::ShapeMismatch,
            "lower bounds must be related contravariantly",
        );
    }
    let (c2, l2, r2) = as_sub(p2);
    let mut env2 = env_between(c2, ctx)?;
    if !(l2.alpha_eq_in(t1, &mut env2) && r2.alpha_eq_in(t2, &mut env2)) {
        return fail(Reason::ShapeMismatch, "upper bounds must be related covariantly");
    }
    Ok(())
}

fn check_all_sub(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (x1, s1, t1) = match lhs {
        Type::All(x, s, t) => (x, s, t),
        _ => return fail(Reason::ShapeMismatch, "left side must be a function type"),
    };
    let (x2, s2, t2) = match rhs {
        Type::All(x, s, t) => (x, s, t),
        _ => return fail(Reason::ShapeMismatch, "right side must be a function type"),
    };
    let (c1, l1, r1) = as_sub(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !(l1.alpha_eq_in(s2, &mut env1) && r1.alpha_eq_in(s1, &mut env1)) {
        return fail(Reason::ShapeMismatch, "domains must be related contravariantly");
    }
    let (c2, l2, r2) = as_sub(p2);
    let (mut env2, xp, sp) = env_extended(c2, ctx)?;
    if !sp.alpha_eq_in(s2, &mut env2) {
        return fail(
            Reason::ContextMismatch,
            "premise must extend the context with the narrower domain",
        );
    }
    env2.push(xp.clone(), x1.clone());
    let ok_lhs = l2.alpha_eq_in(t1, &mut env2);
    env2.pop();
    env2.push(xp.clone(), x2.clone());
    let ok_rhs = r2.alpha_eq_in(t2, &mut env2);
    if ok_lhs && ok_rhs {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "codomain premise must relate the codomains")
    }
}

/// `<:-Sel` / `Sel-<:` and their tight variants. For the tight variants the
/// premise is precise and its declaration bounds must be tight.
fn check_sel_intro(concl: &Judgment, p: &Judgment, upper: bool, tight: bool) -> Check {
    let (ctx, lhs, rhs) = as_sub(concl);
    let (x, label, other) = if upper {
        // x.A <: T
        match lhs {
            Type::Sel(x, a) => (x, a, rhs),
            _ => return fail(Reason::ShapeMismatch, "left side must be a type projection"),
        }
    } else {
        // S <: x.A
        match rhs {
            Type::Sel(x, a) => (x, a, lhs),
            _ => return fail(Reason::ShapeMismatch, "right side must be a type projection"),
        }
    };
    let (c1, s1, t1) = as_typ(p);
    let mut env = env_between(c1, ctx)?;
    match s1 {
        Term::Var(x1) if env.var_eq(x1, x) => {}
        _ => return fail(Reason::ShapeMismatch, "premise must type the projection receiver"),
    }
    let (a1, lo, hi) = match t1 {
        Type::TypDec(a, s, t) => (a, s, t),
        _ => return fail(Reason::ShapeMismatch, "premise type must be a type declaration"),
    };
    if a1 != label {
        return fail(Reason::ShapeMismatch, "declaration label must match the projection");
    }
    if tight && !lo.alpha_eq(hi) {
        return fail(
            Reason::SideConditionFailed,
            "tight selection requires equal declaration bounds",
        );
    }
    let bound = if upper { hi } else { lo };
    if bound.alpha_eq_in(other, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "conclusion must use the declaration bound")
    }
}

fn check_def_trm(concl: &Judgment, p: &Judgment) -> Check {
    let (ctx, defs, ty) = as_defs(concl);
    let (a, t) = match defs {
        Def::Fld(a, t) => (a, t),
        _ => return fail(Reason::ShapeMismatch, "definition must be a field definition"),
    };
    let (a2, u) = match ty {
        Type::Fld(a, t) => (a, t),
        _ => return fail(Reason::ShapeMismatch, "type must be a field declaration"),
    };
    if a != a2 {
        return fail(Reason::ShapeMismatch, "field labels must agree");
    }
    let (c, s, pt) = as_typ(p);
    let mut env = env_between(c, ctx)?;
    if s.alpha_eq_in(t, &mut env) && pt.alpha_eq_in(u, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "premise must type the field body at the declared type")
    }
}

fn check_def_typ(concl: &Judgment) -> Check {
    let (_, defs, ty) = as_defs(concl);
    let (a, t) = match defs {
        Def::Typ(a, t) => (a, t),
        _ => return fail(Reason::ShapeMismatch, "definition must be a type definition"),
    };
    let (a2, lo, hi) = match ty {
        Type::TypDec(a, s, t) => (a, s, t),
        _ => return fail(Reason::ShapeMismatch, "type must be a type declaration"),
    };
    if a != a2 {
        return fail(Reason::ShapeMismatch, "type labels must agree");
    }
    if lo.alpha_eq(t) && hi.alpha_eq(t) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "bounds must equal the alias")
    }
}

fn def_labels(d: &Def) -> (Vec<&crate::syntax::TermLabel>, Vec<&crate::syntax::TypeLabel>) {
    let mut terms = Vec::new();
    let mut types = Vec::new();
    for leaf in d.conjuncts() {
        match leaf {
            Def::Fld(a, _) => terms.push(a),
            Def::Typ(a, _) => types.push(a),
            Def::And(_, _) => unreachable!("conjuncts are leaves"),
        }
    }
    (terms, types)
}

fn check_anddef_i(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, defs, ty) = as_defs(concl);
    let (d1, d2) = match defs {
        Def::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "definition must be an aggregate"),
    };
    let (t1, t2) = match ty {
        Type::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "type must be an intersection"),
    };
    for (p, d, t, what) in [(p1, d1, t1, "left"), (p2, d2, t2, "right")] {
        let (c, pd, pt) = as_defs(p);
        let mut env = env_between(c, ctx)?;
        if !(pd.alpha_eq_in(d, &mut env) && pt.alpha_eq_in(t, &mut env)) {
            return fail(
                Reason::ShapeMismatch,
                format!("{what} premise must type the {what} definitions"),
            );
        }
    }
    let (tm1, ty1) = def_labels(d1);
    let (tm2, ty2) = def_labels(d2);
    if tm1.iter().any(|a| tm2.contains(a)) || ty1.iter().any(|a| ty2.contains(a)) {
        return fail(
            Reason::SideConditionFailed,
            "defined labels must be pairwise disjoint",
        );
    }
    Ok(())
}

// ---- invertible typing ------------------------------------------------------

fn check_inv_base(concl: &Judgment, p: &Judgment, want_var: bool) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    match (subject, want_var) {
        (Term::Var(_), true) | (Term::Val(_), false) => {}
        _ => {
            return fail(
                Reason::ShapeMismatch,
                "rule applies to the other subject form (variable vs value)",
            )
        }
    }
    let (c, s, t) = as_typ(p);
    let mut env = env_between(c, ctx)?;
    if s.alpha_eq_in(subject, &mut env) && t.alpha_eq_in(ty, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "premise must be the same judgment, precisely")
    }
}

fn subject_matches(rule: &str, subject: &Term) -> Check {
    let is_val_rule = rule.contains("-v-") || rule == "Val-##";
    match (subject, is_val_rule) {
        (Term::Val(_), true) | (Term::Var(_), false) => Ok(()),
        _ => fail(
            Reason::ShapeMismatch,
            "rule applies to the other subject form (variable vs value)",
        ),
    }
}

fn check_inv_fld(concl: &Judgment, p1: &Judgment, p2: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches("Fld-<:-##", subject)?;
    let (a, u) = match ty {
        Type::Fld(a, u) => (a, u),
        _ => return fail(Reason::ShapeMismatch, "type must be a field declaration"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(subject, &mut env1) {
        return fail(Reason::ShapeMismatch, "premise must type the same subject");
    }
    let t_inner = match t1 {
        Type::Fld(a1, t) if a1 == a => t,
        _ => return fail(Reason::ShapeMismatch, "premise type must declare the same field"),
    };
    let (c2, l2, r2) = as_sub(p2);
    let mut env21 = env_between(c2, c1)?;
    if !l2.alpha_eq_in(t_inner, &mut env21) {
        return fail(Reason::ShapeMismatch, "subtyping must start at the premise field type");
    }
    let mut env2 = env_between(c2, ctx)?;
    if !r2.alpha_eq_in(u, &mut env2) {
        return fail(Reason::ShapeMismatch, "subtyping must end at the conclusion field type");
    }
    Ok(())
}

fn check_inv_typ(concl: &Judgment, p1: &Judgment, p2: &Judgment, p3: &Judgment) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches("Typ-<:-##", subject)?;
    let (a, lo, hi) = match ty {
        Type::TypDec(a, lo, hi) => (a, lo, hi),
        _ => return fail(Reason::ShapeMismatch, "type must be a type declaration"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(subject, &mut env1) {
        return fail(Reason::ShapeMismatch, "premise must type the same subject");
    }
    let (t_in, u_in) = match t1 {
        Type::TypDec(a1, t, u) if a1 == a => (t, u),
        _ => return fail(Reason::ShapeMismatch, "premise must declare the same type member"),
    };
    // lower bound: T' <: T, contravariant
    let (c2, l2, r2) = as_sub(p2);
    let mut env2c = env_between(c2, ctx)?;
    let mut env21 = env_between(c2, c1)?;
    if !(l2.alpha_eq_in(lo, &mut env2c) && r2.alpha_eq_in(t_in, &mut env21)) {
        return fail(Reason::ShapeMismatch, "lower-bound premise mismatched");
    }
    // upper bound: U <: U', covariant
    let (c3, l3, r3) = as_sub(p3);
    let mut env3c = env_between(c3, ctx)?;
    let mut env31 = env_between(c3, c1)?;
    if !(l3.alpha_eq_in(u_in, &mut env31) && r3.alpha_eq_in(hi, &mut env3c)) {
        return fail(Reason::ShapeMismatch, "upper-bound premise mismatched");
    }
    Ok(())
}

fn check_inv_all(
    concl: &Judgment,
    p1: &Judgment,
    p2: &Judgment,
    p3: &Judgment,
    rule: &str,
) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches(rule, subject)?;
    let (z2, s_new, t_new) = match ty {
        Type::All(z, s, t) => (z, s, t),
        _ => return fail(Reason::ShapeMismatch, "type must be a function type"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(subject, &mut env1) {
        return fail(Reason::ShapeMismatch, "premise must type the same subject");
    }
    let (z1, s_old, t_old) = match t1 {
        Type::All(z, s, t) => (z, s, t),
        _ => return fail(Reason::ShapeMismatch, "premise type must be a function type"),
    };
    // domain: S' <: S
    let (c2, l2, r2) = as_sub(p2);
    let mut env2c = env_between(c2, ctx)?;
    let mut env21 = env_between(c2, c1)?;
    if !(l2.alpha_eq_in(s_new, &mut env2c) && r2.alpha_eq_in(s_old, &mut env21)) {
        return fail(Reason::ShapeMismatch, "domain premise mismatched");
    }
    // codomain in the extended context: T <: T'
    let (c3, l3, r3) = as_sub(p3);
    let (_, yp, syp) = env_extended(c3, ctx)?;
    let prefix = Context::from_bindings(c3.bindings()[..ctx.len()].to_vec())
        .expect("prefix of a valid context");
    let mut env3c = env_between(&prefix, ctx)?;
    if !syp.alpha_eq_in(s_new, &mut env3c) {
        return fail(
            Reason::ContextMismatch,
            "codomain premise must bind the fresh variable at the narrower domain",
        );
    }
    let mut env31 = env_between(&prefix, c1)?;
    env31.push(yp.clone(), z1.clone());
    if !l3.alpha_eq_in(t_old, &mut env31) {
        return fail(Reason::ShapeMismatch, "codomain premise must start at the old codomain");
    }
    env3c.push(yp.clone(), z2.clone());
    if !r3.alpha_eq_in(t_new, &mut env3c) {
        return fail(Reason::ShapeMismatch, "codomain premise must end at the new codomain");
    }
    Ok(())
}

fn check_inv_and(concl: &Judgment, p1: &Judgment, p2: &Judgment, rule: &str) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches(rule, subject)?;
    let (l, r) = match ty {
        Type::And(l, r) => (l, r),
        _ => return fail(Reason::ShapeMismatch, "type must be an intersection"),
    };
    for (p, side, what) in [(p1, l, "left"), (p2, r, "right")] {
        let (c, s, t) = as_typ(p);
        let mut env = env_between(c, ctx)?;
        if !s.alpha_eq_in(subject, &mut env) {
            return fail(Reason::ShapeMismatch, "premise must type the same subject");
        }
        if !t.alpha_eq_in(side, &mut env) {
            return fail(
                Reason::ShapeMismatch,
                format!("{what} premise type must be the {what} conjunct"),
            );
        }
    }
    Ok(())
}

fn check_inv_sel(concl: &Judgment, p1: &Judgment, p2: &Judgment, rule: &str) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches(rule, subject)?;
    let (y, a) = match ty {
        Type::Sel(y, a) => (y, a),
        _ => return fail(Reason::ShapeMismatch, "type must be a type projection"),
    };
    let (c1, s1, t1) = as_typ(p1);
    let mut env1 = env_between(c1, ctx)?;
    if !s1.alpha_eq_in(subject, &mut env1) {
        return fail(Reason::ShapeMismatch, "premise must type the same subject");
    }
    let (c2, s2, t2) = as_typ(p2);
    let env2 = env_between(c2, ctx)?;
    match s2 {
        Term::Var(y2) if env2.var_eq(y2, y) => {}
        _ => return fail(Reason::ShapeMismatch, "precise premise must type the projection receiver"),
    }
    let (a2, lo, hi) = match t2 {
        Type::TypDec(a2, lo, hi) => (a2, lo, hi),
        _ => return fail(Reason::ShapeMismatch, "precise premise must be a type declaration"),
    };
    if a2 != a {
        return fail(Reason::ShapeMismatch, "declaration label must match the projection");
    }
    if !lo.alpha_eq(hi) {
        return fail(Reason::SideConditionFailed, "declaration bounds must be tight");
    }
    let mut env21 = env_between(c2, c1)?;
    if lo.alpha_eq_in(t1, &mut env21) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "subject type must equal the declaration bound")
    }
}

fn check_inv_top(concl: &Judgment, p: &Judgment, rule: &str) -> Check {
    let (ctx, subject, ty) = as_typ(concl);
    subject_matches(rule, subject)?;
    if !matches!(ty, Type::Top) {
        return fail(Reason::ShapeMismatch, "type must be Top");
    }
    let (c, s, _) = as_typ(p);
    let mut env = env_between(c, ctx)?;
    if s.alpha_eq_in(subject, &mut env) {
        Ok(())
    } else {
        fail(Reason::ShapeMismatch, "premise must type the same subject")
    }
}
