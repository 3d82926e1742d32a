//! Pretty-printer for the surface syntax. Inverts the parser up to
//! alpha-equivalence: binders whose display name would capture a variable
//! that is free in their scope are renamed deterministically.

use std::collections::BTreeSet;

use crate::rules::judgment::{Judgment, SubSystem, TypSystem};
use crate::syntax::{Context, Def, Syntax, Term, Type, Value, VarName};

pub fn print_type(t: &Type) -> String {
    Pr::new().ty(t)
}

pub fn print_term(t: &Term) -> String {
    Pr::new().term(t)
}

pub fn print_defs(d: &Def) -> String {
    Pr::new().defs(d)
}

pub fn print_context(ctx: &Context) -> String {
    Pr::for_names(free_names_of_ctx(ctx))
        .ctx_entries(ctx)
        .join("; ")
}

/// Renders a judgment as `ctx |- ...` with the turnstile marking the
/// system: `|-` general, `|-#` tight, `|-!` precise, `|-##` invertible,
/// `|-d` definition typing.
pub fn print_judgment(j: &Judgment) -> String {
    let mut pr = Pr::for_names(judgment_free_names(j));
    let ctx = pr.ctx_entries(j.ctx()).join("; ");
    let body = match j {
        Judgment::Typ {
            system,
            subject,
            ty,
            ..
        } => {
            let stile = match system {
                TypSystem::General => "|-",
                TypSystem::Tight => "|-#",
                TypSystem::Precise => "|-!",
                TypSystem::Invertible => "|-##",
            };
            format!("{stile} {} : {}", pr.term(subject), pr.ty(ty))
        }
        Judgment::Subtyp {
            system, lhs, rhs, ..
        } => {
            let stile = match system {
                SubSystem::General => "|-",
                SubSystem::Tight => "|-#",
            };
            format!("{stile} {} <: {}", pr.ty(lhs), pr.ty(rhs))
        }
        Judgment::Defs { defs, ty, .. } => {
            format!("|-d {} : {}", pr.defs(defs), pr.ty(ty))
        }
    };
    if ctx.is_empty() {
        body
    } else {
        format!("{ctx} {body}")
    }
}

fn free_names_of_ctx(ctx: &Context) -> BTreeSet<String> {
    let mut binders = BTreeSet::new();
    let mut frees = BTreeSet::new();
    for (x, t) in ctx.bindings() {
        binders.insert(x.clone());
        frees.extend(t.free_vars());
    }
    frees
        .into_iter()
        .filter(|v| !binders.contains(v))
        .map(|v| v.name)
        .collect()
}

pub(crate) fn judgment_free_names(j: &Judgment) -> BTreeSet<String> {
    let mut binders = BTreeSet::new();
    let mut frees = BTreeSet::new();
    for (x, t) in j.ctx().bindings() {
        binders.insert(x.clone());
        frees.extend(t.free_vars());
    }
    match j {
        Judgment::Typ { subject, ty, .. } => {
            frees.extend(subject.free_vars());
            frees.extend(ty.free_vars());
        }
        Judgment::Subtyp { lhs, rhs, .. } => {
            frees.extend(lhs.free_vars());
            frees.extend(rhs.free_vars());
        }
        Judgment::Defs { defs, ty, .. } => {
            frees.extend(defs.free_vars());
            frees.extend(ty.free_vars());
        }
    }
    frees
        .into_iter()
        .filter(|v| !binders.contains(v))
        .map(|v| v.name)
        .collect()
}

/// The printer proper. `scope` maps in-scope variables (by uid) to their
/// chosen display names; `avoid` holds names of genuinely free variables
/// that context binders must not shadow.
pub(crate) struct Pr {
    scope: Vec<(VarName, String)>,
    avoid: BTreeSet<String>,
}

impl Pr {
    pub(crate) fn new() -> Self {
        Pr {
            scope: Vec::new(),
            avoid: BTreeSet::new(),
        }
    }

    pub(crate) fn for_names(avoid: BTreeSet<String>) -> Self {
        Pr {
            scope: Vec::new(),
            avoid,
        }
    }

    fn display(&self, x: &VarName) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(v, _)| v == x)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| x.name.clone())
    }

    /// Picks a display name for a binder and pushes it into scope. The
    /// name is renamed if it would clash with the display of a variable
    /// occurring free in the binder's scope.
    fn bind<S: Syntax>(&mut self, x: &VarName, body: &S) -> String {
        let fv = body.free_vars();
        let clashes = |cand: &str| {
            fv.iter()
                .any(|v| v != x && self.display(v) == cand)
        };
        let base = if x.name.is_empty() { "x" } else { &x.name };
        let mut cand = base.to_string();
        let mut n = 0;
        while clashes(&cand) {
            n += 1;
            cand = format!("{base}{n}");
        }
        self.scope.push((x.clone(), cand.clone()));
        cand
    }

    /// Like `bind`, but for context entries: the name must additionally be
    /// distinct from other in-scope names and from every free name used by
    /// the surrounding judgment.
    fn bind_ctx<S: Syntax>(&mut self, x: &VarName, body: &S) -> String {
        let fv = body.free_vars();
        let clashes = |cand: &str| {
            fv.iter().any(|v| v != x && self.display(v) == cand)
                || self.scope.iter().any(|(_, n)| n == cand)
                || self.avoid.contains(cand)
        };
        let base = if x.name.is_empty() { "x" } else { &x.name };
        let mut cand = base.to_string();
        let mut n = 0;
        while clashes(&cand) {
            n += 1;
            cand = format!("{base}{n}");
        }
        self.scope.push((x.clone(), cand.clone()));
        cand
    }

    fn unbind(&mut self) {
        self.scope.pop();
    }

    pub(crate) fn ty(&mut self, t: &Type) -> String {
        match t {
            Type::Top => "Top".to_string(),
            Type::Bot => "Bot".to_string(),
            Type::All(x, s, u) => {
                let dom = self.ty(s);
                let name = self.bind(x, u.as_ref());
                let cod = self.ty(u);
                self.unbind();
                format!("all({name}: {dom}) {cod}")
            }
            Type::Rec(x, b) => {
                let name = self.bind(x, b.as_ref());
                let body = self.ty(b);
                self.unbind();
                format!("mu({name}: {body})")
            }
            Type::Fld(a, t) => format!("{{{a}: {}}}", self.ty(t)),
            Type::TypDec(a, lo, hi) => {
                format!("{{{a}: {} .. {}}}", self.ty(lo), self.ty(hi))
            }
            Type::Sel(x, a) => format!("{}.{a}", self.display(x)),
            Type::And(l, r) => {
                // the left operand must not swallow the '&'
                let ls = self.ty(l);
                let ls = match l.as_ref() {
                    Type::All(_, _, _) | Type::Rec(_, _) | Type::And(_, _) => format!("({ls})"),
                    _ => ls,
                };
                format!("{ls} & {}", self.ty(r))
            }
        }
    }

    pub(crate) fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Var(x) => self.display(x),
            Term::Val(v) => self.value(v),
            Term::SelTrm(x, a) => format!("{}.{a}", self.display(x)),
            Term::App(f, y) => format!("{} {}", self.display(f), self.display(y)),
            Term::Let(x, rhs, body) => {
                let rhs_s = self.term(rhs);
                let name = self.bind(x, body.as_ref());
                let body_s = self.term(body);
                self.unbind();
                format!("let {name} = {rhs_s} in {body_s}")
            }
        }
    }

    fn value(&mut self, v: &Value) -> String {
        match v {
            Value::Lambda(x, ann, body) => {
                let ann_s = self.ty(ann);
                let name = self.bind(x, body.as_ref());
                let body_s = self.term(body);
                self.unbind();
                format!("lambda({name}: {ann_s}) {body_s}")
            }
            Value::Nu(x, ann, defs) => {
                let pair = (ann.clone(), defs.clone());
                let name = self.bind(x, &pair);
                let ann_s = self.ty(ann);
                let defs_s = self.defs(defs);
                self.unbind();
                format!("nu({name}: {ann_s}) {defs_s}")
            }
        }
    }

    pub(crate) fn defs(&mut self, d: &Def) -> String {
        d.conjuncts()
            .iter()
            .map(|leaf| match leaf {
                Def::Fld(a, t) => format!("{{{a} = {}}}", self.term(t)),
                Def::Typ(a, t) => format!("{{{a} = {}}}", self.ty(t)),
                Def::And(_, _) => unreachable!("conjuncts are leaves"),
            })
            .collect::<Vec<_>>()
            .join(" /\\ ")
    }

    pub(crate) fn ctx_entries(&mut self, ctx: &Context) -> Vec<String> {
        let mut out = Vec::new();
        for (x, t) in ctx.bindings() {
            // the binding may mention its own variable
            let name = self.bind_ctx(x, t);
            let ty = self.ty(t);
            out.push(format!("{name}: {ty}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::{parse_term, parse_term_with, parse_type, parse_type_with};
    use crate::surface::Resolver;
    use crate::syntax::{TermLabel, TypeLabel};

    fn roundtrip_ty(t: &Type) {
        let printed = print_type(t);
        let mut r = Resolver::seeded(t.free_vars());
        let back = parse_type_with(&printed, &mut r)
            .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
        assert!(back.alpha_eq(t), "{printed} reparsed to a different type");
    }

    fn roundtrip_tm(t: &Term) {
        let printed = print_term(t);
        let mut r = Resolver::seeded(t.free_vars());
        let back = parse_term_with(&printed, &mut r)
            .unwrap_or_else(|e| panic!("reparse of {printed:?} failed: {e}"));
        assert!(back.alpha_eq(t), "{printed} reparsed to a different term");
    }

    #[test]
    fn roundtrips_basic_types() {
        for src in [
            "Top",
            "Bot",
            "all(x: Top) x.A",
            "mu(x: {a: x.A})",
            "{A: Bot .. Top}",
            "Top & {a: Bot} & {B: Top .. Top}",
            "(Top & Bot) & Top",
            "(all(x: Top) Top) & Bot",
        ] {
            roundtrip_ty(&parse_type(src).unwrap());
        }
    }

    #[test]
    fn roundtrips_basic_terms() {
        for src in [
            "x",
            "x.a",
            "x y",
            "let x = y in x x",
            "lambda(x: Top) x",
            "nu(s: {A: Bot .. Top}) {A = Top}",
            "let f = lambda(x: Top) x in f f",
        ] {
            roundtrip_tm(&parse_term(src).unwrap());
        }
    }

    #[test]
    fn shadowing_binder_is_renamed() {
        // all(x': Top) all(x: x'.A) x'.B with both binders named "x"
        let x_outer = VarName::fresh("x");
        let x_inner = VarName::fresh("x");
        let t = Type::all(
            x_outer.clone(),
            Type::Top,
            Type::all(
                x_inner,
                Type::Sel(x_outer.clone(), TypeLabel("A".into())),
                Type::Sel(x_outer, TypeLabel("B".into())),
            ),
        );
        roundtrip_ty(&t);
    }

    #[test]
    fn binder_colliding_with_free_var_is_renamed() {
        // mu(x: {a: x0.A}) where the free variable is also displayed "x"
        let free = VarName::fresh("x");
        let binder = VarName::fresh("x");
        let t = Type::rec(
            binder,
            Type::fld(
                TermLabel("a".into()),
                Type::Sel(free.clone(), TypeLabel("A".into())),
            ),
        );
        let printed = print_type(&t);
        let mut r = Resolver::seeded([free.clone()]);
        let back = parse_type_with(&printed, &mut r).unwrap();
        assert!(back.alpha_eq(&t));
        assert!(back.free_vars().contains(&free));
    }

    #[test]
    fn context_printing_roundtrips() {
        use crate::surface::parser::parse_context;
        let ctx = parse_context("x: Top; y: mu(z: {a: x.A} & {b: y.B})").unwrap();
        let printed = print_context(&ctx);
        let reparsed = parse_context(&printed).unwrap();
        assert!(ctx.alpha_eq(&reparsed));
    }
}
