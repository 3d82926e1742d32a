//! Seeded random generators for fuzzing: arbitrary ASTs, inert contexts,
//! well-formed values, and derivable typing goals. Everything is driven
//! by one `StdRng` so runs reproduce from a seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::proof::{search_typ, SearchConfig};
use crate::rules::judgment::Derivation;
use crate::rules::precise::precise_types_of_var;
use crate::syntax::{Context, Def, Term, TermLabel, Type, TypeLabel, Value, VarName};

pub struct Gen {
    rng: StdRng,
    next_label: usize,
}

const NAMES: &[&str] = &["x", "y", "z", "s", "w"];
const TERM_LABELS: &[&str] = &["a", "b", "c"];
const TYPE_LABELS: &[&str] = &["A", "B", "C"];

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            next_label: 0,
        }
    }

    fn name(&mut self) -> String {
        NAMES[self.rng.gen_range(0..NAMES.len())].to_string()
    }

    fn term_label(&mut self) -> TermLabel {
        TermLabel(TERM_LABELS[self.rng.gen_range(0..TERM_LABELS.len())].to_string())
    }

    fn type_label(&mut self) -> TypeLabel {
        TypeLabel(TYPE_LABELS[self.rng.gen_range(0..TYPE_LABELS.len())].to_string())
    }

    // a globally fresh numbered label, for records with distinct members
    fn fresh_term_label(&mut self) -> TermLabel {
        self.next_label += 1;
        TermLabel(format!("a{}", self.next_label))
    }

    fn fresh_type_label(&mut self) -> TypeLabel {
        self.next_label += 1;
        TypeLabel(format!("A{}", self.next_label))
    }

    fn pick_var(&mut self, vars: &[VarName]) -> Option<VarName> {
        if vars.is_empty() {
            None
        } else {
            Some(vars[self.rng.gen_range(0..vars.len())].clone())
        }
    }

    /// An arbitrary type whose free variables come from `vars`.
    pub fn ty(&mut self, vars: &mut Vec<VarName>, depth: usize) -> Type {
        if depth == 0 {
            return if self.rng.gen_bool(0.7) {
                Type::Top
            } else {
                Type::Bot
            };
        }
        match self.rng.gen_range(0..9) {
            0 => Type::Top,
            1 => Type::Bot,
            2 => {
                let x = VarName::fresh(self.name());
                let dom = self.ty(vars, depth - 1);
                vars.push(x.clone());
                let cod = self.ty(vars, depth - 1);
                vars.pop();
                Type::all(x, dom, cod)
            }
            3 => {
                let x = VarName::fresh(self.name());
                vars.push(x.clone());
                let body = self.ty(vars, depth - 1);
                vars.pop();
                Type::rec(x, body)
            }
            4 => {
                let a = self.term_label();
                Type::fld(a, self.ty(vars, depth - 1))
            }
            5 => {
                let a = self.type_label();
                let lo = self.ty(vars, depth - 1);
                let hi = self.ty(vars, depth - 1);
                Type::typ_dec(a, lo, hi)
            }
            6 => match self.pick_var(vars) {
                Some(x) => Type::Sel(x, self.type_label()),
                None => Type::Top,
            },
            _ => Type::and(self.ty(vars, depth - 1), self.ty(vars, depth - 1)),
        }
    }

    /// An arbitrary ANF term whose free variables come from `vars`.
    pub fn term(&mut self, vars: &mut Vec<VarName>, depth: usize) -> Term {
        let has_vars = !vars.is_empty();
        if depth == 0 {
            return match self.pick_var(vars) {
                Some(x) => Term::Var(x),
                None => {
                    let x = VarName::fresh(self.name());
                    Term::lambda(x.clone(), Type::Top, Term::Var(x))
                }
            };
        }
        let choice = self.rng.gen_range(0..6);
        match choice {
            0 if has_vars => Term::Var(self.pick_var(vars).unwrap()),
            1 => {
                let x = VarName::fresh(self.name());
                let ann = self.ty(vars, depth - 1);
                vars.push(x.clone());
                let body = self.term(vars, depth - 1);
                vars.pop();
                Term::lambda(x, ann, body)
            }
            2 => {
                let x = VarName::fresh(self.name());
                vars.push(x.clone());
                let n = self.rng.gen_range(1..=3);
                let members: Vec<_> = (0..n).map(|_| self.decl_and_def(vars)).collect();
                vars.pop();
                let (record, defs) = assemble(members);
                Term::nu(x, record, defs)
            }
            3 if has_vars => Term::SelTrm(self.pick_var(vars).unwrap(), self.term_label()),
            4 if has_vars => Term::App(
                self.pick_var(vars).unwrap(),
                self.pick_var(vars).unwrap(),
            ),
            _ => {
                let x = VarName::fresh(self.name());
                let rhs = self.term(vars, depth - 1);
                vars.push(x.clone());
                let body = self.term(vars, depth - 1);
                vars.pop();
                Term::let_in(x, rhs, body)
            }
        }
    }

    // one declaration with a matching definition, fresh label, tight bounds
    fn decl_and_def(&mut self, vars: &mut Vec<VarName>) -> (Type, Def) {
        if self.rng.gen_bool(0.5) {
            let a = self.fresh_term_label();
            let t = self.ty(vars, 1);
            let body = self.term(vars, 1);
            (Type::fld(a.clone(), t), Def::Fld(a, body))
        } else {
            let a = self.fresh_type_label();
            let u = self.ty(vars, 1);
            (
                Type::typ_dec(a.clone(), u.clone(), u.clone()),
                Def::Typ(a, u),
            )
        }
    }

    /// A well-formed value: a lambda, or an object whose annotation is an
    /// inert record with definitions matching every declaration.
    pub fn wf_value(&mut self, depth: usize) -> Value {
        if self.rng.gen_bool(0.5) {
            let x = VarName::fresh(self.name());
            let mut vars = vec![x.clone()];
            let ann = self.ty(&mut Vec::new(), depth);
            let body = self.term(&mut vars, depth);
            Value::Lambda(x, ann, Box::new(body))
        } else {
            let s = VarName::fresh(self.name());
            let mut vars = vec![s.clone()];
            let n = self.rng.gen_range(1..=4);
            let members: Vec<_> = (0..n).map(|_| self.decl_and_def(&mut vars)).collect();
            let (record, defs) = assemble(members);
            Value::Nu(s, record, defs)
        }
    }

    /// An inert record body over the self variable, with `n` members.
    pub fn inert_record(&mut self, self_var: &VarName, n: usize) -> Type {
        let mut vars = vec![self_var.clone()];
        let decls: Vec<Type> = (0..n.max(1))
            .map(|_| {
                if self.rng.gen_bool(0.5) {
                    Type::fld(self.fresh_term_label(), self.ty(&mut vars, 2))
                } else {
                    let u = self.ty(&mut vars, 2);
                    Type::typ_dec(self.fresh_type_label(), u.clone(), u)
                }
            })
            .collect();
        decls
            .into_iter()
            .rev()
            .reduce(|acc, d| Type::and(d, acc))
            .expect("at least one member")
    }

    /// An inert binding type: a function type or a recursive record.
    pub fn inert_binding(&mut self) -> Type {
        if self.rng.gen_bool(0.4) {
            let x = VarName::fresh(self.name());
            let dom = self.ty(&mut Vec::new(), 2);
            let mut vars = vec![x.clone()];
            let cod = self.ty(&mut vars, 2);
            Type::all(x, dom, cod)
        } else {
            let s = VarName::fresh(self.name());
            let n = self.rng.gen_range(1..=3);
            let body = self.inert_record(&s, n);
            Type::rec(s, body)
        }
    }

    /// An inert context of `n` bindings.
    pub fn inert_context(&mut self, n: usize) -> Context {
        let mut ctx = Context::empty();
        for i in 0..n {
            let ty = self.inert_binding();
            ctx.push(VarName::fresh(format!("v{i}")), ty)
                .expect("numbered binders are distinct");
        }
        ctx
    }

    /// A random supertype of `t`, reachable by the structural rules.
    pub fn widen(&mut self, t: &Type) -> Type {
        if self.rng.gen_bool(0.15) {
            return Type::Top;
        }
        match t {
            Type::And(a, b) => {
                if self.rng.gen_bool(0.4) {
                    let keep = if self.rng.gen_bool(0.5) { a } else { b };
                    self.widen(keep)
                } else {
                    Type::and(self.widen(a), self.widen(b))
                }
            }
            Type::Fld(a, u) => Type::fld(a.clone(), self.widen(u)),
            Type::TypDec(a, lo, hi) => {
                Type::typ_dec(a.clone(), self.narrow(lo), self.widen(hi))
            }
            Type::All(x, s, u) => Type::all(x.clone(), self.narrow(s), self.widen(u)),
            other => other.clone(),
        }
    }

    /// A random subtype of `t`, dual to `widen`.
    pub fn narrow(&mut self, t: &Type) -> Type {
        if self.rng.gen_bool(0.15) {
            return Type::Bot;
        }
        match t {
            Type::And(a, b) => Type::and(self.narrow(a), self.narrow(b)),
            Type::Fld(a, u) => Type::fld(a.clone(), self.narrow(u)),
            Type::TypDec(a, lo, hi) => {
                Type::typ_dec(a.clone(), self.widen(lo), self.narrow(hi))
            }
            Type::All(x, s, u) => Type::all(x.clone(), self.widen(s), self.narrow(u)),
            other => other.clone(),
        }
    }

    /// A valid general derivation in `ctx`: a variable, value, or let
    /// subject typed at a widened target, produced via bounded search.
    pub fn derivable_typing(
        &mut self,
        ctx: &Context,
        cfg: &SearchConfig,
    ) -> Option<Derivation> {
        match self.rng.gen_range(0..3) {
            0 if !ctx.is_empty() => {
                let idx = self.rng.gen_range(0..ctx.len());
                let x = ctx.bindings()[idx].0.clone();
                let closure = precise_types_of_var(ctx, &x);
                let entry = &closure[self.rng.gen_range(0..closure.len())];
                let target = self.widen(&entry.ty);
                search_typ(ctx, &Term::Var(x), Some(&target), cfg)
            }
            1 => {
                let v = self.wf_value(1);
                search_typ(ctx, &Term::Val(Box::new(v)), None, cfg)
            }
            _ => {
                let x = VarName::fresh(self.name());
                let v = self.wf_value(1);
                let t = Term::let_in(x.clone(), Term::Val(Box::new(v)), Term::Var(x));
                search_typ(ctx, &t, None, cfg)
            }
        }
    }
}


// folds members into a right-nested record type and definition list,
// the shape the surface syntax produces
fn assemble(members: Vec<(Type, Def)>) -> (Type, Def) {
    let (mut record, mut defs) = members
        .last()
        .cloned()
        .expect("objects have at least one member");
    for (decl, def) in members.into_iter().rev().skip(1) {
        record = Type::and(decl, record);
        defs = Def::And(Box::new(def), Box::new(defs));
    }
    (record, defs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inert::is_inert_type;
    use crate::proof::general_to_tight;
    use crate::rules::validate::validate;
    use crate::syntax::Syntax;

    #[test]
    fn generated_inert_contexts_are_inert() {
        let mut g = Gen::new(1);
        for _ in 0..50 {
            let ctx = g.inert_context(3);
            for (_, ty) in ctx.bindings() {
                assert!(is_inert_type(ty, false).inert, "{ty:?}");
            }
        }
    }

    #[test]
    fn widening_is_always_derivable() {
        let mut g = Gen::new(2);
        let cfg = SearchConfig::default();
        for _ in 0..100 {
            let t = g.ty(&mut Vec::new(), 3);
            let w = g.widen(&t);
            let d = crate::proof::search_sub(&Context::empty(), &t, &w, &cfg)
                .unwrap_or_else(|| panic!("{t:?} <: {w:?}"));
            validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
        }
    }

    #[test]
    fn derivable_typings_validate_and_tighten() {
        let mut g = Gen::new(3);
        let cfg = SearchConfig::default();
        let mut produced = 0;
        for _ in 0..60 {
            let ctx = g.inert_context(2);
            if let Some(d) = g.derivable_typing(&ctx, &cfg) {
                validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
                let t = general_to_tight(&d).unwrap_or_else(|e| panic!("{e:?}"));
                validate(&t).unwrap_or_else(|e| panic!("{e:?}"));
                match (&d.conclusion, &t.conclusion) {
                    (
                        crate::rules::judgment::Judgment::Typ { ty: a, .. },
                        crate::rules::judgment::Judgment::Typ { ty: b, .. },
                    ) => assert!(a.alpha_eq(b)),
                    _ => panic!("typing conclusions expected"),
                }
                produced += 1;
            }
        }
        assert!(produced >= 40, "only {produced} goals were derivable");
    }
}
