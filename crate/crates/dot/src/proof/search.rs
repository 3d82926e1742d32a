//! Bounded derivation search: iterative deepening over the general rules
//! with a fixed rule order, a finite pool of transitivity middles, and
//! memoized failures. Not-found is a normal result, never a proof of
//! untypeability.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::embed::precise_var_to_general;
use crate::rules::judgment::{Derivation, Judgment, SubSystem, TypSystem};
use crate::rules::precise::{precise_decls_of_var, precise_types_of_var};
use crate::syntax::{Context, Def, Syntax, Term, Type, Value, VarName};

/// Limits for the bounded search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum subtyping derivation depth explored per query.
    pub max_depth: usize,
    /// Total node expansions across the whole search.
    pub node_budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 8,
            node_budget: 200_000,
        }
    }
}

/// Searches for a general subtyping derivation of `Γ |- lhs <: rhs`.
pub fn search_sub(ctx: &Context, lhs: &Type, rhs: &Type, cfg: &SearchConfig) -> Option<Derivation> {
    let mut s = Search::new(cfg);
    s.sub_query(ctx, lhs, rhs)
}

/// Searches for a general typing of `t`, at `target` when given.
pub fn search_typ(
    ctx: &Context,
    t: &Term,
    target: Option<&Type>,
    cfg: &SearchConfig,
) -> Option<Derivation> {
    let mut s = Search::new(cfg);
    s.typ(ctx, t, target)
}

/// Infers some type for `t`, returning it with its derivation.
pub fn infer_type(ctx: &Context, t: &Term, cfg: &SearchConfig) -> Option<(Type, Derivation)> {
    let d = search_typ(ctx, t, None, cfg)?;
    match &d.conclusion {
        Judgment::Typ { ty, .. } => Some((ty.clone(), d)),
        _ => None,
    }
}

struct Search<'a> {
    cfg: &'a SearchConfig,
    budget: usize,
    // canonical (ctx, lhs, rhs) keys mapped to the depth that failed
    memo: HashMap<String, usize>,
}

fn gen_sub(ctx: &Context, lhs: &Type, rhs: &Type) -> Judgment {
    Judgment::subtyp(SubSystem::General, ctx.clone(), lhs.clone(), rhs.clone())
}

fn gen_typ(ctx: &Context, t: &Term, ty: &Type) -> Judgment {
    Judgment::typ(TypSystem::General, ctx.clone(), t.clone(), ty.clone())
}

impl<'a> Search<'a> {
    fn new(cfg: &'a SearchConfig) -> Self {
        Search {
            cfg,
            budget: cfg.node_budget,
            memo: HashMap::new(),
        }
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    // iterative deepening entry point for one subtyping query
    fn sub_query(&mut self, ctx: &Context, lhs: &Type, rhs: &Type) -> Option<Derivation> {
        for depth in 1..=self.cfg.max_depth {
            if let Some(d) = self.sub(ctx, lhs, rhs, depth) {
                return Some(d);
            }
        }
        None
    }

    fn sub(&mut self, ctx: &Context, lhs: &Type, rhs: &Type, depth: usize) -> Option<Derivation> {
        if depth == 0 || !self.spend() {
            return None;
        }
        let key = sub_key(ctx, lhs, rhs);
        if let Some(failed_at) = self.memo.get(&key) {
            if *failed_at >= depth {
                return None;
            }
        }
        let found = self.sub_rules(ctx, lhs, rhs, depth);
        if found.is_none() {
            let entry = self.memo.entry(key).or_insert(0);
            *entry = (*entry).max(depth);
        }
        found
    }

    fn sub_rules(
        &mut self,
        ctx: &Context,
        lhs: &Type,
        rhs: &Type,
        depth: usize,
    ) -> Option<Derivation> {
        if matches!(rhs, Type::Top) {
            return Some(Derivation::leaf("Top", gen_sub(ctx, lhs, rhs)));
        }
        if matches!(lhs, Type::Bot) {
            return Some(Derivation::leaf("Bot", gen_sub(ctx, lhs, rhs)));
        }
        if lhs.alpha_eq(rhs) {
            return Some(Derivation::leaf("Refl", gen_sub(ctx, lhs, rhs)));
        }
        if let (Type::Fld(a1, t1), Type::Fld(a2, t2)) = (lhs, rhs) {
            if a1 == a2 {
                if let Some(p) = self.sub(ctx, t1, t2, depth - 1) {
                    return Some(Derivation::new("Fld-<:-Fld", gen_sub(ctx, lhs, rhs), vec![p]));
                }
            }
        }
        if let (Type::TypDec(a1, lo1, hi1), Type::TypDec(a2, lo2, hi2)) = (lhs, rhs) {
            if a1 == a2 {
                if let Some(pl) = self.sub(ctx, lo2, lo1, depth - 1) {
                    if let Some(ph) = self.sub(ctx, hi1, hi2, depth - 1) {
                        return Some(Derivation::new(
                            "Typ-<:-Typ",
                            gen_sub(ctx, lhs, rhs),
                            vec![pl, ph],
                        ));
                    }
                }
            }
        }
        if let (Type::All(x1, s1, t1), Type::All(x2, s2, t2)) = (lhs, rhs) {
            if let Some(pd) = self.sub(ctx, s2, s1, depth - 1) {
                let w = x2.refreshed();
                let ctx_w = ctx
                    .extended(w.clone(), s2.as_ref().clone())
                    .expect("fresh parameter extends the context");
                if let Some(pc) =
                    self.sub(&ctx_w, &t1.subst_var(x1, &w), &t2.subst_var(x2, &w), depth - 1)
                {
                    return Some(Derivation::new(
                        "All-<:-All",
                        gen_sub(ctx, lhs, rhs),
                        vec![pd, pc],
                    ));
                }
            }
        }
        if let Type::And(a, b) = rhs {
            if let Some(pa) = self.sub(ctx, lhs, a, depth - 1) {
                if let Some(pb) = self.sub(ctx, lhs, b, depth - 1) {
                    return Some(Derivation::new("<:-And", gen_sub(ctx, lhs, rhs), vec![pa, pb]));
                }
            }
        }
        if let Type::And(a, b) = lhs {
            for (rule, conj) in [("And1-<:", a.as_ref()), ("And2-<:", b.as_ref())] {
                let leg = Derivation::leaf(rule, gen_sub(ctx, lhs, conj));
                if conj.alpha_eq(rhs) {
                    return Some(leg);
                }
                if let Some(rest) = self.sub(ctx, conj, rhs, depth - 1) {
                    return Some(Derivation::new("Trans", gen_sub(ctx, lhs, rhs), vec![leg, rest]));
                }
            }
        }
        if let Type::Sel(x, a) = rhs {
            for entry in precise_decls_of_var(ctx, x) {
                if let Type::TypDec(a1, lo, _) = &entry.ty {
                    if a1 != a {
                        continue;
                    }
                    let prem = precise_var_to_general(&entry.derivation)
                        .expect("precise closure entries embed");
                    let sel = Derivation::new("<:-Sel", gen_sub(ctx, lo, rhs), vec![prem]);
                    if lhs.alpha_eq(lo) {
                        return Some(sel);
                    }
                    if let Some(up) = self.sub(ctx, lhs, lo, depth - 1) {
                        return Some(Derivation::new("Trans", gen_sub(ctx, lhs, rhs), vec![up, sel]));
                    }
                }
            }
        }
        if let Type::Sel(x, a) = lhs {
            for entry in precise_decls_of_var(ctx, x) {
                if let Type::TypDec(a1, _, hi) = &entry.ty {
                    if a1 != a {
                        continue;
                    }
                    let prem = precise_var_to_general(&entry.derivation)
                        .expect("precise closure entries embed");
                    let sel = Derivation::new("Sel-<:", gen_sub(ctx, lhs, hi), vec![prem]);
                    if hi.alpha_eq(rhs) {
                        return Some(sel);
                    }
                    if let Some(down) = self.sub(ctx, hi, rhs, depth - 1) {
                        return Some(Derivation::new(
                            "Trans",
                            gen_sub(ctx, lhs, rhs),
                            vec![sel, down],
                        ));
                    }
                }
            }
        }
        // last resort: transitivity through the finite middle pool
        for mid in self.middle_pool(ctx, lhs, rhs) {
            if mid.alpha_eq(lhs) || mid.alpha_eq(rhs) {
                continue;
            }
            if let Some(p1) = self.sub(ctx, lhs, &mid, depth - 1) {
                if let Some(p2) = self.sub(ctx, &mid, rhs, depth - 1) {
                    return Some(Derivation::new("Trans", gen_sub(ctx, lhs, rhs), vec![p1, p2]));
                }
            }
        }
        None
    }

    // candidate middles: subterms of the context, the endpoints, Top, Bot,
    // projections and bounds of type members reachable by precise typing
    fn middle_pool(&self, ctx: &Context, lhs: &Type, rhs: &Type) -> Vec<Type> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let bound: BTreeSet<VarName> = ctx.bindings().iter().map(|(x, _)| x.clone()).collect();
        fn add(t: &Type, bound: &BTreeSet<VarName>, seen: &mut BTreeSet<String>, out: &mut Vec<Type>) {
            if !t.free_vars().is_subset(bound) {
                return;
            }
            if seen.insert(ty_key(t)) {
                out.push(t.clone());
            }
        }
        fn add_all(t: &Type, bound: &BTreeSet<VarName>, seen: &mut BTreeSet<String>, out: &mut Vec<Type>) {
            for s in subterms(t) {
                add(s, bound, seen, out);
            }
        }
        for (_, ty) in ctx.bindings() {
            add_all(ty, &bound, &mut seen, &mut out);
        }
        add_all(lhs, &bound, &mut seen, &mut out);
        add_all(rhs, &bound, &mut seen, &mut out);
        add(&Type::Top, &bound, &mut seen, &mut out);
        add(&Type::Bot, &bound, &mut seen, &mut out);
        for (x, _) in ctx.bindings() {
            for entry in precise_decls_of_var(ctx, x) {
                if let Type::TypDec(a, lo, hi) = &entry.ty {
                    add(&Type::Sel(x.clone(), a.clone()), &bound, &mut seen, &mut out);
                    add_all(lo, &bound, &mut seen, &mut out);
                    add_all(hi, &bound, &mut seen, &mut out);
                }
            }
        }
        out
    }

    // candidate function types for applications, from the same pool
    fn fun_candidates(&self, ctx: &Context, target: Option<&Type>) -> Vec<Type> {
        let extra = target.cloned().unwrap_or(Type::Top);
        self.middle_pool(ctx, &extra, &Type::Top)
            .into_iter()
            .filter(|t| matches!(t, Type::All(_, _, _)))
            .collect()
    }

    fn fld_candidates(&self, ctx: &Context, label: &crate::syntax::TermLabel) -> Vec<Type> {
        self.middle_pool(ctx, &Type::Top, &Type::Top)
            .into_iter()
            .filter(|t| matches!(t, Type::Fld(a, _) if a == label))
            .collect()
    }

    // the general typings a variable has by reading its binding, opening
    // recursive types and projecting intersections
    fn var_closure(&self, ctx: &Context, x: &VarName) -> Vec<(Type, Derivation)> {
        precise_types_of_var(ctx, x)
            .into_iter()
            .filter_map(|e| {
                let d = precise_var_to_general(&e.derivation).ok()?;
                Some((e.ty, d))
            })
            .collect()
    }

    // target-directed typing of a bare variable
    fn var_at(&mut self, ctx: &Context, x: &VarName, want: &Type, depth: usize) -> Option<Derivation> {
        if depth == 0 || !self.spend() {
            return None;
        }
        let closure = self.var_closure(ctx, x);
        for (ty, d) in &closure {
            if ty.alpha_eq(want) {
                return Some(d.clone());
            }
        }
        if let Type::Rec(z, body) = want {
            let opened = body.subst_var(z, x);
            if let Some(p) = self.var_at(ctx, x, &opened, depth - 1) {
                return Some(Derivation::new(
                    "Rec-I",
                    gen_typ(ctx, &Term::Var(x.clone()), want),
                    vec![p],
                ));
            }
        }
        if let Type::And(a, b) = want {
            if let Some(pa) = self.var_at(ctx, x, a, depth - 1) {
                if let Some(pb) = self.var_at(ctx, x, b, depth - 1) {
                    return Some(Derivation::new(
                        "And-I",
                        gen_typ(ctx, &Term::Var(x.clone()), want),
                        vec![pa, pb],
                    ));
                }
            }
        }
        for (ty, d) in &closure {
            if let Some(ds) = self.sub_query(ctx, ty, want) {
                return Some(Derivation::new(
                    "Sub",
                    gen_typ(ctx, &Term::Var(x.clone()), want),
                    vec![d.clone(), ds],
                ));
            }
        }
        None
    }

    // wraps a derivation with subsumption to reach the target, if any
    fn finish(&mut self, d: Derivation, target: Option<&Type>) -> Option<Derivation> {
        let target = match target {
            Some(t) => t,
            None => return Some(d),
        };
        let (ctx, subject, ty) = match &d.conclusion {
            Judgment::Typ {
                ctx, subject, ty, ..
            } => (ctx.clone(), subject.clone(), ty.clone()),
            _ => return None,
        };
        if ty.alpha_eq(target) {
            return Some(d);
        }
        let ds = self.sub_query(&ctx, &ty, target)?;
        Some(Derivation::new(
            "Sub",
            gen_typ(&ctx, &subject, target),
            vec![d, ds],
        ))
    }

    fn typ(&mut self, ctx: &Context, t: &Term, target: Option<&Type>) -> Option<Derivation> {
        if !self.spend() {
            return None;
        }
        match t {
            Term::Var(x) => match target {
                Some(want) => self.var_at(ctx, x, want, self.cfg.max_depth),
                None => {
                    let ty = ctx.lookup(x)?.clone();
                    Some(Derivation::leaf("Var", gen_typ(ctx, t, &ty)))
                }
            },
            Term::Val(v) => match v.as_ref() {
                Value::Lambda(x, ann, body) => self.typ_lambda(ctx, t, x, ann, body, target),
                Value::Nu(x, tself, defs) => self.typ_nu(ctx, t, x, tself, defs, target),
            },
            Term::Let(x, rhs, body) => {
                let dr = self.typ(ctx, rhs, None)?;
                let t1 = match &dr.conclusion {
                    Judgment::Typ { ty, .. } => ty.clone(),
                    _ => return None,
                };
                let (xb, body2) = if ctx.position(x).is_some() {
                    let xb = x.refreshed();
                    (xb.clone(), body.subst_var(x, &xb))
                } else {
                    (x.clone(), body.as_ref().clone())
                };
                let ctx2 = ctx.extended(xb.clone(), t1).ok()?;
                let mut db = self.typ(&ctx2, &body2, target)?;
                let mut u = match &db.conclusion {
                    Judgment::Typ { ty, .. } => ty.clone(),
                    _ => return None,
                };
                if target.is_none() && u.free_vars().contains(&xb) {
                    // escape of the bound variable: fall back to Top
                    db = self.typ(&ctx2, &body2, Some(&Type::Top))?;
                    u = Type::Top;
                }
                Some(Derivation::new("Let", gen_typ(ctx, t, &u), vec![dr, db]))
            }
            Term::App(f, y) => {
                let closure = self.var_closure(ctx, f);
                // direct function types first, then pool candidates by widening
                let mut candidates: Vec<Type> = closure
                    .iter()
                    .filter(|(ty, _)| matches!(ty, Type::All(_, _, _)))
                    .map(|(ty, _)| ty.clone())
                    .collect();
                candidates.extend(self.fun_candidates(ctx, target));
                for cand in candidates {
                    let (z, dom, cod) = match &cand {
                        Type::All(z, s, u) => (z, s.as_ref(), u.as_ref()),
                        _ => continue,
                    };
                    let mut df = None;
                    for (ty, d) in &closure {
                        if ty.alpha_eq(&cand) {
                            df = Some(d.clone());
                            break;
                        }
                        if let Some(ds) = self.sub_query(ctx, ty, &cand) {
                            df = Some(Derivation::new(
                                "Sub",
                                gen_typ(ctx, &Term::Var(f.clone()), &cand),
                                vec![d.clone(), ds],
                            ));
                            break;
                        }
                    }
                    let df = match df {
                        Some(d) => d,
                        None => continue,
                    };
                    let dy = match self.var_at(ctx, y, dom, self.cfg.max_depth) {
                        Some(d) => d,
                        None => continue,
                    };
                    let result = cod.subst_var(z, y);
                    let app = Derivation::new("All-E", gen_typ(ctx, t, &result), vec![df, dy]);
                    if let Some(done) = self.finish(app, target) {
                        return Some(done);
                    }
                }
                None
            }
            Term::SelTrm(x, a) => {
                let closure = self.var_closure(ctx, x);
                let mut candidates: Vec<Type> = closure
                    .iter()
                    .filter(|(ty, _)| matches!(ty, Type::Fld(a1, _) if a1 == a))
                    .map(|(ty, _)| ty.clone())
                    .collect();
                candidates.extend(self.fld_candidates(ctx, a));
                for cand in candidates {
                    let field_ty = match &cand {
                        Type::Fld(_, u) => u.as_ref().clone(),
                        _ => continue,
                    };
                    let mut dx = None;
                    for (ty, d) in &closure {
                        if ty.alpha_eq(&cand) {
                            dx = Some(d.clone());
                            break;
                        }
                        if let Some(ds) = self.sub_query(ctx, ty, &cand) {
                            dx = Some(Derivation::new(
                                "Sub",
                                gen_typ(ctx, &Term::Var(x.clone()), &cand),
                                vec![d.clone(), ds],
                            ));
                            break;
                        }
                    }
                    let dx = match dx {
                        Some(d) => d,
                        None => continue,
                    };
                    let sel = Derivation::new("{}-E", gen_typ(ctx, t, &field_ty), vec![dx]);
                    if let Some(done) = self.finish(sel, target) {
                        return Some(done);
                    }
                }
                None
            }
        }
    }

    fn typ_lambda(
        &mut self,
        ctx: &Context,
        t: &Term,
        x: &VarName,
        ann: &Type,
        body: &Term,
        target: Option<&Type>,
    ) -> Option<Derivation> {
        let (xb, body2) = if ctx.position(x).is_some() {
            let xb = x.refreshed();
            (xb.clone(), body.subst_var(x, &xb))
        } else {
            (x.clone(), body.clone())
        };
        let ctx2 = ctx.extended(xb.clone(), ann.clone()).ok()?;
        // when the target is a function type over the same domain, type the
        // body directly at its codomain; otherwise infer and widen
        if let Some(Type::All(z, dom, cod)) = target {
            if dom.alpha_eq(ann) {
                let want = cod.subst_var(z, &xb);
                if let Some(db) = self.typ(&ctx2, &body2, Some(&want)) {
                    return Some(Derivation::new(
                        "All-I",
                        gen_typ(ctx, t, target.unwrap()),
                        vec![db],
                    ));
                }
            }
        }
        let db = self.typ(&ctx2, &body2, None)?;
        let u = match &db.conclusion {
            Judgment::Typ { ty, .. } => ty.clone(),
            _ => return None,
        };
        let ty = Type::all(xb, ann.clone(), u);
        let d = Derivation::new("All-I", gen_typ(ctx, t, &ty), vec![db]);
        self.finish(d, target)
    }

    fn typ_nu(
        &mut self,
        ctx: &Context,
        t: &Term,
        x: &VarName,
        tself: &Type,
        defs: &Def,
        target: Option<&Type>,
    ) -> Option<Derivation> {
        let (xb, tself2, defs2) = if ctx.position(x).is_some() {
            let xb = x.refreshed();
            let (ts, ds) = (tself.clone(), defs.clone()).subst_var(x, &xb);
            (xb, ts, ds)
        } else {
            (x.clone(), tself.clone(), defs.clone())
        };
        let ctx2 = ctx.extended(xb.clone(), tself2.clone()).ok()?;
        let dd = self.defs(&ctx2, &defs2, &tself2)?;
        let ty = Type::rec(xb, tself2);
        let d = Derivation::new("{}-I", gen_typ(ctx, t, &ty), vec![dd]);
        self.finish(d, target)
    }

    // types a definition aggregate against a structurally matching type
    fn defs(&mut self, ctx: &Context, d: &Def, ty: &Type) -> Option<Derivation> {
        match (d, ty) {
            (Def::And(d1, d2), Type::And(t1, t2)) => {
                let p1 = self.defs(ctx, d1, t1)?;
                let p2 = self.defs(ctx, d2, t2)?;
                Some(Derivation::new(
                    "AndDef-I",
                    Judgment::defs(ctx.clone(), d.clone(), ty.clone()),
                    vec![p1, p2],
                ))
            }
            (Def::Fld(a, body), Type::Fld(a2, want)) if a == a2 => {
                let p = self.typ(ctx, body, Some(want))?;
                Some(Derivation::new(
                    "Def-Trm",
                    Judgment::defs(ctx.clone(), d.clone(), ty.clone()),
                    vec![p],
                ))
            }
            (Def::Typ(a, u), Type::TypDec(a2, lo, hi))
                if a == a2 && lo.alpha_eq(u) && hi.alpha_eq(u) =>
            {
                Some(Derivation::leaf(
                    "Def-Typ",
                    Judgment::defs(ctx.clone(), d.clone(), ty.clone()),
                ))
            }
            _ => None,
        }
    }
}

// canonical keys: bound variables by binder depth, free ones by identity

fn sub_key(ctx: &Context, lhs: &Type, rhs: &Type) -> String {
    let mut stack = Vec::new();
    let mut out = String::new();
    for (x, ty) in ctx.bindings() {
        ty_key_in(ty, &mut stack, &mut out);
        out.push(';');
        stack.push(x.uid);
    }
    out.push('|');
    ty_key_in(lhs, &mut stack, &mut out);
    out.push('<');
    ty_key_in(rhs, &mut stack, &mut out);
    out
}

fn ty_key(t: &Type) -> String {
    let mut out = String::new();
    ty_key_in(t, &mut Vec::new(), &mut out);
    out
}

fn var_key(x: &VarName, stack: &[u64], out: &mut String) {
    match stack.iter().rev().position(|u| *u == x.uid) {
        Some(i) => {
            let _ = write!(out, "b{i}");
        }
        None => {
            let _ = write!(out, "f{}", x.uid);
        }
    }
}

fn ty_key_in(t: &Type, stack: &mut Vec<u64>, out: &mut String) {
    match t {
        Type::Top => out.push('T'),
        Type::Bot => out.push('B'),
        Type::All(x, s, u) => {
            out.push_str("A(");
            ty_key_in(s, stack, out);
            out.push(')');
            stack.push(x.uid);
            ty_key_in(u, stack, out);
            stack.pop();
        }
        Type::Rec(x, b) => {
            out.push_str("R(");
            stack.push(x.uid);
            ty_key_in(b, stack, out);
            stack.pop();
            out.push(')');
        }
        Type::Fld(a, u) => {
            let _ = write!(out, "F{a}(");
            ty_key_in(u, stack, out);
            out.push(')');
        }
        Type::TypDec(a, lo, hi) => {
            let _ = write!(out, "D{a}(");
            ty_key_in(lo, stack, out);
            out.push(',');
            ty_key_in(hi, stack, out);
            out.push(')');
        }
        Type::Sel(x, a) => {
            out.push('S');
            var_key(x, stack, out);
            let _ = write!(out, ".{a}");
        }
        Type::And(l, r) => {
            out.push('&');
            out.push('(');
            ty_key_in(l, stack, out);
            out.push(',');
            ty_key_in(r, stack, out);
            out.push(')');
        }
    }
}

fn subterms(t: &Type) -> Vec<&Type> {
    let mut out = Vec::new();
    fn go<'a>(t: &'a Type, out: &mut Vec<&'a Type>) {
        out.push(t);
        match t {
            Type::All(_, s, u) => {
                go(s, out);
                go(u, out);
            }
            Type::Rec(_, b) => go(b, out),
            Type::Fld(_, u) => go(u, out),
            Type::TypDec(_, lo, hi) => {
                go(lo, out);
                go(hi, out);
            }
            Type::And(l, r) => {
                go(l, out);
                go(r, out);
            }
            Type::Top | Type::Bot | Type::Sel(_, _) => {}
        }
    }
    go(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::validate::validate;
    use crate::surface::{parse_context, parse_term, parse_type, Resolver};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn identity_checks_at_its_annotation() {
        let mut r = Resolver::new();
        let t = parse_term_with(&mut r, "lambda(x: Top) x");
        let target = parse_type_with(&mut r, "all(x: Top) Top");
        let d = search_typ(&Context::empty(), &t, Some(&target), &cfg()).unwrap();
        validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
    }

    fn parse_term_with(r: &mut Resolver, s: &str) -> Term {
        crate::surface::parse_term_with(s, r).unwrap()
    }

    fn parse_type_with(r: &mut Resolver, s: &str) -> Type {
        crate::surface::parse_type_with(s, r).unwrap()
    }

    #[test]
    fn self_application_fails_in_inert_context() {
        let ctx = parse_context("y: mu(y: {a: Top})").unwrap();
        let y = ctx.bindings()[0].0.clone();
        let t = Term::App(y.clone(), y);
        assert!(search_typ(&ctx, &t, None, &cfg()).is_none());
        let target = parse_type("all(z: Top) Top").unwrap();
        assert!(search_typ(&ctx, &t, Some(&target), &cfg()).is_none());
    }

    #[test]
    fn bad_bounds_enable_self_application() {
        let ctx = parse_context("x: {A: {a: Top} .. all(z: Top) Top}; y: mu(y: {a: Top})").unwrap();
        let y = ctx.bindings()[1].0.clone();
        let t = Term::App(y.clone(), y);
        let d = search_typ(&ctx, &t, None, &cfg()).unwrap();
        validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
        for rule in ["Sub", "<:-Sel", "Sel-<:", "Trans"] {
            assert!(d.rule_names().contains(&rule), "missing {rule}");
        }
    }

    #[test]
    fn bad_bounds_subtyping_chain() {
        let ctx = parse_context("x: {A: {a: Top} .. all(z: Top) Top}").unwrap();
        let lhs = parse_type("{a: Top}").unwrap();
        let rhs = parse_type("all(z: Top) Top").unwrap();
        let d = search_sub(&ctx, &lhs, &rhs, &cfg()).unwrap();
        validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
        assert!(d.rule_names().contains(&"Trans"));
    }

    #[test]
    fn object_checks_at_its_recursive_type() {
        let mut r = Resolver::new();
        let t = parse_term_with(&mut r, "nu(s: {a: Top} & {A: Top .. Top}) {a = s} /\\ {A = Top}");
        let target = parse_type_with(&mut r, "mu(s: {a: Top} & {A: Top .. Top})");
        let d = search_typ(&Context::empty(), &t, Some(&target), &cfg()).unwrap();
        validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
    }

    #[test]
    fn let_and_projection_infer() {
        let t = parse_term("let o = nu(s: {a: Top}) {a = s.a} in o.a").unwrap();
        let (ty, d) = infer_type(&Context::empty(), &t, &cfg()).unwrap();
        validate(&d).unwrap_or_else(|e| panic!("{e:?}"));
        assert!(ty.alpha_eq(&Type::Top));
    }

    #[test]
    fn search_is_deterministic() {
        let ctx = parse_context("x: {A: {a: Top} .. all(z: Top) Top}; y: mu(y: {a: Top})").unwrap();
        let y = ctx.bindings()[1].0.clone();
        let t = Term::App(y.clone(), y);
        let a = search_typ(&ctx, &t, None, &cfg()).unwrap();
        let b = search_typ(&ctx, &t, None, &cfg()).unwrap();
        assert_eq!(a.rule_names(), b.rule_names());
    }
}
