//! Precise typing of variables: the closure of a context binding under
//! opening recursive types and splitting intersections, with a derivation
//! witnessing each member.

use super::judgment::{Derivation, Judgment, TypSystem};
use crate::syntax::{Context, Syntax, Term, Type, VarName};

/// One precise type of a variable, with its derivation.
#[derive(Clone, Debug)]
pub struct PreciseEntry {
    pub ty: Type,
    pub derivation: Derivation,
}

/// All precise types of `x` under `ctx`: the binding itself, recursive
/// types opened with `x`, and both conjuncts of every intersection,
/// transitively. Intermediate types are kept; entries are deduplicated up
/// to alpha-equivalence. Returns an empty list for unbound variables.
pub fn precise_types_of_var(ctx: &Context, x: &VarName) -> Vec<PreciseEntry> {
    let Some(t0) = ctx.lookup(x) else {
        return Vec::new();
    };
    let judge = |ty: &Type| {
        Judgment::typ(
            TypSystem::Precise,
            ctx.clone(),
            Term::Var(x.clone()),
            ty.clone(),
        )
    };
    let mut out: Vec<PreciseEntry> = vec![PreciseEntry {
        ty: t0.clone(),
        derivation: Derivation::leaf("Var!", judge(t0)),
    }];
    let mut i = 0;
    while i < out.len() {
        let entry = out[i].clone();
        let mut step = |ty: Type, rule: &str| {
            if !out.iter().any(|e| e.ty.alpha_eq(&ty)) {
                out.push(PreciseEntry {
                    derivation: Derivation::new(rule, judge(&ty), vec![entry.derivation.clone()]),
                    ty,
                });
            }
        };
        match &entry.ty {
            Type::Rec(z, body) => step(body.subst_var(z, x), "Rec-E!"),
            Type::And(l, r) => {
                step(l.as_ref().clone(), "And1-E!");
                step(r.as_ref().clone(), "And2-E!");
            }
            _ => {}
        }
        i += 1;
    }
    out
}

/// The precise member declarations of `x`: the `Fld` and `TypDec` entries
/// of the closure, paired with their derivations.
pub fn precise_decls_of_var(ctx: &Context, x: &VarName) -> Vec<PreciseEntry> {
    precise_types_of_var(ctx, x)
        .into_iter()
        .filter(|e| matches!(e.ty, Type::Fld(_, _) | Type::TypDec(_, _, _)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::validate::validate;
    use crate::syntax::{TermLabel, TypeLabel};

    #[test]
    fn closure_opens_rec_and_splits_and() {
        // x: mu(z: {a: Top} & {A: Bot .. Top})
        let x = VarName::fresh("x");
        let z = VarName::fresh("z");
        let body = Type::and(
            Type::fld(TermLabel("a".into()), Type::Top),
            Type::typ_dec(TypeLabel("A".into()), Type::Bot, Type::Top),
        );
        let ctx = Context::from_bindings(vec![(x.clone(), Type::rec(z.clone(), body.clone()))])
            .unwrap();
        let entries = precise_types_of_var(&ctx, &x);
        // binding, opened body, and the two conjuncts
        assert_eq!(entries.len(), 4);
        for e in &entries {
            validate(&e.derivation).unwrap();
        }
        let decls = precise_decls_of_var(&ctx, &x);
        assert_eq!(decls.len(), 2);
    }

    #[test]
    fn unbound_variable_has_no_precise_types() {
        let x = VarName::fresh("x");
        assert!(precise_types_of_var(&Context::empty(), &x).is_empty());
    }
}
