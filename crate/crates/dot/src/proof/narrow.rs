//! Narrowing: replacing a context binding by a subtype, rebuilding the
//! derivation so every use of the binding goes through subsumption.

use super::ProofError;
use crate::rules::judgment::{weaken_at, Derivation, Judgment, SubSystem, TypSystem};
use crate::syntax::{Context, Syntax, Term, Type, VarName};

/// Narrows the binding of `x` in every node of `d` to the left side of
/// `sub`, which must conclude `Γ0 |- S' <: S` where `Γ0` is the prefix
/// of `d`'s root context before `x` and `S` is `x`'s current type.
/// Works on general derivations (the only system narrowing is used in).
pub fn narrow(d: &Derivation, x: &VarName, sub: &Derivation) -> Result<Derivation, ProofError> {
    let root_ctx = d.conclusion.ctx();
    let pos = root_ctx
        .position(x)
        .ok_or_else(|| ProofError::Malformed(format!("{x} is not bound in the root context")))?;
    let (sub_ctx, s_new, s_old) = match &sub.conclusion {
        Judgment::Subtyp {
            system: SubSystem::General,
            ctx,
            lhs,
            rhs,
        } => (ctx, lhs.clone(), rhs.clone()),
        _ => {
            return Err(ProofError::Malformed(
                "narrowing takes a general subtyping derivation".to_string(),
            ))
        }
    };
    if !s_old.alpha_eq(&root_ctx.bindings()[pos].1) {
        return Err(ProofError::Malformed(
            "subtyping right side must be the narrowed binding's type".to_string(),
        ));
    }
    if sub_ctx.len() != pos {
        return Err(ProofError::Malformed(
            "subtyping must hold in the context prefix before the binding".to_string(),
        ));
    }
    Ok(go(d, x, pos, &s_new, &s_old, sub))
}

fn go(
    d: &Derivation,
    x: &VarName,
    pos: usize,
    s_new: &Type,
    s_old: &Type,
    sub: &Derivation,
) -> Derivation {
    let new_ctx = |ctx: &Context| {
        ctx.with_replaced(x, s_new.clone())
            .expect("narrowed variable is bound in every node")
    };
    // a Var node reading the narrowed binding becomes Var then Sub
    if d.rule == "Var" {
        if let Judgment::Typ { ctx, subject, .. } = &d.conclusion {
            if matches!(subject, Term::Var(v) if v == x) {
                let ctx2 = new_ctx(ctx);
                let var_node = Derivation::leaf(
                    "Var",
                    Judgment::typ(TypSystem::General, ctx2.clone(), subject.clone(), s_new.clone()),
                );
                // weaken the subtyping evidence to this node's context
                let extras = ctx2.bindings()[pos..].to_vec();
                let widened = weaken_at(sub, pos, &extras);
                return Derivation::new(
                    "Sub",
                    Judgment::typ(TypSystem::General, ctx2, subject.clone(), s_old.clone()),
                    vec![var_node, widened],
                );
            }
        }
    }
    Derivation {
        rule: d.rule.clone(),
        conclusion: d.conclusion.with_ctx(new_ctx(d.conclusion.ctx())),
        premises: d
            .premises
            .iter()
            .map(|p| go(p, x, pos, s_new, s_old, sub))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::search::{search_sub, search_typ, SearchConfig};
    use crate::rules::validate::validate;
    use crate::surface::{parse_context, parse_type};

    #[test]
    fn narrowing_rebuilds_variable_uses() {
        let ctx = parse_context("x: {a: Top}").unwrap();
        let x = ctx.bindings()[0].0.clone();
        let d = search_typ(&ctx, &Term::Var(x.clone()), Some(&Type::Top), &SearchConfig::default())
            .unwrap();
        let narrower = parse_type("{a: Top} & {A: Top .. Top}").unwrap();
        let old = parse_type("{a: Top}").unwrap();
        let sub = search_sub(&Context::empty(), &narrower, &old, &SearchConfig::default()).unwrap();
        let n = narrow(&d, &x, &sub).unwrap();
        validate(&n).unwrap_or_else(|e| panic!("{e:?}"));
        assert!(n.conclusion.ctx().bindings()[0].1.alpha_eq(&narrower));
        assert!(n.rule_names().contains(&"Sub"));
    }

    #[test]
    fn narrowing_through_a_selection_bound() {
        // the binding is narrowed from {A: Bot .. Top} to {A: Top .. Top};
        // a use of the upper bound via the selection still derives
        let ctx = parse_context("x: {A: Bot .. Top}").unwrap();
        let x = ctx.bindings()[0].0.clone();
        let lhs = Type::Sel(x.clone(), crate::syntax::TypeLabel("A".to_string()));
        let d = search_sub(&ctx, &lhs, &Type::Top, &SearchConfig::default()).unwrap();
        let narrower = parse_type("{A: Top .. Top}").unwrap();
        let old = parse_type("{A: Bot .. Top}").unwrap();
        let sub = search_sub(&Context::empty(), &narrower, &old, &SearchConfig::default()).unwrap();
        let n = narrow(&d, &x, &sub).unwrap();
        validate(&n).unwrap_or_else(|e| panic!("{e:?}"));
    }

    #[test]
    fn mismatched_evidence_is_rejected() {
        let ctx = parse_context("x: {a: Top}").unwrap();
        let x = ctx.bindings()[0].0.clone();
        let d = search_typ(&ctx, &Term::Var(x.clone()), None, &SearchConfig::default()).unwrap();
        let sub = search_sub(
            &Context::empty(),
            &Type::Bot,
            &Type::Top,
            &SearchConfig::default(),
        )
        .unwrap();
        assert!(narrow(&d, &x, &sub).is_err());
    }
}
