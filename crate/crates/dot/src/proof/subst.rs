//! The substitution lemma as a transformer: replacing the last context
//! binding by a variable that provably has its type.

use super::ProofError;
use crate::rules::judgment::{weaken_at, Derivation, Judgment, TypSystem};
use crate::syntax::{Context, Syntax, Term, VarName};

/// Given `d : Γ, x:S ⊢ t : T` (with `x` the last root binding) and
/// `dy : Γ ⊢ y : S`, produces `Γ ⊢ [x:=y]t : [x:=y]T`. Both inputs must
/// be general derivations.
pub fn subst_deriv(
    d: &Derivation,
    y: &VarName,
    dy: &Derivation,
) -> Result<Derivation, ProofError> {
    let root_ctx = d.conclusion.ctx();
    if root_ctx.is_empty() {
        return Err(ProofError::Malformed(
            "the root context has no binding to substitute away".to_string(),
        ));
    }
    let n = root_ctx.len() - 1;
    let (x, s) = root_ctx.bindings()[n].clone();
    let prefix = Context::from_bindings(root_ctx.bindings()[..n].to_vec())
        .expect("prefix of a valid context");
    match &dy.conclusion {
        Judgment::Typ {
            system: TypSystem::General,
            ctx,
            subject: Term::Var(v),
            ty,
        } => {
            if v != y {
                return Err(ProofError::Malformed(
                    "evidence must type the substituted variable".to_string(),
                ));
            }
            if !ctx.alpha_eq(&prefix) {
                return Err(ProofError::Malformed(
                    "evidence must live in the context prefix".to_string(),
                ));
            }
            if !ty.alpha_eq(&s.subst_var(&x, y)) {
                return Err(ProofError::Malformed(
                    "evidence must type the variable at the eliminated binding's type"
                        .to_string(),
                ));
            }
        }
        _ => {
            return Err(ProofError::Malformed(
                "evidence must be a general variable typing".to_string(),
            ))
        }
    }
    Ok(go(d, &x, y, n, dy))
}

fn go(d: &Derivation, x: &VarName, y: &VarName, n: usize, dy: &Derivation) -> Derivation {
    // a Var node reading the eliminated binding is replaced by the
    // evidence, weakened to the node's substituted extension
    if d.rule == "Var" {
        if let Judgment::Typ { ctx, subject, .. } = &d.conclusion {
            if matches!(subject, Term::Var(v) if v == x) {
                let extras: Vec<_> = ctx.bindings()[n + 1..]
                    .iter()
                    .map(|(z, t)| (z.clone(), t.subst_var(x, y)))
                    .collect();
                return weaken_at(dy, n, &extras);
            }
        }
    }
    let conclusion = drop_binding(&d.conclusion.map_subst(x, y), x);
    Derivation {
        rule: d.rule.clone(),
        conclusion,
        premises: d.premises.iter().map(|p| go(p, x, y, n, dy)).collect(),
    }
}

fn drop_binding(j: &Judgment, x: &VarName) -> Judgment {
    let ctx = Context::from_bindings(
        j.ctx()
            .bindings()
            .iter()
            .filter(|(v, _)| v != x)
            .cloned()
            .collect(),
    )
    .expect("dropping a binding keeps the context well formed");
    j.with_ctx(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::search::{search_typ, SearchConfig};
    use crate::rules::judgment::{Derivation, TypSystem};
    use crate::rules::validate::validate;
    use crate::surface::parse_context;
    use crate::syntax::Type;

    #[test]
    fn variable_use_is_replaced_by_the_evidence() {
        let ctx = parse_context("y: {a: Top}; x: {a: Top}").unwrap();
        let (y, yt) = ctx.bindings()[0].clone();
        let x = ctx.bindings()[1].0.clone();
        let d = search_typ(&ctx, &Term::Var(x), Some(&Type::Top), &SearchConfig::default())
            .unwrap();
        let prefix = Context::from_bindings(vec![(y.clone(), yt.clone())]).unwrap();
        let dy = Derivation::leaf(
            "Var",
            Judgment::typ(TypSystem::General, prefix, Term::Var(y.clone()), yt),
        );
        let out = subst_deriv(&d, &y, &dy).unwrap();
        validate(&out).unwrap_or_else(|e| panic!("{e:?}"));
        assert_eq!(out.conclusion.ctx().len(), 1);
        match &out.conclusion {
            Judgment::Typ { subject, .. } => assert_eq!(subject, &Term::Var(y)),
            _ => panic!("typing expected"),
        }
    }

    #[test]
    fn bodies_mentioning_the_binding_are_rewritten() {
        let ctx = parse_context("y: Top; x: Top").unwrap();
        let (y, _) = ctx.bindings()[0].clone();
        let x = ctx.bindings()[1].0.clone();
        let body = Term::lambda(VarName::fresh("z"), Type::Top, Term::Var(x.clone()));
        let d = search_typ(&ctx, &body, None, &SearchConfig::default()).unwrap();
        let dy = Derivation::leaf(
            "Var",
            Judgment::typ(
                TypSystem::General,
                Context::from_bindings(vec![(y.clone(), Type::Top)]).unwrap(),
                Term::Var(y.clone()),
                Type::Top,
            ),
        );
        let out = subst_deriv(&d, &y, &dy).unwrap();
        validate(&out).unwrap_or_else(|e| panic!("{e:?}"));
        match &out.conclusion {
            Judgment::Typ { subject, .. } => {
                assert!(subject.free_vars().contains(&y));
            }
            _ => panic!("typing expected"),
        }
    }

    #[test]
    fn empty_context_is_rejected() {
        let z = VarName::fresh("z");
        let t = Term::lambda(z.clone(), Type::Top, Term::Var(z));
        let d = search_typ(&Context::empty(), &t, None, &SearchConfig::default()).unwrap();
        let y = VarName::fresh("y");
        let dy = Derivation::leaf(
            "Var",
            Judgment::typ(
                TypSystem::General,
                Context::empty(),
                Term::Var(y.clone()),
                Type::Top,
            ),
        );
        assert!(subst_deriv(&d, &y, &dy).is_err());
    }
}
