//! Canonical forms: in an inert context, a general typing at a function,
//! field, or object type decomposes into a precise typing plus general
//! subtyping legs, and for values into the shape of the value itself.

use super::embed::tight_to_general;
use super::narrow::narrow;
use super::transform::{general_to_tight, tight_to_invertible};
use super::ProofError;
use crate::rules::judgment::{
    rename_free_var, Derivation, Judgment, SubSystem, TypSystem,
};
use crate::syntax::{Context, Def, Syntax, Term, TermLabel, Type, Value, VarName};

fn typ_parts(j: &Judgment) -> Result<(&Context, &Term, &Type), ProofError> {
    match j {
        Judgment::Typ {
            ctx, subject, ty, ..
        } => Ok((ctx, subject, ty)),
        _ => Err(ProofError::Malformed(
            "expected a typing judgment".to_string(),
        )),
    }
}

fn sub_parts(j: &Judgment) -> Result<(&Context, &Type, &Type), ProofError> {
    match j {
        Judgment::Subtyp { ctx, lhs, rhs, .. } => Ok((ctx, lhs, rhs)),
        _ => Err(ProofError::Malformed(
            "expected a subtyping judgment".to_string(),
        )),
    }
}

fn gen_sub(ctx: &Context, lhs: &Type, rhs: &Type) -> Judgment {
    Judgment::subtyp(SubSystem::General, ctx.clone(), lhs.clone(), rhs.clone())
}

/// Decomposition of a typing at a function type.
pub struct CanonFun {
    /// Precise typing of the subject at some `all(x0: T0) U0`.
    pub precise: Derivation,
    /// General `Γ |- S <: T0` for the target domain `S`.
    pub dom_sub: Derivation,
    /// General `Γ, param:S |- U0 <: T`, both codomains opened at `param`.
    pub cod_sub: Derivation,
    pub param: VarName,
}

/// Decomposition of a variable typing at a field declaration.
pub struct CanonObj {
    /// Precise typing of the variable at `{a: T'}`.
    pub precise: Derivation,
    /// General `Γ |- T' <: T` for the target field type `T`.
    pub sub: Derivation,
}

/// Shape of a lambda typed at a function type.
pub struct CanonFunVal {
    /// The parameter of the lambda's typing premise.
    pub param: VarName,
    /// The lambda's annotation.
    pub ann: Type,
    /// General `Γ |- S <: ann` for the target domain `S`.
    pub dom_sub: Derivation,
    /// General `Γ, param:S |- body : T` with the codomain opened at `param`.
    pub body_typing: Derivation,
}

/// Shape of an object typed at a recursive type: the definition body for
/// a requested field, with its typing under the self binding.
pub struct CanonObjVal {
    pub self_var: VarName,
    pub self_ty: Type,
    pub field_body: Term,
    /// General `Γ, self_var: self_ty |- field_body : U_a`.
    pub field_typing: Derivation,
}

fn to_invertible(d: &Derivation) -> Result<Derivation, ProofError> {
    tight_to_invertible(&general_to_tight(d)?)
}

/// Canonical forms at function types, for variables.
pub fn canon_fun_var(d: &Derivation) -> Result<CanonFun, ProofError> {
    let (_, subject, _) = typ_parts(&d.conclusion)?;
    if !matches!(subject, Term::Var(_)) {
        return Err(ProofError::Malformed("subject must be a variable".to_string()));
    }
    fun_decompose(&to_invertible(d)?)
}

/// Canonical forms at function types, for values: the value is a lambda
/// and its body types at the target codomain under the target domain.
pub fn canon_fun_val(d: &Derivation) -> Result<CanonFunVal, ProofError> {
    let (_, subject, _) = typ_parts(&d.conclusion)?;
    let ann = match subject {
        Term::Val(v) => match v.as_ref() {
            Value::Lambda(_, ann, _) => ann.clone(),
            _ => return Err(ProofError::Malformed("subject must be a lambda".to_string())),
        },
        _ => return Err(ProofError::Malformed("subject must be a lambda".to_string())),
    };
    let cf = fun_decompose(&to_invertible(d)?)?;
    if cf.precise.rule != "All-I!" {
        return Err(ProofError::UnexpectedRule {
            rule: cf.precise.rule.clone(),
            place: "a lambda's precise typing",
        });
    }
    let body = &cf.precise.premises[0];
    let (body_ctx, _, body_ty) = typ_parts(&body.conclusion)?;
    let xp = body_ctx.bindings()[body_ctx.len() - 1].0.clone();
    let narrowed = narrow(body, &xp, &cf.dom_sub)?;
    let cod = rename_free_var(&cf.cod_sub, &cf.param, &xp);
    let (ctx2, _, _) = typ_parts(&narrowed.conclusion)?;
    let (_, _, target_cod) = sub_parts(&cod.conclusion)?;
    let body_typing = Derivation::new(
        "Sub",
        Judgment::typ(
            TypSystem::General,
            ctx2.clone(),
            match &narrowed.conclusion {
                Judgment::Typ { subject, .. } => subject.clone(),
                _ => unreachable!(),
            },
            target_cod.clone(),
        ),
        vec![narrowed.clone(), cod],
    );
    let _ = body_ty;
    Ok(CanonFunVal {
        param: xp,
        ann,
        dom_sub: cf.dom_sub,
        body_typing,
    })
}

fn fun_decompose(inv: &Derivation) -> Result<CanonFun, ProofError> {
    let (ctx, _, ty) = typ_parts(&inv.conclusion)?;
    let (z, s, t) = match ty {
        Type::All(z, s, t) => (z, s.as_ref(), t.as_ref()),
        _ => {
            return Err(ProofError::Malformed(
                "canonical forms at a function type need a function type".to_string(),
            ))
        }
    };
    match inv.rule.as_str() {
        "Var-##" | "Val-##" => {
            let precise = inv.premises[0].clone();
            let (_, _, pty) = typ_parts(&precise.conclusion)?;
            let (x0, t0, u0) = match pty {
                Type::All(x0, t0, u0) => (x0, t0.as_ref(), u0.as_ref()),
                _ => unreachable!("precise type matches the invertible conclusion"),
            };
            let dom_sub = Derivation::leaf("Refl", gen_sub(ctx, s, t0));
            let w = VarName::fresh(&z.name);
            let ctx_w = ctx
                .extended(w.clone(), s.clone())
                .expect("fresh parameter extends the context");
            let cod_sub = Derivation::leaf(
                "Refl",
                gen_sub(&ctx_w, &u0.subst_var(x0, &w), &t.subst_var(z, &w)),
            );
            Ok(CanonFun {
                precise,
                dom_sub,
                cod_sub,
                param: w,
            })
        }
        "All-I-##" | "All-v-##" => {
            let rec = fun_decompose(&inv.premises[0])?;
            let p2g = tight_to_general(&inv.premises[1])?;
            let p3 = &inv.premises[2];
            // domains compose: S <: S1 <: T0
            let (_, _, t0) = sub_parts(&rec.dom_sub.conclusion)?;
            let dom_sub = Derivation::new(
                "Trans",
                gen_sub(ctx, s, &t0.clone()),
                vec![p2g.clone(), rec.dom_sub.clone()],
            );
            // codomains compose under the narrowed parameter
            let narrowed = narrow(&rec.cod_sub, &rec.param, &p2g)?;
            let p3_binder = p3.conclusion.ctx().bindings()[p3.conclusion.ctx().len() - 1]
                .0
                .clone();
            let p3r = rename_free_var(p3, &p3_binder, &rec.param);
            let (cctx, clhs, _) = sub_parts(&narrowed.conclusion)?;
            let (_, _, crhs) = sub_parts(&p3r.conclusion)?;
            let cod_sub = Derivation::new(
                "Trans",
                gen_sub(cctx, clhs, crhs),
                vec![narrowed.clone(), p3r],
            );
            Ok(CanonFun {
                precise: rec.precise,
                dom_sub,
                cod_sub,
                param: rec.param,
            })
        }
        other => Err(ProofError::UnexpectedRule {
            rule: other.to_string(),
            place: "inverting a typing at a function type",
        }),
    }
}

/// Canonical forms at field declarations, for variables.
pub fn canon_obj_var(d: &Derivation) -> Result<CanonObj, ProofError> {
    let (_, subject, _) = typ_parts(&d.conclusion)?;
    if !matches!(subject, Term::Var(_)) {
        return Err(ProofError::Malformed("subject must be a variable".to_string()));
    }
    obj_decompose(&to_invertible(d)?)
}

fn obj_decompose(inv: &Derivation) -> Result<CanonObj, ProofError> {
    let (ctx, _, ty) = typ_parts(&inv.conclusion)?;
    let t = match ty {
        Type::Fld(_, t) => t.as_ref(),
        _ => {
            return Err(ProofError::Malformed(
                "canonical forms at a field need a field declaration".to_string(),
            ))
        }
    };
    match inv.rule.as_str() {
        "Var-##" => {
            let precise = inv.premises[0].clone();
            let sub = Derivation::leaf("Refl", gen_sub(ctx, t, t));
            Ok(CanonObj { precise, sub })
        }
        "Fld-<:-##" => {
            let rec = obj_decompose(&inv.premises[0])?;
            let p2g = tight_to_general(&inv.premises[1])?;
            let (_, lhs, _) = sub_parts(&rec.sub.conclusion)?;
            let sub = Derivation::new(
                "Trans",
                gen_sub(ctx, &lhs.clone(), t),
                vec![rec.sub.clone(), p2g],
            );
            Ok(CanonObj {
                precise: rec.precise,
                sub,
            })
        }
        other => Err(ProofError::UnexpectedRule {
            rule: other.to_string(),
            place: "inverting a typing at a field declaration",
        }),
    }
}

/// Canonical forms at recursive types, for values: the value is an object
/// defining the requested field, whose body types under the self binding.
pub fn canon_obj_val(d: &Derivation, label: &TermLabel) -> Result<CanonObjVal, ProofError> {
    let inv = to_invertible(d)?;
    if inv.rule != "Val-##" {
        return Err(ProofError::UnexpectedRule {
            rule: inv.rule.clone(),
            place: "an object value typed at a recursive type",
        });
    }
    let precise = &inv.premises[0];
    if precise.rule != "{}-I!" {
        return Err(ProofError::UnexpectedRule {
            rule: precise.rule.clone(),
            place: "an object's precise typing",
        });
    }
    let defs_typing = &precise.premises[0];
    let defs_ctx = defs_typing.conclusion.ctx();
    let (self_var, self_ty) = defs_ctx.bindings()[defs_ctx.len() - 1].clone();
    let field = find_field(defs_typing, label).ok_or_else(|| {
        ProofError::Malformed(format!("object defines no field {label}"))
    })?;
    let body = match &field.conclusion {
        Judgment::Defs {
            defs: Def::Fld(_, t),
            ..
        } => t.clone(),
        _ => unreachable!("field nodes conclude field definitions"),
    };
    Ok(CanonObjVal {
        self_var,
        self_ty,
        field_body: body,
        field_typing: field.premises[0].clone(),
    })
}

fn find_field<'d>(d: &'d Derivation, label: &TermLabel) -> Option<&'d Derivation> {
    match d.rule.as_str() {
        "Def-Trm" => match &d.conclusion {
            Judgment::Defs {
                defs: Def::Fld(a, _),
                ..
            } if a == label => Some(d),
            _ => None,
        },
        "AndDef-I" => d.premises.iter().find_map(|p| find_field(p, label)),
        _ => None,
    }
}

/// Strips subsumption off a general value typing, yielding the precise
/// introduction plus the accumulated subtyping. Needs no inertness.
pub fn value_precise(d: &Derivation) -> Result<(Derivation, Derivation), ProofError> {
    let (ctx, subject, ty) = typ_parts(&d.conclusion)?;
    if !matches!(subject, Term::Val(_)) {
        return Err(ProofError::Malformed("subject must be a value".to_string()));
    }
    match d.rule.as_str() {
        "Sub" => {
            let (prec, sub) = value_precise(&d.premises[0])?;
            let (_, lhs, _) = sub_parts(&sub.conclusion)?;
            let combined = Derivation::new(
                "Trans",
                gen_sub(ctx, &lhs.clone(), ty),
                vec![sub, d.premises[1].clone()],
            );
            Ok((prec, combined))
        }
        "All-I" => {
            let prec = Derivation::new(
                "All-I!",
                Judgment::typ(TypSystem::Precise, ctx.clone(), subject.clone(), ty.clone()),
                d.premises.clone(),
            );
            let sub = Derivation::leaf("Refl", gen_sub(ctx, ty, ty));
            Ok((prec, sub))
        }
        "{}-I" => {
            let prec = Derivation::new(
                "{}-I!",
                Judgment::typ(TypSystem::Precise, ctx.clone(), subject.clone(), ty.clone()),
                d.premises.clone(),
            );
            let sub = Derivation::leaf("Refl", gen_sub(ctx, ty, ty));
            Ok((prec, sub))
        }
        other => Err(ProofError::UnexpectedRule {
            rule: other.to_string(),
            place: "peeling a value typing",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::search::{search_typ, SearchConfig};
    use crate::rules::validate::validate;
    use crate::surface::{parse_context, parse_term_with, parse_type_with, Resolver};
    use crate::syntax::Context;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn function_variable_decomposes() {
        let ctx = parse_context("f: all(s: {a: Top}) Top").unwrap();
        let f = ctx.bindings()[0].0.clone();
        let mut r = Resolver::new();
        let want = parse_type_with("all(s: Bot) Top", &mut r).unwrap();
        let d = search_typ(&ctx, &Term::Var(f), Some(&want), &cfg()).unwrap();
        let cf = canon_fun_var(&d).unwrap();
        validate(&cf.precise).unwrap_or_else(|e| panic!("{e:?}"));
        validate(&cf.dom_sub).unwrap_or_else(|e| panic!("{e:?}"));
        validate(&cf.cod_sub).unwrap_or_else(|e| panic!("{e:?}"));
        // the domain leg goes from the target domain into the precise one
        match &cf.dom_sub.conclusion {
            Judgment::Subtyp { lhs, rhs, .. } => {
                assert!(lhs.alpha_eq(&Type::Bot));
                assert!(rhs.alpha_eq(&parse_type_with("{a: Top}", &mut Resolver::new()).unwrap()));
            }
            _ => panic!("domain leg must be a subtyping"),
        }
    }

    #[test]
    fn lambda_body_types_at_target_codomain() {
        let mut r = Resolver::new();
        let t = parse_term_with("lambda(x: {a: Top}) x", &mut r).unwrap();
        let want = parse_type_with("all(x: Bot) Top", &mut r).unwrap();
        let d = search_typ(&Context::empty(), &t, Some(&want), &cfg()).unwrap();
        let cv = canon_fun_val(&d).unwrap();
        validate(&cv.dom_sub).unwrap_or_else(|e| panic!("{e:?}"));
        validate(&cv.body_typing).unwrap_or_else(|e| panic!("{e:?}"));
        // the body types at the target codomain under the target domain
        match &cv.body_typing.conclusion {
            Judgment::Typ { ctx, ty, .. } => {
                assert!(ty.alpha_eq(&Type::Top));
                let (x, xt) = &ctx.bindings()[0];
                assert_eq!(x, &cv.param);
                assert!(xt.alpha_eq(&Type::Bot));
            }
            _ => panic!("body typing must be a typing"),
        }
    }

    #[test]
    fn field_variable_decomposes_through_widening() {
        let ctx = parse_context("o: mu(o: {a: Bot})").unwrap();
        let o = ctx.bindings()[0].0.clone();
        let want = parse_type_with("{a: Top}", &mut Resolver::new()).unwrap();
        let d = search_typ(&ctx, &Term::Var(o), Some(&want), &cfg()).unwrap();
        let co = canon_obj_var(&d).unwrap();
        validate(&co.precise).unwrap_or_else(|e| panic!("{e:?}"));
        validate(&co.sub).unwrap_or_else(|e| panic!("{e:?}"));
        match &co.sub.conclusion {
            Judgment::Subtyp { lhs, rhs, .. } => {
                assert!(lhs.alpha_eq(&Type::Bot));
                assert!(rhs.alpha_eq(&Type::Top));
            }
            _ => panic!("field leg must be a subtyping"),
        }
    }

    #[test]
    fn object_yields_its_field_body_typing() {
        let mut r = Resolver::new();
        let t = parse_term_with("nu(s: {a: Top}) {a = s.a}", &mut r).unwrap();
        let want = parse_type_with("mu(s: {a: Top})", &mut r).unwrap();
        let d = search_typ(&Context::empty(), &t, Some(&want), &cfg()).unwrap();
        let label = TermLabel("a".to_string());
        let cov = canon_obj_val(&d, &label).unwrap();
        validate(&cov.field_typing).unwrap_or_else(|e| panic!("{e:?}"));
        assert!(matches!(cov.field_body, Term::SelTrm(_, _)));
        assert!(cov.self_ty.alpha_eq(
            &Type::fld(label, Type::Top)
        ));
    }

    #[test]
    fn missing_field_is_reported() {
        let mut r = Resolver::new();
        let t = parse_term_with("nu(s: {a: Top}) {a = s.a}", &mut r).unwrap();
        let want = parse_type_with("mu(s: {a: Top})", &mut r).unwrap();
        let d = search_typ(&Context::empty(), &t, Some(&want), &cfg()).unwrap();
        assert!(canon_obj_val(&d, &TermLabel("b".to_string())).is_err());
    }

    #[test]
    fn peeling_subsumption_off_a_value() {
        let mut r = Resolver::new();
        let t = parse_term_with("lambda(y: Top) y", &mut r).unwrap();
        let d = search_typ(&Context::empty(), &t, Some(&Type::Top), &cfg()).unwrap();
        let (prec, sub) = value_precise(&d).unwrap();
        validate(&prec).unwrap_or_else(|e| panic!("{e:?}"));
        validate(&sub).unwrap_or_else(|e| panic!("{e:?}"));
        match &prec.conclusion {
            Judgment::Typ { ty, .. } => assert!(matches!(ty, Type::All(_, _, _))),
            _ => panic!("precise typing expected"),
        }
    }

    #[test]
    fn variables_are_rejected_by_value_peeling() {
        let ctx = parse_context("y: Top").unwrap();
        let y = ctx.bindings()[0].0.clone();
        let d = search_typ(&ctx, &Term::Var(y), None, &cfg()).unwrap();
        assert!(value_precise(&d).is_err());
    }
}
