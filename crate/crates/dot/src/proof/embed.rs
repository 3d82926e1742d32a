//! Embeddings back into the general systems: tight derivations and
//! precise variable typings hold generally, by replaying each rule with
//! its general counterpart.

use super::ProofError;
use crate::rules::judgment::{Derivation, Judgment, JudgmentKind, SubSystem, TypSystem};

fn retag_general(j: &Judgment) -> Judgment {
    match j {
        Judgment::Typ {
            ctx, subject, ty, ..
        } => Judgment::typ(TypSystem::General, ctx.clone(), subject.clone(), ty.clone()),
        Judgment::Subtyp { ctx, lhs, rhs, .. } => Judgment::subtyp(
            SubSystem::General,
            ctx.clone(),
            lhs.clone(),
            rhs.clone(),
        ),
        defs => defs.clone(),
    }
}

/// Replays a tight derivation in the general systems. Premises that were
/// already general (the context-extending ones) are kept verbatim; the
/// precise premises of the tight selection rules are embedded first.
pub fn tight_to_general(d: &Derivation) -> Result<Derivation, ProofError> {
    match d.conclusion.kind() {
        JudgmentKind::Typ | JudgmentKind::Subtyp | JudgmentKind::Defs => Ok(d.clone()),
        JudgmentKind::TypPrecise => precise_var_to_general(d),
        JudgmentKind::TypInvertible => Err(ProofError::UnexpectedRule {
            rule: d.rule.clone(),
            place: "invertible derivations do not embed directly",
        }),
        JudgmentKind::TypTight | JudgmentKind::SubtypTight => {
            let rule = d
                .rule
                .strip_suffix("-#")
                .ok_or_else(|| ProofError::UnexpectedRule {
                    rule: d.rule.clone(),
                    place: "tight judgment concluded by a non-tight rule",
                })?
                .to_string();
            let premises = d
                .premises
                .iter()
                .map(tight_to_general)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Derivation {
                rule,
                conclusion: retag_general(&d.conclusion),
                premises,
            })
        }
    }
}

/// Replays a precise variable (or value) typing in the general system.
/// Intersection eliminations become subsumption steps.
pub fn precise_var_to_general(d: &Derivation) -> Result<Derivation, ProofError> {
    let concl = retag_general(&d.conclusion);
    match d.rule.as_str() {
        "Var!" => Ok(Derivation::leaf("Var", concl)),
        "All-I!" => Ok(Derivation::new("All-I", concl, d.premises.clone())),
        "{}-I!" => Ok(Derivation::new("{}-I", concl, d.premises.clone())),
        "Rec-E!" => {
            let p = precise_var_to_general(&d.premises[0])?;
            Ok(Derivation::new("Rec-E", concl, vec![p]))
        }
        "And1-E!" | "And2-E!" => {
            let p = precise_var_to_general(&d.premises[0])?;
            let (ctx, whole) = match &p.conclusion {
                Judgment::Typ { ctx, ty, .. } => (ctx.clone(), ty.clone()),
                _ => unreachable!("premise is a typing judgment"),
            };
            let picked = match &d.conclusion {
                Judgment::Typ { ty, .. } => ty.clone(),
                _ => unreachable!("conclusion is a typing judgment"),
            };
            let rule = if d.rule == "And1-E!" {
                "And1-<:"
            } else {
                "And2-<:"
            };
            let sub = Derivation::leaf(
                rule,
                Judgment::subtyp(SubSystem::General, ctx, whole, picked),
            );
            Ok(Derivation::new("Sub", concl, vec![p, sub]))
        }
        other => Err(ProofError::UnexpectedRule {
            rule: other.to_string(),
            place: "embedding a precise typing",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::precise::precise_types_of_var;
    use crate::rules::validate::validate;
    use crate::surface::parse_context;

    #[test]
    fn precise_closure_embeds_generally() {
        let ctx = parse_context("x: mu(z: {a: Top} & {A: Bot .. Bot})").unwrap();
        let x = ctx.bindings()[0].0.clone();
        for entry in precise_types_of_var(&ctx, &x) {
            let g = precise_var_to_general(&entry.derivation).unwrap();
            validate(&g).unwrap_or_else(|e| panic!("{e:?}"));
            assert_eq!(g.conclusion.kind(), JudgmentKind::Typ);
        }
    }
}
