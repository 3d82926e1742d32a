//! Inertness of types and contexts.
//!
//! An inert type is a dependent function type, or a recursive type whose
//! body is a record: an intersection of field and type member
//! declarations where every type member has equal bounds and no type
//! label repeats. In strict mode field labels must not repeat either.
//! Inert contexts rule out unsound bounds, which is what the tight and
//! invertible systems and the canonical-forms lemmas rely on.

use std::collections::HashSet;
use std::fmt;

use crate::syntax::{Context, Syntax, Type, VarName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InertViolation {
    /// The type is not a function or recursive type (or a record
    /// conjunct is not a declaration at all).
    DisallowedConstructor,
    /// The body of the recursive type is not a record.
    NonRecordBody,
    /// A type member declaration has unequal bounds.
    NonTightBounds,
    DuplicateTypeLabel,
    /// Strict mode only.
    DuplicateTermLabel,
}

impl fmt::Display for InertViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InertViolation::DisallowedConstructor => "disallowed-constructor",
            InertViolation::NonRecordBody => "non-record-body",
            InertViolation::NonTightBounds => "non-tight-bounds",
            InertViolation::DuplicateTypeLabel => "duplicate-type-label",
            InertViolation::DuplicateTermLabel => "duplicate-term-label",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    /// Human-readable steps from the root of the type to the offender.
    pub path: Vec<String>,
    pub reason: InertViolation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{} at the root", self.reason)
        } else {
            write!(f, "{} at {}", self.reason, self.path.join("."))
        }
    }
}

#[derive(Clone, Debug)]
pub struct InertReport {
    pub inert: bool,
    pub first_violation: Option<Violation>,
}

impl InertReport {
    fn ok() -> Self {
        InertReport {
            inert: true,
            first_violation: None,
        }
    }

    fn bad(path: Vec<String>, reason: InertViolation) -> Self {
        InertReport {
            inert: false,
            first_violation: Some(Violation { path, reason }),
        }
    }
}

/// Checks inertness. With `strict`, field labels of a record must be
/// pairwise distinct too; pass `strict = false` to relax that.
pub fn is_inert_type(t: &Type, strict: bool) -> InertReport {
    match t {
        Type::All(_, _, _) => InertReport::ok(),
        Type::Rec(_, body) => check_record(body, strict, vec!["mu-body".to_string()]),
        _ => InertReport::bad(Vec::new(), InertViolation::DisallowedConstructor),
    }
}

/// The member declarations of a record type, in order, or `None` if some
/// conjunct is not a declaration.
pub fn record_members(t: &Type) -> Option<Vec<&Type>> {
    let members = t.conjuncts();
    if members
        .iter()
        .all(|m| matches!(m, Type::Fld(_, _) | Type::TypDec(_, _, _)))
    {
        Some(members)
    } else {
        None
    }
}

fn check_record(body: &Type, strict: bool, path: Vec<String>) -> InertReport {
    let mut type_labels = HashSet::new();
    let mut term_labels = HashSet::new();
    for (i, member) in body.conjuncts().into_iter().enumerate() {
        let at = |detail: &str| {
            let mut p = path.clone();
            p.push(format!("conjunct[{i}]"));
            if !detail.is_empty() {
                p.push(detail.to_string());
            }
            p
        };
        match member {
            Type::Fld(a, _) => {
                if !term_labels.insert(a.clone()) && strict {
                    return InertReport::bad(at(""), InertViolation::DuplicateTermLabel);
                }
            }
            Type::TypDec(a, lo, hi) => {
                if !lo.alpha_eq(hi) {
                    return InertReport::bad(at("bounds"), InertViolation::NonTightBounds);
                }
                if !type_labels.insert(a.clone()) {
                    return InertReport::bad(at(""), InertViolation::DuplicateTypeLabel);
                }
            }
            _ => return InertReport::bad(at(""), InertViolation::NonRecordBody),
        }
    }
    InertReport::ok()
}

/// A context is inert when every binding's type is. Returns the first
/// offending binding, if any.
pub fn is_inert_context(ctx: &Context, strict: bool) -> Option<(VarName, Violation)> {
    for (x, t) in ctx.bindings() {
        let report = is_inert_type(t, strict);
        if let Some(v) = report.first_violation {
            return Some((x.clone(), v));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_type;

    #[test]
    fn function_types_are_inert() {
        let t = parse_type("all(x: Bot) x.A").unwrap();
        assert!(is_inert_type(&t, true).inert);
    }

    #[test]
    fn record_mu_is_inert() {
        let t = parse_type("mu(x: {a: Top} & {A: x.B .. x.B} & {B: Bot .. Bot})").unwrap();
        assert!(is_inert_type(&t, true).inert);
    }

    #[test]
    fn top_and_projections_are_not_inert() {
        for src in ["Top", "Bot", "x.A", "{a: Top}", "Top & Bot"] {
            let r = is_inert_type(&parse_type(src).unwrap(), true);
            assert_eq!(
                r.first_violation.unwrap().reason,
                InertViolation::DisallowedConstructor,
                "{src}"
            );
        }
    }

    #[test]
    fn loose_bounds_are_rejected() {
        let t = parse_type("mu(x: {A: Bot .. Top})").unwrap();
        let r = is_inert_type(&t, true);
        assert_eq!(
            r.first_violation.unwrap().reason,
            InertViolation::NonTightBounds
        );
    }

    #[test]
    fn duplicate_type_labels_are_rejected() {
        let t = parse_type("mu(x: {A: Top .. Top} & {A: Bot .. Bot})").unwrap();
        let r = is_inert_type(&t, true);
        assert_eq!(
            r.first_violation.unwrap().reason,
            InertViolation::DuplicateTypeLabel
        );
    }

    #[test]
    fn duplicate_term_labels_depend_on_strictness() {
        let t = parse_type("mu(x: {a: Top} & {a: Bot})").unwrap();
        assert_eq!(
            is_inert_type(&t, true).first_violation.unwrap().reason,
            InertViolation::DuplicateTermLabel
        );
        assert!(is_inert_type(&t, false).inert);
    }

    #[test]
    fn non_record_body_is_rejected() {
        let t = parse_type("mu(x: {a: Top} & Top)").unwrap();
        let r = is_inert_type(&t, true);
        assert_eq!(
            r.first_violation.unwrap().reason,
            InertViolation::NonRecordBody
        );
    }

    #[test]
    fn context_inertness_names_the_offender() {
        use crate::surface::parse_context;
        let ctx = parse_context("f: all(x: Top) Top; y: mu(y: {A: Bot .. Top})").unwrap();
        let (x, v) = is_inert_context(&ctx, true).unwrap();
        assert_eq!(x.name, "y");
        assert_eq!(v.reason, InertViolation::NonTightBounds);
    }
}
