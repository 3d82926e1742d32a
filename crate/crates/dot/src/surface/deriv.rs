//! Reading and writing derivation documents.
//!
//! A document is a JSON tree of nodes `{"rule", "conclusion", "premises"}`.
//! The conclusion carries a `kind` tag, the context as a list of `"x: T"`
//! entries, and kind-specific fields (`term`/`type`, `lhs`/`rhs`, or
//! `defs`/`type`), all in surface syntax. One name interner is shared by
//! the whole document, so a free or context name denotes the same variable
//! in every node.

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use super::parser::{parse_context_with, parse_defs_with, parse_term_with, parse_type_with};
use super::printer::Pr;
use super::{printer, ParseError, Resolver};
use crate::rules::judgment::{Derivation, Judgment, JudgmentKind, SubSystem, TypSystem};

#[derive(Debug, Error)]
pub enum DerivError {
    #[error("document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in node {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("in node {path}: {message}")]
    Structure { path: String, message: String },
}

pub fn derivation_from_json(src: &str) -> Result<Derivation, DerivError> {
    let value: Json = serde_json::from_str(src)?;
    let mut resolver = Resolver::new();
    node_from_value(&value, &mut resolver, &mut Vec::new())
}

pub fn derivation_to_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(&node_to_value(d)).expect("derivation serialization")
}

fn path_str(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

fn node_from_value(
    value: &Json,
    resolver: &mut Resolver,
    path: &mut Vec<usize>,
) -> Result<Derivation, DerivError> {
    let structure = |message: &str| DerivError::Structure {
        path: path_str(path),
        message: message.to_string(),
    };
    let obj = value.as_object().ok_or_else(|| structure("node must be an object"))?;
    let rule = obj
        .get("rule")
        .and_then(Json::as_str)
        .ok_or_else(|| structure("missing string field \"rule\""))?
        .to_string();
    let concl = obj
        .get("conclusion")
        .and_then(Json::as_object)
        .ok_or_else(|| structure("missing object field \"conclusion\""))?;
    let conclusion = judgment_from_value(concl, resolver, path)?;
    let mut premises = Vec::new();
    if let Some(ps) = obj.get("premises") {
        let ps = ps
            .as_array()
            .ok_or_else(|| structure("\"premises\" must be an array"))?;
        for (i, p) in ps.iter().enumerate() {
            path.push(i);
            let parsed = node_from_value(p, resolver, path);
            path.pop();
            premises.push(parsed?);
        }
    }
    Ok(Derivation {
        rule,
        conclusion,
        premises,
    })
}

fn judgment_from_value(
    obj: &Map<String, Json>,
    resolver: &mut Resolver,
    path: &[usize],
) -> Result<Judgment, DerivError> {
    let structure = |message: String| DerivError::Structure {
        path: path_str(path),
        message,
    };
    let parse_err = |source: ParseError| DerivError::Parse {
        path: path_str(path),
        source,
    };
    let kind_str = obj
        .get("kind")
        .and_then(Json::as_str)
        .ok_or_else(|| structure("missing string field \"kind\"".into()))?;
    let kind = JudgmentKind::from_str(kind_str)
        .ok_or_else(|| structure(format!("unknown judgment kind {kind_str:?}")))?;
    let ctx_entries: Vec<&str> = match obj.get("ctx") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| structure("\"ctx\" must be an array of strings".into()))?
            .iter()
            .map(|e| {
                e.as_str()
                    .ok_or_else(|| structure("\"ctx\" entries must be strings".into()))
            })
            .collect::<Result<_, _>>()?,
    };
    let ctx = parse_context_with(&ctx_entries.join("; "), resolver).map_err(parse_err)?;
    let field = |name: &str| -> Result<&str, DerivError> {
        obj.get(name)
            .and_then(Json::as_str)
            .ok_or_else(|| structure(format!("missing string field {name:?}")))
    };
    match kind {
        JudgmentKind::Typ | JudgmentKind::TypTight | JudgmentKind::TypPrecise
        | JudgmentKind::TypInvertible => {
            let system = match kind {
                JudgmentKind::Typ => TypSystem::General,
                JudgmentKind::TypTight => TypSystem::Tight,
                JudgmentKind::TypPrecise => TypSystem::Precise,
                _ => TypSystem::Invertible,
            };
            let subject = parse_term_with(field("term")?, resolver).map_err(parse_err)?;
            let ty = parse_type_with(field("type")?, resolver).map_err(parse_err)?;
            Ok(Judgment::typ(system, ctx, subject, ty))
        }
        JudgmentKind::Subtyp | JudgmentKind::SubtypTight => {
            let system = if kind == JudgmentKind::Subtyp {
                SubSystem::General
            } else {
                SubSystem::Tight
            };
            let lhs = parse_type_with(field("lhs")?, resolver).map_err(parse_err)?;
            let rhs = parse_type_with(field("rhs")?, resolver).map_err(parse_err)?;
            Ok(Judgment::subtyp(system, ctx, lhs, rhs))
        }
        JudgmentKind::Defs => {
            let defs = parse_defs_with(field("defs")?, resolver).map_err(parse_err)?;
            let ty = parse_type_with(field("type")?, resolver).map_err(parse_err)?;
            Ok(Judgment::defs(ctx, defs, ty))
        }
    }
}

fn node_to_value(d: &Derivation) -> Json {
    json!({
        "rule": d.rule,
        "conclusion": judgment_to_value(&d.conclusion),
        "premises": d.premises.iter().map(node_to_value).collect::<Vec<_>>(),
    })
}

fn judgment_to_value(j: &Judgment) -> Json {
    let mut pr = Pr::for_names(printer::judgment_free_names(j));
    let ctx = pr.ctx_entries(j.ctx());
    match j {
        Judgment::Typ { subject, ty, .. } => json!({
            "kind": j.kind().as_str(),
            "ctx": ctx,
            "term": pr.term(subject),
            "type": pr.ty(ty),
        }),
        Judgment::Subtyp { lhs, rhs, .. } => json!({
            "kind": j.kind().as_str(),
            "ctx": ctx,
            "lhs": pr.ty(lhs),
            "rhs": pr.ty(rhs),
        }),
        Judgment::Defs { defs, ty, .. } => json!({
            "kind": j.kind().as_str(),
            "ctx": ctx,
            "defs": pr.defs(defs),
            "type": pr.ty(ty),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::validate::validate;

    #[test]
    fn roundtrips_a_small_document() {
        let doc = r#"{
            "rule": "Sub",
            "conclusion": {"kind": "typ", "ctx": ["x: {a: Top}"], "term": "x", "type": "Top"},
            "premises": [
                {"rule": "Var",
                 "conclusion": {"kind": "typ", "ctx": ["x: {a: Top}"], "term": "x", "type": "{a: Top}"},
                 "premises": []},
                {"rule": "Top",
                 "conclusion": {"kind": "subtyp", "ctx": ["x: {a: Top}"], "lhs": "{a: Top}", "rhs": "Top"},
                 "premises": []}
            ]
        }"#;
        let d = derivation_from_json(doc).unwrap();
        validate(&d).unwrap();
        let emitted = derivation_to_json(&d);
        let d2 = derivation_from_json(&emitted).unwrap();
        validate(&d2).unwrap();
        assert!(d.conclusion.alpha_eq(&d2.conclusion));
        assert_eq!(d.rule_names(), d2.rule_names());
    }

    #[test]
    fn rejects_unknown_kind() {
        let doc = r#"{"rule": "Var", "conclusion": {"kind": "bogus", "ctx": [], "term": "x", "type": "Top"}}"#;
        assert!(matches!(
            derivation_from_json(doc),
            Err(DerivError::Structure { .. })
        ));
    }

    #[test]
    fn reports_parse_errors_with_node_path() {
        let doc = r#"{
            "rule": "Sub",
            "conclusion": {"kind": "typ", "ctx": [], "term": "x", "type": "Top"},
            "premises": [
                {"rule": "Var", "conclusion": {"kind": "typ", "ctx": [], "term": "x.a.b", "type": "Top"}}
            ]
        }"#;
        match derivation_from_json(doc) {
            Err(DerivError::Parse { path, .. }) => assert_eq!(path, "0"),
            other => panic!("unexpected: {other:?}"),
        }
    }
}
