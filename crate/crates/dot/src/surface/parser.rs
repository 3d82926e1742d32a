//! Recursive-descent parser for types, terms, definitions, and contexts.
//!
//! Binders introduce fresh variables; free occurrences are interned in a
//! `Resolver`, so parsing several pieces of one document with a shared
//! resolver gives the same identity to the same free name everywhere.

use std::collections::HashMap;

use super::lexer::{lex, Keyword, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::syntax::{Context, Def, Term, TermLabel, Type, TypeLabel, VarName};

/// Interner for free variable names. One resolver per document.
#[derive(Default, Debug)]
pub struct Resolver {
    map: HashMap<String, VarName>,
}

impl Resolver {
    pub fn new() -> Self {
        Resolver::default()
    }

    /// A resolver that already maps each variable's display name to it,
    /// so reparsing printed output reuses the original identities.
    pub fn seeded(vars: impl IntoIterator<Item = VarName>) -> Self {
        Resolver {
            map: vars.into_iter().map(|v| (v.name.clone(), v)).collect(),
        }
    }

    pub fn resolve(&mut self, name: &str) -> VarName {
        self.map
            .entry(name.to_string())
            .or_insert_with(|| VarName::fresh(name))
            .clone()
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    parse_type_with(src, &mut Resolver::new())
}

pub fn parse_type_with(src: &str, resolver: &mut Resolver) -> Result<Type, ParseError> {
    let mut p = P::new(src, resolver)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_with(src, &mut Resolver::new())
}

pub fn parse_term_with(src: &str, resolver: &mut Resolver) -> Result<Term, ParseError> {
    let mut p = P::new(src, resolver)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_defs(src: &str) -> Result<Def, ParseError> {
    parse_defs_with(src, &mut Resolver::new())
}

pub fn parse_defs_with(src: &str, resolver: &mut Resolver) -> Result<Def, ParseError> {
    let mut p = P::new(src, resolver)?;
    let d = p.defs()?;
    p.expect_eof()?;
    Ok(d)
}

pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    parse_context_with(src, &mut Resolver::new())
}

pub fn parse_context_with(src: &str, resolver: &mut Resolver) -> Result<Context, ParseError> {
    let mut p = P::new(src, resolver)?;
    let ctx = p.context()?;
    p.expect_eof()?;
    Ok(ctx)
}

struct P<'r> {
    toks: Vec<Token>,
    pos: usize,
    resolver: &'r mut Resolver,
    scope: Vec<VarName>,
}

impl<'r> P<'r> {
    fn new(src: &str, resolver: &'r mut Resolver) -> Result<Self, ParseError> {
        Ok(P {
            toks: lex(src)?,
            pos: 0,
            resolver,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().map(|t| &t.tok == tok).unwrap_or(false)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::UnexpectedToken {
                expected: expected.to_string(),
                found: format!("{:?}", t.tok.to_string()),
                span: t.span,
            },
            None => ParseError::UnexpectedEof {
                expected: expected.to_string(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        if self.at(&tok) {
            Ok(self.bump().span)
        } else {
            Err(self.err(what))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::TrailingInput {
                found: format!("{:?}", t.tok.to_string()),
                span: t.span,
            }),
        }
    }

    fn expect_lower_ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(_), ..
            }) => {
                let t = self.bump();
                match t.tok {
                    Tok::Ident(s) => Ok((s, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err(what)),
        }
    }

    fn expect_upper_ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::UpIdent(_),
                ..
            }) => {
                let t = self.bump();
                match t.tok {
                    Tok::UpIdent(s) => Ok((s, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err(what)),
        }
    }

    /// A variable occurrence: innermost binder first, then the document
    /// interner.
    fn lookup_var(&mut self, name: &str) -> VarName {
        self.scope
            .iter()
            .rev()
            .find(|v| v.name == name)
            .cloned()
            .unwrap_or_else(|| self.resolver.resolve(name))
    }

    // ---- types ---------------------------------------------------------

    fn ty(&mut self) -> Result<Type, ParseError> {
        let first = self.ty_atom()?;
        if self.at(&Tok::Amp) {
            self.bump();
            let rest = self.ty()?;
            Ok(Type::and(first, rest))
        } else {
            Ok(first)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Kw(Keyword::Top)) => {
                self.bump();
                Ok(Type::Top)
            }
            Some(Tok::Kw(Keyword::Bot)) => {
                self.bump();
                Ok(Type::Bot)
            }
            Some(Tok::Kw(Keyword::All)) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after 'all'")?;
                let (name, _) = self.expect_lower_ident("parameter name")?;
                self.expect(Tok::Colon, "':' after parameter name")?;
                let dom = self.ty()?;
                self.expect(Tok::RParen, "')' after parameter type")?;
                let x = VarName::fresh(name);
                self.scope.push(x.clone());
                let cod = self.ty()?;
                self.scope.pop();
                Ok(Type::all(x, dom, cod))
            }
            Some(Tok::Kw(Keyword::Mu)) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after 'mu'")?;
                let (name, _) = self.expect_lower_ident("self variable name")?;
                self.expect(Tok::Colon, "':' after self variable")?;
                let x = VarName::fresh(name);
                self.scope.push(x.clone());
                let body = self.ty()?;
                self.scope.pop();
                self.expect(Tok::RParen, "')' closing 'mu'")?;
                Ok(Type::rec(x, body))
            }
            Some(Tok::LBrace) => {
                let brace = self.bump().span;
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Ident(a)) => {
                        self.bump();
                        self.expect(Tok::Colon, "':' after field label")?;
                        let t = self.ty()?;
                        self.expect(Tok::RBrace, "'}' closing field declaration")?;
                        Ok(Type::fld(TermLabel(a), t))
                    }
                    Some(Tok::UpIdent(a)) => {
                        self.bump();
                        self.expect(Tok::Colon, "':' after type member label")?;
                        let lo = self.ty()?;
                        if self.at(&Tok::DotDot) {
                            self.bump();
                            let hi = self.ty()?;
                            self.expect(Tok::RBrace, "'}' closing type member declaration")?;
                            Ok(Type::typ_dec(TypeLabel(a), lo, hi))
                        } else {
                            Err(ParseError::TypeMemberNeedsBounds {
                                label: a,
                                span: self.peek().map(|t| t.span).unwrap_or(brace),
                            })
                        }
                    }
                    _ => Err(self.err("a field or type member label")),
                }
            }
            Some(Tok::Ident(x)) => {
                self.bump();
                self.expect(Tok::Dot, "'.' of a type projection")?;
                let (a, _) = self.expect_upper_ident("type member label")?;
                Ok(Type::Sel(self.lookup_var(&x), TypeLabel(a)))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.err("a type")),
        }
    }

    // ---- terms ---------------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Kw(Keyword::Lambda)) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after 'lambda'")?;
                let (name, _) = self.expect_lower_ident("parameter name")?;
                self.expect(Tok::Colon, "':' after parameter name")?;
                let ann = self.ty()?;
                self.expect(Tok::RParen, "')' after parameter type")?;
                let x = VarName::fresh(name);
                self.scope.push(x.clone());
                let body = self.term()?;
                self.scope.pop();
                Ok(Term::lambda(x, ann, body))
            }
            Some(Tok::Kw(Keyword::Nu)) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after 'nu'")?;
                let (name, _) = self.expect_lower_ident("self variable name")?;
                self.expect(Tok::Colon, "':' after self variable")?;
                // the self variable scopes over its own type
                let x = VarName::fresh(name);
                self.scope.push(x.clone());
                let ann = self.ty()?;
                self.expect(Tok::RParen, "')' after object type")?;
                let d = self.defs()?;
                self.scope.pop();
                Ok(Term::nu(x, ann, d))
            }
            Some(Tok::Kw(Keyword::Let)) => {
                self.bump();
                let (name, _) = self.expect_lower_ident("let-bound variable name")?;
                self.expect(Tok::Eq, "'=' after let-bound variable")?;
                let rhs = self.term()?;
                self.expect(Tok::Kw(Keyword::In), "'in'")?;
                let x = VarName::fresh(name);
                self.scope.push(x.clone());
                let body = self.term()?;
                self.scope.pop();
                Ok(Term::let_in(x, rhs, body))
            }
            Some(Tok::Ident(x)) => {
                self.bump();
                if self.at(&Tok::Dot) {
                    let dot = self.bump().span;
                    let (a, _) = self.expect_lower_ident("field label")?;
                    if self.at(&Tok::Dot) || self.at(&Tok::DotDot) {
                        return Err(ParseError::NotAnf {
                            span: self.peek().map(|t| t.span).unwrap_or(dot),
                        });
                    }
                    Ok(Term::SelTrm(self.lookup_var(&x), TermLabel(a)))
                } else if matches!(self.peek().map(|t| &t.tok), Some(Tok::Ident(_))) {
                    let t = self.bump();
                    let y = match t.tok {
                        Tok::Ident(y) => y,
                        _ => unreachable!(),
                    };
                    Ok(Term::App(self.lookup_var(&x), self.lookup_var(&y)))
                } else {
                    Ok(Term::Var(self.lookup_var(&x)))
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                if let Some(tok) = self.peek() {
                    if matches!(tok.tok, Tok::Dot | Tok::Ident(_)) {
                        return Err(ParseError::NotAnf { span: tok.span });
                    }
                }
                Ok(t)
            }
            _ => Err(self.err("a term")),
        }
    }

    // ---- definitions ----------------------------------------------------

    // aggregates nest to the right, mirroring intersection types so that
    // definition lists can be typed member by member against them
    fn defs(&mut self) -> Result<Def, ParseError> {
        let first = self.def_leaf()?;
        if self.at(&Tok::AndDef) {
            self.bump();
            let rest = self.defs()?;
            Ok(first.and(rest))
        } else {
            Ok(first)
        }
    }

    fn def_leaf(&mut self) -> Result<Def, ParseError> {
        self.expect(Tok::LBrace, "'{' starting a definition")?;
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(a)) => {
                self.bump();
                self.expect(Tok::Eq, "'=' after field label")?;
                let t = self.term()?;
                self.expect(Tok::RBrace, "'}' closing field definition")?;
                Ok(Def::Fld(TermLabel(a), t))
            }
            Some(Tok::UpIdent(a)) => {
                self.bump();
                self.expect(Tok::Eq, "'=' after type member label")?;
                let t = self.ty()?;
                self.expect(Tok::RBrace, "'}' closing type member definition")?;
                Ok(Def::Typ(TypeLabel(a), t))
            }
            _ => Err(self.err("a field or type member label")),
        }
    }

    // ---- contexts --------------------------------------------------------

    fn context(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::empty();
        if self.peek().is_none() {
            return Ok(ctx);
        }
        loop {
            let (name, span) = self.expect_lower_ident("a context binding")?;
            self.expect(Tok::Colon, "':' after context variable")?;
            let x = self.resolver.resolve(&name);
            // bindings may mention their own variable
            self.scope.push(x.clone());
            let t = self.ty()?;
            ctx.push(x, t)
                .map_err(|_| ParseError::DuplicateContextBinding { name, span })?;
            if self.at(&Tok::Semi) {
                self.bump();
            } else {
                break;
            }
        }
        Ok(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Syntax;

    #[test]
    fn parses_function_type() {
        let t = parse_type("all(x: {A: Bot .. Top}) x.A").unwrap();
        match t {
            Type::All(x, dom, cod) => {
                assert!(matches!(*dom, Type::TypDec(_, _, _)));
                assert_eq!(*cod, Type::Sel(x, TypeLabel("A".into())));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn intersection_is_right_associative() {
        let t = parse_type("Top & Bot & Top").unwrap();
        match t {
            Type::And(l, r) => {
                assert_eq!(*l, Type::Top);
                assert!(matches!(*r, Type::And(_, _)));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn type_member_requires_bounds() {
        assert!(matches!(
            parse_type("{A: Bot}"),
            Err(ParseError::TypeMemberNeedsBounds { .. })
        ));
    }

    #[test]
    fn chained_selection_is_rejected() {
        assert!(matches!(
            parse_term("x.a.b"),
            Err(ParseError::NotAnf { .. })
        ));
        assert!(matches!(
            parse_term("(x.a).b"),
            Err(ParseError::NotAnf { .. })
        ));
    }

    #[test]
    fn let_and_application() {
        let t = parse_term("let y = lambda(z: Top) z in y y").unwrap();
        match t {
            Term::Let(y, rhs, body) => {
                assert!(matches!(*rhs, Term::Val(_)));
                assert_eq!(*body, Term::App(y.clone(), y));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn lambda_binder_shadows() {
        // both occurrences of x refer to the binder, not a free x
        let t = parse_term("lambda(x: Top) x x").unwrap();
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn nu_self_scopes_over_type_and_defs() {
        let t = parse_term("nu(s: {A: Bot .. Top} & {a: s.A}) {A = Top} /\\ {a = s.a}").unwrap();
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn defs_nest_right_like_intersections() {
        let d = parse_defs("{a = x} /\\ {B = Top} /\\ {c = x}").unwrap();
        match &d {
            Def::And(_, r) => assert!(matches!(r.as_ref(), Def::And(_, _))),
            other => panic!("unexpected: {other:?}"),
        }
        assert_eq!(d.conjuncts().len(), 3);
    }

    #[test]
    fn context_binds_in_order_and_rejects_duplicates() {
        let ctx = parse_context("x: Top; y: Top").unwrap();
        assert_eq!(ctx.len(), 2);
        assert!(matches!(
            parse_context("x: Top; x: Bot"),
            Err(ParseError::DuplicateContextBinding { .. })
        ));
    }

    #[test]
    fn shared_resolver_gives_stable_identity() {
        let mut r = Resolver::new();
        let t1 = parse_term_with("x.a", &mut r).unwrap();
        let t2 = parse_term_with("x.a", &mut r).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn self_referential_context_binding() {
        let ctx = parse_context("y: mu(y: {a: Top})").unwrap();
        assert_eq!(ctx.len(), 1);
    }
}
