//! Abstract syntax of the DOT calculus: variables, labels, types, terms,
//! values, definitions, and typing contexts, together with free variables,
//! alpha-equivalence, and capture-avoiding variable-for-variable substitution.
//!
//! Variable identity is a globally unique `uid`; the display name is kept
//! only for printing. Terms are in administrative normal form: selection
//! and application receivers are variables by construction.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// A variable with a human-readable name and a globally unique identity.
/// Equality, ordering and hashing are by `uid` only.
#[derive(Clone, Debug, Eq)]
pub struct VarName {
    pub name: String,
    pub uid: u64,
}

impl VarName {
    pub fn fresh(name: impl Into<String>) -> Self {
        VarName {
            name: name.into(),
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// A copy of this variable under a new uid, used when a binder has to
    /// be renamed to avoid capture.
    pub fn refreshed(&self) -> Self {
        VarName::fresh(self.name.clone())
    }
}

impl PartialEq for VarName {
    fn eq(&self, other: &Self) -> bool {
        self.uid == other.uid
    }
}

impl PartialOrd for VarName {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarName {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.uid.cmp(&other.uid)
    }
}

impl std::hash::Hash for VarName {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.uid.hash(state);
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Label of a term member (`a`, `b`, `c`). Disjoint from type labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermLabel(pub String);

/// Label of a type member (`A`, `B`, `C`). Disjoint from term labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeLabel(pub String);

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// DOT types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Top,
    Bot,
    /// Dependent function type `all(x: S) T`; `x` is bound in the codomain only.
    All(VarName, Box<Type>, Box<Type>),
    /// Recursive type `mu(x: T)`; `x` is bound in the body.
    Rec(VarName, Box<Type>),
    /// Field declaration `{a: T}`.
    Fld(TermLabel, Box<Type>),
    /// Type member declaration `{A: S .. U}`.
    TypDec(TypeLabel, Box<Type>, Box<Type>),
    /// Type projection `x.A`; the receiver is a variable (ANF).
    Sel(VarName, TypeLabel),
    /// Intersection `S & T`.
    And(Box<Type>, Box<Type>),
}

/// DOT terms, in administrative normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(VarName),
    Val(Box<Value>),
    /// Field selection `x.a`.
    SelTrm(VarName, TermLabel),
    /// Application `x y`.
    App(VarName, VarName),
    /// `let x = t in u`.
    Let(VarName, Box<Term>, Box<Term>),
}

/// DOT values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    /// `lambda(x: T) t`; `x` is bound in the body only.
    Lambda(VarName, Type, Box<Term>),
    /// `nu(x: T) d`; the self variable `x` is bound in both `T` and `d`.
    Nu(VarName, Type, Def),
}

/// Definitions inside an object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Def {
    Fld(TermLabel, Term),
    Typ(TypeLabel, Type),
    And(Box<Def>, Box<Def>),
}

impl Def {
    /// Aggregate two definitions, keeping the left-nested flattened shape.
    pub fn and(self, other: Def) -> Def {
        Def::And(Box::new(self), Box::new(other))
    }

    /// The flattened list of leaf definitions, left to right.
    pub fn conjuncts(&self) -> Vec<&Def> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Def, out: &mut Vec<&'a Def>) {
            match d {
                Def::And(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                leaf => out.push(leaf),
            }
        }
        go(self, &mut out);
        out
    }
}

impl Type {
    pub fn all(x: VarName, dom: Type, cod: Type) -> Type {
        Type::All(x, Box::new(dom), Box::new(cod))
    }
    pub fn rec(x: VarName, body: Type) -> Type {
        Type::Rec(x, Box::new(body))
    }
    pub fn fld(a: TermLabel, t: Type) -> Type {
        Type::Fld(a, Box::new(t))
    }
    pub fn typ_dec(a: TypeLabel, lo: Type, hi: Type) -> Type {
        Type::TypDec(a, Box::new(lo), Box::new(hi))
    }
    pub fn and(l: Type, r: Type) -> Type {
        Type::And(Box::new(l), Box::new(r))
    }

    /// The flattened conjuncts of a top-level intersection.
    pub fn conjuncts(&self) -> Vec<&Type> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Type, out: &mut Vec<&'a Type>) {
            match t {
                Type::And(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                leaf => out.push(leaf),
            }
        }
        go(self, &mut out);
        out
    }

    /// Number of AST nodes, used for size-based test assertions.
    pub fn size(&self) -> usize {
        match self {
            Type::Top | Type::Bot | Type::Sel(_, _) => 1,
            Type::Fld(_, t) | Type::Rec(_, t) => 1 + t.size(),
            Type::All(_, s, t) | Type::TypDec(_, s, t) | Type::And(s, t) => {
                1 + s.size() + t.size()
            }
        }
    }
}

impl Term {
    pub fn var(x: VarName) -> Term {
        Term::Var(x)
    }
    pub fn val(v: Value) -> Term {
        Term::Val(Box::new(v))
    }
    pub fn let_in(x: VarName, rhs: Term, body: Term) -> Term {
        Term::Let(x, Box::new(rhs), Box::new(body))
    }
    pub fn lambda(x: VarName, ty: Type, body: Term) -> Term {
        Term::val(Value::Lambda(x, ty, Box::new(body)))
    }
    pub fn nu(x: VarName, ty: Type, defs: Def) -> Term {
        Term::val(Value::Nu(x, ty, defs))
    }
}

/// A stack of paired binders used while comparing two ASTs up to
/// alpha-renaming. Lookup is from the innermost pair outwards, so
/// shadowing behaves like textual scoping.
#[derive(Default, Debug)]
pub struct AlphaEnv {
    pairs: Vec<(VarName, VarName)>,
}

impl AlphaEnv {
    pub fn new() -> Self {
        AlphaEnv::default()
    }

    pub fn from_pairs(pairs: Vec<(VarName, VarName)>) -> Self {
        AlphaEnv { pairs }
    }

    pub fn push(&mut self, l: VarName, r: VarName) {
        self.pairs.push((l, r));
    }

    pub fn pop(&mut self) {
        self.pairs.pop();
    }

    /// Whether `l` (a left-side variable) corresponds to `r` (right-side).
    pub fn var_eq(&self, l: &VarName, r: &VarName) -> bool {
        for (pl, pr) in self.pairs.iter().rev() {
            if pl == l || pr == r {
                return pl == l && pr == r;
            }
        }
        l == r
    }
}

/// Syntax-generic operations shared by types, terms, values and definitions.
pub trait Syntax: Sized + Clone {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>);
    fn subst_var(&self, from: &VarName, to: &VarName) -> Self;
    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool;

    fn free_vars(&self) -> BTreeSet<VarName> {
        let mut acc = BTreeSet::new();
        self.free_vars_acc(&mut Vec::new(), &mut acc);
        acc
    }

    fn alpha_eq(&self, other: &Self) -> bool {
        self.alpha_eq_in(other, &mut AlphaEnv::new())
    }
}

fn note_var(x: &VarName, bound: &[VarName], acc: &mut BTreeSet<VarName>) {
    if !bound.contains(x) {
        acc.insert(x.clone());
    }
}

/// Substitution under a binder. If the binder shadows `from`, the scope is
/// left untouched; if the binder collides with `to`, it is refreshed first
/// so the incoming variable is not captured.
fn under_binder<S: Syntax>(
    binder: &VarName,
    scope: &S,
    from: &VarName,
    to: &VarName,
) -> (VarName, S) {
    if binder == from {
        (binder.clone(), scope.clone())
    } else if binder == to {
        let fresh = binder.refreshed();
        let renamed = scope.subst_var(binder, &fresh);
        (fresh, renamed.subst_var(from, to))
    } else {
        (binder.clone(), scope.subst_var(from, to))
    }
}

impl Syntax for Type {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>) {
        match self {
            Type::Top | Type::Bot => {}
            Type::All(x, s, t) => {
                s.free_vars_acc(bound, acc);
                bound.push(x.clone());
                t.free_vars_acc(bound, acc);
                bound.pop();
            }
            Type::Rec(x, t) => {
                bound.push(x.clone());
                t.free_vars_acc(bound, acc);
                bound.pop();
            }
            Type::Fld(_, t) => t.free_vars_acc(bound, acc),
            Type::TypDec(_, s, t) => {
                s.free_vars_acc(bound, acc);
                t.free_vars_acc(bound, acc);
            }
            Type::Sel(x, _) => note_var(x, bound, acc),
            Type::And(l, r) => {
                l.free_vars_acc(bound, acc);
                r.free_vars_acc(bound, acc);
            }
        }
    }

    fn subst_var(&self, from: &VarName, to: &VarName) -> Self {
        match self {
            Type::Top => Type::Top,
            Type::Bot => Type::Bot,
            Type::All(x, s, t) => {
                let s2 = s.subst_var(from, to);
                let (x2, t2) = under_binder(x, t.as_ref(), from, to);
                Type::all(x2, s2, t2)
            }
            Type::Rec(x, t) => {
                let (x2, t2) = under_binder(x, t.as_ref(), from, to);
                Type::rec(x2, t2)
            }
            Type::Fld(a, t) => Type::fld(a.clone(), t.subst_var(from, to)),
            Type::TypDec(a, s, t) => {
                Type::typ_dec(a.clone(), s.subst_var(from, to), t.subst_var(from, to))
            }
            Type::Sel(x, a) => {
                let x2 = if x == from { to.clone() } else { x.clone() };
                Type::Sel(x2, a.clone())
            }
            Type::And(l, r) => Type::and(l.subst_var(from, to), r.subst_var(from, to)),
        }
    }

    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool {
        match (self, other) {
            (Type::Top, Type::Top) | (Type::Bot, Type::Bot) => true,
            (Type::All(x1, s1, t1), Type::All(x2, s2, t2)) => {
                if !s1.alpha_eq_in(s2, env) {
                    return false;
                }
                env.push(x1.clone(), x2.clone());
                let r = t1.alpha_eq_in(t2, env);
                env.pop();
                r
            }
            (Type::Rec(x1, t1), Type::Rec(x2, t2)) => {
                env.push(x1.clone(), x2.clone());
                let r = t1.alpha_eq_in(t2, env);
                env.pop();
                r
            }
            (Type::Fld(a1, t1), Type::Fld(a2, t2)) => a1 == a2 && t1.alpha_eq_in(t2, env),
            (Type::TypDec(a1, s1, t1), Type::TypDec(a2, s2, t2)) => {
                a1 == a2 && s1.alpha_eq_in(s2, env) && t1.alpha_eq_in(t2, env)
            }
            (Type::Sel(x1, a1), Type::Sel(x2, a2)) => a1 == a2 && env.var_eq(x1, x2),
            (Type::And(l1, r1), Type::And(l2, r2)) => {
                l1.alpha_eq_in(l2, env) && r1.alpha_eq_in(r2, env)
            }
            _ => false,
        }
    }
}

impl Syntax for Term {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>) {
        match self {
            Term::Var(x) => note_var(x, bound, acc),
            Term::Val(v) => v.free_vars_acc(bound, acc),
            Term::SelTrm(x, _) => note_var(x, bound, acc),
            Term::App(f, y) => {
                note_var(f, bound, acc);
                note_var(y, bound, acc);
            }
            Term::Let(x, rhs, body) => {
                rhs.free_vars_acc(bound, acc);
                bound.push(x.clone());
                body.free_vars_acc(bound, acc);
                bound.pop();
            }
        }
    }

    fn subst_var(&self, from: &VarName, to: &VarName) -> Self {
        let sub = |x: &VarName| if x == from { to.clone() } else { x.clone() };
        match self {
            Term::Var(x) => Term::Var(sub(x)),
            Term::Val(v) => Term::val(v.subst_var(from, to)),
            Term::SelTrm(x, a) => Term::SelTrm(sub(x), a.clone()),
            Term::App(f, y) => Term::App(sub(f), sub(y)),
            Term::Let(x, rhs, body) => {
                let rhs2 = rhs.subst_var(from, to);
                let (x2, body2) = under_binder(x, body.as_ref(), from, to);
                Term::let_in(x2, rhs2, body2)
            }
        }
    }

    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool {
        match (self, other) {
            (Term::Var(x1), Term::Var(x2)) => env.var_eq(x1, x2),
            (Term::Val(v1), Term::Val(v2)) => v1.alpha_eq_in(v2, env),
            (Term::SelTrm(x1, a1), Term::SelTrm(x2, a2)) => a1 == a2 && env.var_eq(x1, x2),
            (Term::App(f1, y1), Term::App(f2, y2)) => env.var_eq(f1, f2) && env.var_eq(y1, y2),
            (Term::Let(x1, r1, b1), Term::Let(x2, r2, b2)) => {
                if !r1.alpha_eq_in(r2, env) {
                    return false;
                }
                env.push(x1.clone(), x2.clone());
                let r = b1.alpha_eq_in(b2, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
}

impl Syntax for Value {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>) {
        match self {
            Value::Lambda(x, ty, body) => {
                ty.free_vars_acc(bound, acc);
                bound.push(x.clone());
                body.free_vars_acc(bound, acc);
                bound.pop();
            }
            Value::Nu(x, ty, defs) => {
                bound.push(x.clone());
                ty.free_vars_acc(bound, acc);
                defs.free_vars_acc(bound, acc);
                bound.pop();
            }
        }
    }

    fn subst_var(&self, from: &VarName, to: &VarName) -> Self {
        match self {
            Value::Lambda(x, ty, body) => {
                let ty2 = ty.subst_var(from, to);
                let (x2, body2) = under_binder(x, body.as_ref(), from, to);
                Value::Lambda(x2, ty2, Box::new(body2))
            }
            Value::Nu(x, ty, defs) => {
                // The self variable scopes over both the type and the defs,
                // so both move together under the binder.
                let pair = (ty.clone(), defs.clone());
                let (x2, (ty2, defs2)) = under_binder(x, &pair, from, to);
                Value::Nu(x2, ty2, defs2)
            }
        }
    }

    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool {
        match (self, other) {
            (Value::Lambda(x1, t1, b1), Value::Lambda(x2, t2, b2)) => {
                if !t1.alpha_eq_in(t2, env) {
                    return false;
                }
                env.push(x1.clone(), x2.clone());
                let r = b1.alpha_eq_in(b2, env);
                env.pop();
                r
            }
            (Value::Nu(x1, t1, d1), Value::Nu(x2, t2, d2)) => {
                env.push(x1.clone(), x2.clone());
                let r = t1.alpha_eq_in(t2, env) && d1.alpha_eq_in(d2, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
}

impl Syntax for Def {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>) {
        match self {
            Def::Fld(_, t) => t.free_vars_acc(bound, acc),
            Def::Typ(_, t) => t.free_vars_acc(bound, acc),
            Def::And(l, r) => {
                l.free_vars_acc(bound, acc);
                r.free_vars_acc(bound, acc);
            }
        }
    }

    fn subst_var(&self, from: &VarName, to: &VarName) -> Self {
        match self {
            Def::Fld(a, t) => Def::Fld(a.clone(), t.subst_var(from, to)),
            Def::Typ(a, t) => Def::Typ(a.clone(), t.subst_var(from, to)),
            Def::And(l, r) => Def::And(
                Box::new(l.subst_var(from, to)),
                Box::new(r.subst_var(from, to)),
            ),
        }
    }

    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool {
        match (self, other) {
            (Def::Fld(a1, t1), Def::Fld(a2, t2)) => a1 == a2 && t1.alpha_eq_in(t2, env),
            (Def::Typ(a1, t1), Def::Typ(a2, t2)) => a1 == a2 && t1.alpha_eq_in(t2, env),
            (Def::And(l1, r1), Def::And(l2, r2)) => {
                l1.alpha_eq_in(l2, env) && r1.alpha_eq_in(r2, env)
            }
            _ => false,
        }
    }
}

// Pairs are only needed to move a nu binder's type and defs together.
impl<A: Syntax, B: Syntax> Syntax for (A, B) {
    fn free_vars_acc(&self, bound: &mut Vec<VarName>, acc: &mut BTreeSet<VarName>) {
        self.0.free_vars_acc(bound, acc);
        self.1.free_vars_acc(bound, acc);
    }
    fn subst_var(&self, from: &VarName, to: &VarName) -> Self {
        (self.0.subst_var(from, to), self.1.subst_var(from, to))
    }
    fn alpha_eq_in(&self, other: &Self, env: &mut AlphaEnv) -> bool {
        self.0.alpha_eq_in(&other.0, env) && self.1.alpha_eq_in(&other.1, env)
    }
}

/// An ordered typing context Γ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    bindings: Vec<(VarName, Type)>,
}

/// Raised when a context would bind the same variable twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateBinding(pub VarName);

impl fmt::Display for DuplicateBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variable {} is already bound in the context", self.0)
    }
}

impl std::error::Error for DuplicateBinding {}

impl Context {
    pub fn empty() -> Self {
        Context::default()
    }

    pub fn from_bindings(bindings: Vec<(VarName, Type)>) -> Result<Self, DuplicateBinding> {
        let mut ctx = Context::empty();
        for (x, t) in bindings {
            ctx.push(x, t)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, x: VarName, ty: Type) -> Result<(), DuplicateBinding> {
        if self.lookup(&x).is_some() {
            return Err(DuplicateBinding(x));
        }
        self.bindings.push((x, ty));
        Ok(())
    }

    pub fn extended(&self, x: VarName, ty: Type) -> Result<Self, DuplicateBinding> {
        let mut ctx = self.clone();
        ctx.push(x, ty)?;
        Ok(ctx)
    }

    pub fn lookup(&self, x: &VarName) -> Option<&Type> {
        self.bindings
            .iter()
            .find(|(v, _)| v == x)
            .map(|(_, t)| t)
    }

    pub fn position(&self, x: &VarName) -> Option<usize> {
        self.bindings.iter().position(|(v, _)| v == x)
    }

    pub fn bindings(&self) -> &[(VarName, Type)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Builds the alpha correspondence between two contexts read as
    /// telescopes: positions must agree and each pair of types must be
    /// alpha-equivalent under the pairs collected so far.
    pub fn telescope_env(&self, other: &Context) -> Option<AlphaEnv> {
        if self.len() != other.len() {
            return None;
        }
        let mut env = AlphaEnv::new();
        for ((x1, t1), (x2, t2)) in self.bindings.iter().zip(other.bindings.iter()) {
            // pair first: bindings may mention their own variable
            env.push(x1.clone(), x2.clone());
            if !t1.alpha_eq_in(t2, &mut env) {
                return None;
            }
        }
        Some(env)
    }

    /// Like `telescope_env`, but allows `self` to extend `prefix`; returns
    /// the correspondence for the shared prefix plus the extra bindings.
    pub fn telescope_env_prefix(
        &self,
        prefix: &Context,
    ) -> Option<(AlphaEnv, &[(VarName, Type)])> {
        if self.len() < prefix.len() {
            return None;
        }
        let mut env = AlphaEnv::new();
        for ((x1, t1), (x2, t2)) in self.bindings.iter().zip(prefix.bindings.iter()) {
            env.push(x1.clone(), x2.clone());
            if !t1.alpha_eq_in(t2, &mut env) {
                return None;
            }
        }
        Some((env, &self.bindings[prefix.len()..]))
    }

    pub fn alpha_eq(&self, other: &Context) -> bool {
        self.telescope_env(other).is_some()
    }

    /// Replaces the type bound to `x`, keeping its position (narrowing).
    pub fn with_replaced(&self, x: &VarName, ty: Type) -> Option<Context> {
        let pos = self.position(x)?;
        let mut ctx = self.clone();
        ctx.bindings[pos].1 = ty;
        Some(ctx)
    }

    /// Inserts bindings at `pos`, shifting later ones (weakening).
    pub fn with_inserted(&self, pos: usize, extra: &[(VarName, Type)]) -> Context {
        let mut bindings = self.bindings.clone();
        for (i, b) in extra.iter().enumerate() {
            bindings.insert(pos + i, b.clone());
        }
        Context { bindings }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> VarName {
        VarName::fresh(name)
    }
    fn tl(s: &str) -> TypeLabel {
        TypeLabel(s.into())
    }
    fn fl(s: &str) -> TermLabel {
        TermLabel(s.into())
    }

    #[test]
    fn free_vars_of_top_is_empty() {
        assert!(Type::Top.free_vars().is_empty());
    }

    #[test]
    fn free_vars_bound_by_all() {
        let x = v("x");
        let t = Type::all(x.clone(), Type::Top, Type::Sel(x.clone(), tl("A")));
        assert!(t.free_vars().is_empty());
    }

    #[test]
    fn free_vars_of_let() {
        // let x = y in x z  ->  {y, z}
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let t = Term::let_in(
            x.clone(),
            Term::Var(y.clone()),
            Term::App(x.clone(), z.clone()),
        );
        let fv = t.free_vars();
        assert_eq!(fv, [y, z].into_iter().collect());
    }

    #[test]
    fn subst_simple() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let t = Term::App(x.clone(), z.clone());
        assert_eq!(t.subst_var(&x, &y), Term::App(y.clone(), z));
    }

    #[test]
    fn subst_shadowed() {
        let (x, y) = (v("x"), v("y"));
        let lam = Term::lambda(x.clone(), Type::Top, Term::Var(x.clone()));
        assert!(lam.subst_var(&x, &y).alpha_eq(&lam));
    }

    #[test]
    fn subst_capture_avoided() {
        // [z := x] mu(x: {a: z.A})  ==  mu(x': {a: x.A}) with x' fresh
        let (x, z) = (v("x"), v("z"));
        let t = Type::rec(
            x.clone(),
            Type::fld(fl("a"), Type::Sel(z.clone(), tl("A"))),
        );
        let got = t.subst_var(&z, &x);
        let xp = v("x");
        let want = Type::rec(xp, Type::fld(fl("a"), Type::Sel(x.clone(), tl("A"))));
        assert!(got.alpha_eq(&want));
        // and x must now occur free
        assert!(got.free_vars().contains(&x));
    }

    #[test]
    fn alpha_eq_rec_binders() {
        let (x, y) = (v("x"), v("y"));
        let t1 = Type::rec(x, Type::fld(fl("a"), Type::Top));
        let t2 = Type::rec(y, Type::fld(fl("a"), Type::Top));
        assert!(t1.alpha_eq(&t2));
    }

    #[test]
    fn alpha_eq_distinguishes_free_vars() {
        let (x, y) = (v("x"), v("y"));
        assert!(!Type::Sel(x, tl("A")).alpha_eq(&Type::Sel(y, tl("A"))));
    }

    #[test]
    fn alpha_eq_all_binders() {
        let (x, y) = (v("x"), v("y"));
        let t1 = Type::all(x.clone(), Type::Top, Type::Sel(x, tl("A")));
        let t2 = Type::all(y.clone(), Type::Top, Type::Sel(y, tl("A")));
        assert!(t1.alpha_eq(&t2));
    }

    #[test]
    fn context_rejects_duplicates() {
        let x = v("x");
        let mut g = Context::empty();
        g.push(x.clone(), Type::Top).unwrap();
        assert!(g.push(x, Type::Bot).is_err());
    }

    #[test]
    fn telescope_env_matches_up_to_alpha() {
        let (x1, x2) = (v("x"), v("x"));
        let (m1, m2) = (v("s"), v("t"));
        let g1 = Context::from_bindings(vec![(
            x1.clone(),
            Type::rec(m1, Type::fld(fl("a"), Type::Top)),
        )])
        .unwrap();
        let g2 = Context::from_bindings(vec![(
            x2.clone(),
            Type::rec(m2, Type::fld(fl("a"), Type::Top)),
        )])
        .unwrap();
        let env = g1.telescope_env(&g2).unwrap();
        assert!(env.var_eq(&x1, &x2));
    }
}
