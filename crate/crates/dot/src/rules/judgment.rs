//! Judgments of the seven forms used by the five rule systems, and the
//! derivation trees built from them.

use crate::syntax::{Context, Def, Syntax, Term, Type, VarName};

/// Which typing relation a typing judgment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypSystem {
    General,
    Tight,
    Precise,
    Invertible,
}

/// Which subtyping relation a subtyping judgment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubSystem {
    General,
    Tight,
}

/// The judgment kind tags used in derivation documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JudgmentKind {
    Typ,
    Subtyp,
    TypTight,
    SubtypTight,
    TypPrecise,
    TypInvertible,
    Defs,
}

impl JudgmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JudgmentKind::Typ => "typ",
            JudgmentKind::Subtyp => "subtyp",
            JudgmentKind::TypTight => "typ_tight",
            JudgmentKind::SubtypTight => "subtyp_tight",
            JudgmentKind::TypPrecise => "typ_precise",
            JudgmentKind::TypInvertible => "typ_invertible",
            JudgmentKind::Defs => "defs",
        }
    }

    pub fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "typ" => JudgmentKind::Typ,
            "subtyp" => JudgmentKind::Subtyp,
            "typ_tight" => JudgmentKind::TypTight,
            "subtyp_tight" => JudgmentKind::SubtypTight,
            "typ_precise" => JudgmentKind::TypPrecise,
            "typ_invertible" => JudgmentKind::TypInvertible,
            "defs" => JudgmentKind::Defs,
            _ => return None,
        })
    }
}

impl std::fmt::Display for JudgmentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A judgment: the conclusion of one rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgment {
    Typ {
        system: TypSystem,
        ctx: Context,
        subject: Term,
        ty: Type,
    },
    Subtyp {
        system: SubSystem,
        ctx: Context,
        lhs: Type,
        rhs: Type,
    },
    Defs {
        ctx: Context,
        defs: Def,
        ty: Type,
    },
}

impl Judgment {
    pub fn typ(system: TypSystem, ctx: Context, subject: Term, ty: Type) -> Self {
        Judgment::Typ {
            system,
            ctx,
            subject,
            ty,
        }
    }

    pub fn subtyp(system: SubSystem, ctx: Context, lhs: Type, rhs: Type) -> Self {
        Judgment::Subtyp {
            system,
            ctx,
            lhs,
            rhs,
        }
    }

    pub fn defs(ctx: Context, defs: Def, ty: Type) -> Self {
        Judgment::Defs { ctx, defs, ty }
    }

    pub fn kind(&self) -> JudgmentKind {
        match self {
            Judgment::Typ { system, .. } => match system {
                TypSystem::General => JudgmentKind::Typ,
                TypSystem::Tight => JudgmentKind::TypTight,
                TypSystem::Precise => JudgmentKind::TypPrecise,
                TypSystem::Invertible => JudgmentKind::TypInvertible,
            },
            Judgment::Subtyp { system, .. } => match system {
                SubSystem::General => JudgmentKind::Subtyp,
                SubSystem::Tight => JudgmentKind::SubtypTight,
            },
            Judgment::Defs { .. } => JudgmentKind::Defs,
        }
    }

    pub fn ctx(&self) -> &Context {
        match self {
            Judgment::Typ { ctx, .. } => ctx,
            Judgment::Subtyp { ctx, .. } => ctx,
            Judgment::Defs { ctx, .. } => ctx,
        }
    }

    /// Whole-judgment alpha-equivalence: contexts are compared as
    /// telescopes and subjects/types under the resulting correspondence.
    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        match (self, other) {
            (
                Judgment::Typ {
                    system: s1,
                    ctx: c1,
                    subject: t1,
                    ty: ty1,
                },
                Judgment::Typ {
                    system: s2,
                    ctx: c2,
                    subject: t2,
                    ty: ty2,
                },
            ) => {
                s1 == s2
                    && match c1.telescope_env(c2) {
                        Some(mut env) => {
                            t1.alpha_eq_in(t2, &mut env) && ty1.alpha_eq_in(ty2, &mut env)
                        }
                        None => false,
                    }
            }
            (
                Judgment::Subtyp {
                    system: s1,
                    ctx: c1,
                    lhs: l1,
                    rhs: r1,
                },
                Judgment::Subtyp {
                    system: s2,
                    ctx: c2,
                    lhs: l2,
                    rhs: r2,
                },
            ) => {
                s1 == s2
                    && match c1.telescope_env(c2) {
                        Some(mut env) => {
                            l1.alpha_eq_in(l2, &mut env) && r1.alpha_eq_in(r2, &mut env)
                        }
                        None => false,
                    }
            }
            (
                Judgment::Defs {
                    ctx: c1,
                    defs: d1,
                    ty: ty1,
                },
                Judgment::Defs {
                    ctx: c2,
                    defs: d2,
                    ty: ty2,
                },
            ) => match c1.telescope_env(c2) {
                Some(mut env) => d1.alpha_eq_in(d2, &mut env) && ty1.alpha_eq_in(ty2, &mut env),
                None => false,
            },
            _ => false,
        }
    }

    /// Applies a variable-for-variable substitution to every syntactic
    /// component, including the types inside the context.
    pub fn map_subst(&self, from: &VarName, to: &VarName) -> Judgment {
        let map_ctx = |ctx: &Context| {
            Context::from_bindings(
                ctx.bindings()
                    .iter()
                    .map(|(x, t)| (x.clone(), t.subst_var(from, to)))
                    .collect(),
            )
            .expect("substitution cannot introduce duplicate bindings")
        };
        match self {
            Judgment::Typ {
                system,
                ctx,
                subject,
                ty,
            } => Judgment::Typ {
                system: *system,
                ctx: map_ctx(ctx),
                subject: subject.subst_var(from, to),
                ty: ty.subst_var(from, to),
            },
            Judgment::Subtyp {
                system,
                ctx,
                lhs,
                rhs,
            } => Judgment::Subtyp {
                system: *system,
                ctx: map_ctx(ctx),
                lhs: lhs.subst_var(from, to),
                rhs: rhs.subst_var(from, to),
            },
            Judgment::Defs { ctx, defs, ty } => Judgment::Defs {
                ctx: map_ctx(ctx),
                defs: defs.subst_var(from, to),
                ty: ty.subst_var(from, to),
            },
        }
    }

    /// Replaces the context wholesale, keeping the rest of the judgment.
    pub fn with_ctx(&self, ctx: Context) -> Judgment {
        let mut j = self.clone();
        match &mut j {
            Judgment::Typ { ctx: c, .. } => *c = ctx,
            Judgment::Subtyp { ctx: c, .. } => *c = ctx,
            Judgment::Defs { ctx: c, .. } => *c = ctx,
        }
        j
    }
}

/// A derivation tree: a rule name, its conclusion, and premise subtrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: String,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(rule: &str, conclusion: Judgment, premises: Vec<Derivation>) -> Self {
        Derivation {
            rule: rule.to_string(),
            conclusion,
            premises,
        }
    }

    pub fn leaf(rule: &str, conclusion: Judgment) -> Self {
        Derivation::new(rule, conclusion, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }

    /// All rule names occurring in the tree, with repetition.
    pub fn rule_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Derivation, out: &mut Vec<&'a str>) {
            out.push(d.rule.as_str());
            for p in &d.premises {
                go(p, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// The node addressed by a path of child indices from the root.
    pub fn node_at(&self, path: &[usize]) -> Option<&Derivation> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    pub fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get_mut(i)?;
        }
        Some(cur)
    }

    /// Rewrites every node by applying `f` to its judgment, bottom-up.
    pub fn map_judgments(&self, f: &impl Fn(&Judgment) -> Judgment) -> Derivation {
        Derivation {
            rule: self.rule.clone(),
            conclusion: f(&self.conclusion),
            premises: self.premises.iter().map(|p| p.map_judgments(f)).collect(),
        }
    }
}

/// Weakening: inserts extra bindings at position `pos` of every node's
/// context. Sound because contexts in a derivation share the prefix up to
/// `pos` and the inserted variables are globally fresh uids.
pub fn weaken_at(d: &Derivation, pos: usize, extra: &[(VarName, Type)]) -> Derivation {
    d.map_judgments(&|j| j.with_ctx(j.ctx().with_inserted(pos, extra)))
}

/// Renames a free variable across an entire derivation, contexts included.
pub fn rename_free_var(d: &Derivation, from: &VarName, to: &VarName) -> Derivation {
    d.map_judgments(&|j| {
        let renamed = j.map_subst(from, to);
        // the context binder itself must be renamed too
        let ctx = Context::from_bindings(
            renamed
                .ctx()
                .bindings()
                .iter()
                .map(|(x, t)| {
                    let x2 = if x == from { to.clone() } else { x.clone() };
                    (x2, t.clone())
                })
                .collect(),
        )
        .expect("renaming to a fresh variable keeps bindings distinct");
        renamed.with_ctx(ctx)
    })
}
