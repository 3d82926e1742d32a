//! The registry of rule schemas across the five systems: general typing
//! and subtyping, definition typing, tight typing and subtyping, precise
//! typing, and invertible typing.

use super::judgment::JudgmentKind;

use JudgmentKind::*;

/// Metadata for one inference rule schema. The structural check itself
/// lives in the validator; the registry pins name, system, and premise
/// kinds so arity and system mismatches can be reported uniformly.
#[derive(Clone, Debug)]
pub struct RuleSchema {
    pub name: &'static str,
    /// Judgment kind of the conclusion.
    pub system: JudgmentKind,
    /// Expected judgment kind of each premise, in order. Rules that extend
    /// the context have general-system premises there, matching the shapes
    /// of the tight figures.
    pub premise_kinds: &'static [JudgmentKind],
    /// Side conditions beyond premise matching, for documentation.
    pub side_conditions: &'static [&'static str],
}

impl RuleSchema {
    pub fn arity(&self) -> usize {
        self.premise_kinds.len()
    }
}

macro_rules! rule {
    ($name:literal, $sys:expr, [$($pk:expr),*], [$($sc:literal),*]) => {
        RuleSchema {
            name: $name,
            system: $sys,
            premise_kinds: &[$($pk),*],
            side_conditions: &[$($sc),*],
        }
    };
}

static REGISTRY: &[RuleSchema] = &[
    // general term typing
    rule!("Var", Typ, [], ["ctx(x) = T"]),
    rule!("All-I", Typ, [Typ], ["x not in fv(T)"]),
    rule!("All-E", Typ, [Typ, Typ], []),
    rule!("{}-I", Typ, [Defs], []),
    rule!("{}-E", Typ, [Typ], []),
    rule!("Let", Typ, [Typ, Typ], ["x not in fv(U)"]),
    rule!("Rec-I", Typ, [Typ], []),
    rule!("Rec-E", Typ, [Typ], []),
    rule!("And-I", Typ, [Typ, Typ], []),
    rule!("Sub", Typ, [Typ, Subtyp], []),
    // general subtyping
    rule!("Top", Subtyp, [], []),
    rule!("Bot", Subtyp, [], []),
    rule!("Refl", Subtyp, [], []),
    rule!("Trans", Subtyp, [Subtyp, Subtyp], []),
    rule!("And1-<:", Subtyp, [], []),
    rule!("And2-<:", Subtyp, [], []),
    rule!("<:-And", Subtyp, [Subtyp, Subtyp], []),
    rule!("Fld-<:-Fld", Subtyp, [Subtyp], []),
    rule!("Typ-<:-Typ", Subtyp, [Subtyp, Subtyp], []),
    rule!("All-<:-All", Subtyp, [Subtyp, Subtyp], ["premise binder fresh for ctx"]),
    rule!("<:-Sel", Subtyp, [Typ], []),
    rule!("Sel-<:", Subtyp, [Typ], []),
    // definition typing
    rule!("Def-Trm", Defs, [Typ], []),
    rule!("Def-Typ", Defs, [], ["bounds equal the alias"]),
    rule!("AndDef-I", Defs, [Defs, Defs], ["dom(d1), dom(d2) disjoint"]),
    // tight term typing
    rule!("Var-#", TypTight, [], ["ctx(x) = T"]),
    rule!("All-I-#", TypTight, [Typ], ["x not in fv(T)"]),
    rule!("All-E-#", TypTight, [TypTight, TypTight], []),
    rule!("{}-I-#", TypTight, [Defs], []),
    rule!("{}-E-#", TypTight, [TypTight], []),
    rule!("Let-#", TypTight, [TypTight, Typ], ["x not in fv(U)"]),
    rule!("Rec-I-#", TypTight, [TypTight], []),
    rule!("Rec-E-#", TypTight, [TypTight], []),
    rule!("And-I-#", TypTight, [TypTight, TypTight], []),
    rule!("Sub-#", TypTight, [TypTight, SubtypTight], []),
    // tight subtyping
    rule!("Top-#", SubtypTight, [], []),
    rule!("Bot-#", SubtypTight, [], []),
    rule!("Refl-#", SubtypTight, [], []),
    rule!("Trans-#", SubtypTight, [SubtypTight, SubtypTight], []),
    rule!("And1-<:-#", SubtypTight, [], []),
    rule!("And2-<:-#", SubtypTight, [], []),
    rule!("<:-And-#", SubtypTight, [SubtypTight, SubtypTight], []),
    rule!("Fld-<:-Fld-#", SubtypTight, [SubtypTight], []),
    rule!("Typ-<:-Typ-#", SubtypTight, [SubtypTight, SubtypTight], []),
    rule!("All-<:-All-#", SubtypTight, [SubtypTight, Subtyp], ["premise binder fresh for ctx"]),
    rule!("<:-Sel-#", SubtypTight, [TypPrecise], ["premise bounds tight"]),
    rule!("Sel-<:-#", SubtypTight, [TypPrecise], ["premise bounds tight"]),
    // precise typing
    rule!("Var!", TypPrecise, [], ["ctx(x) = T"]),
    rule!("Rec-E!", TypPrecise, [TypPrecise], []),
    rule!("And1-E!", TypPrecise, [TypPrecise], []),
    rule!("And2-E!", TypPrecise, [TypPrecise], []),
    rule!("All-I!", TypPrecise, [Typ], ["x not in fv(T)"]),
    rule!("{}-I!", TypPrecise, [Defs], []),
    // invertible typing for variables
    rule!("Var-##", TypInvertible, [TypPrecise], []),
    rule!("Fld-<:-##", TypInvertible, [TypInvertible, SubtypTight], []),
    rule!("Typ-<:-##", TypInvertible, [TypInvertible, SubtypTight, SubtypTight], []),
    rule!("Rec-I-##", TypInvertible, [TypInvertible], []),
    rule!("All-I-##", TypInvertible, [TypInvertible, SubtypTight, Subtyp], []),
    rule!("And-I-##", TypInvertible, [TypInvertible, TypInvertible], []),
    rule!("Sel-##", TypInvertible, [TypInvertible, TypPrecise], ["premise bounds tight"]),
    rule!("Top-##", TypInvertible, [TypInvertible], []),
    // invertible typing for values
    rule!("Val-##", TypInvertible, [TypPrecise], []),
    rule!("All-v-##", TypInvertible, [TypInvertible, SubtypTight, Subtyp], []),
    rule!("And-v-##", TypInvertible, [TypInvertible, TypInvertible], []),
    rule!("Sel-v-##", TypInvertible, [TypInvertible, TypPrecise], ["premise bounds tight"]),
    rule!("Top-v-##", TypInvertible, [TypInvertible], []),
];

/// All rule schemas of all five systems.
pub fn rule_registry() -> &'static [RuleSchema] {
    REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static RuleSchema> {
    REGISTRY.iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_counts_per_system() {
        let count = |k: JudgmentKind| REGISTRY.iter().filter(|r| r.system == k).count();
        assert_eq!(count(Typ), 10, "general typing");
        assert_eq!(count(Subtyp), 12, "general subtyping");
        assert_eq!(count(Defs), 3, "definition typing");
        assert_eq!(count(TypTight) + count(SubtypTight), 22, "tight");
        assert_eq!(count(TypPrecise), 6, "precise");
        assert_eq!(count(TypInvertible), 13, "invertible");
        assert_eq!(REGISTRY.len(), 66);
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = REGISTRY.iter().map(|r| r.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), REGISTRY.len());
    }

    #[test]
    fn selected_lookups() {
        assert!(lookup("<:-Sel-#").is_some());
        assert!(lookup("Bot-##").is_none());
        assert_eq!(lookup("Trans").unwrap().arity(), 2);
    }
}
