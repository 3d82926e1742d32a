//! The five rule systems: judgments, the schema registry, the derivation
//! validator, and precise typing of variables.

pub mod judgment;
pub mod precise;
pub mod registry;
pub mod validate;

pub use judgment::{
    rename_free_var, weaken_at, Derivation, Judgment, JudgmentKind, SubSystem, TypSystem,
};
pub use precise::{precise_decls_of_var, precise_types_of_var, PreciseEntry};
pub use registry::{lookup, rule_registry, RuleSchema};
pub use validate::{validate, Reason, ValidationError};
