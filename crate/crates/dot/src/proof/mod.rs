//! Executable proof transformers: embeddings between the rule systems,
//! the tight and invertible translations, narrowing and substitution,
//! canonical forms, and a bounded derivation search.

pub mod canon;
pub mod embed;
pub mod narrow;
pub mod search;
pub mod subst;
pub mod transform;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("context is not inert: binding {binding} has {violation}")]
    NotInert { binding: String, violation: String },
    #[error("rule {rule} cannot occur here: {place}")]
    UnexpectedRule { rule: String, place: &'static str },
    #[error("derivation has the wrong shape: {0}")]
    Malformed(String),
}

pub use canon::{
    canon_fun_val, canon_fun_var, canon_obj_val, canon_obj_var, value_precise, CanonFun,
    CanonFunVal, CanonObj, CanonObjVal,
};
pub use embed::{precise_var_to_general, tight_to_general};
pub use narrow::narrow;
pub use search::{infer_type, search_sub, search_typ, SearchConfig};
pub use subst::subst_deriv;
pub use transform::{general_to_tight, sel_premise, tight_to_invertible};
