//! A workbench for the DOT calculus: abstract syntax, a concrete surface
//! syntax, the five rule systems with a derivation validator, an inertness
//! checker, executable proof transformers for the soundness lemmas, a
//! small-step evaluator, and a bounded derivation search.

pub mod eval;
pub mod gen;
pub mod inert;
pub mod proof;
pub mod rules;
pub mod surface;
pub mod syntax;
