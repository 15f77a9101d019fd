//! A simply typed lambda calculus with pairs and a `Top` type, in which
//! isomorphic types are interconvertible through explicit witnesses.
//!
//! - [`ast`]: types, witnesses, nameless terms, contexts
//! - [`syntax`]: parsing, elaboration from named terms, printing
//! - [`iso`]: applying, checking and synthesizing isomorphism witnesses
//! - [`typing`]: type inference and the normal/neutral/value classifiers
//! - [`rewrite`]: substitution, root reduction rules and the progress strategy
//! - [`eval`]: fuel-bounded evaluation with full traces
//! - [`metatheory`]: random well-typed terms and property checks

pub mod ast;
pub mod eval;
pub mod iso;
pub mod metatheory;
pub mod rewrite;
pub mod syntax;
pub mod typing;

pub use ast::{Context, Side, Term, Type, Witness};
